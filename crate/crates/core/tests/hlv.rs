mod common;

use common::*;
use qtsym::hlv::{
    check_corollary, check_stability, check_theorem7, hh, hh_pair, omega, theorem7_sides,
    SlotSubstitution,
};
use qtsym::partition::{partitions_up_to, Partition};
use qtsym::plethysm::{GradedSeries, Grading};
use qtsym::symfun::{h, p, MultiSymFunc};
use qtsym::{Error, RatFunc};

fn x(k: usize) -> Vec<String> {
    MultiSymFunc::default_alphabets(k)
}

#[test]
fn one_alphabet_is_the_identity() {
    let h1 = hh(1, 4).unwrap();
    assert_eq!(*h1, MultiSymFunc::from_sym(&p(1), "X1"));
}

#[test]
fn two_alphabets_give_the_product() {
    let h2 = hh(2, 5).unwrap();
    assert_eq!(*h2, MultiSymFunc::tensor(&x(2), &[p(1), p(1)]).unwrap());
}

#[test]
fn components_are_diagonal_and_symmetric() {
    for k in 2..=3 {
        let v = hh(k, 3).unwrap();
        for key in v.terms().keys() {
            let sizes: Vec<usize> = key.0.iter().map(Partition::size).collect();
            assert!(sizes.iter().all(|&s| s == sizes[0]), "{sizes:?}");
        }
        let perms: Vec<Vec<usize>> = if k == 2 {
            vec![vec![1, 0]]
        } else {
            vec![vec![1, 0, 2], vec![0, 2, 1], vec![2, 0, 1], vec![1, 2, 0], vec![2, 1, 0]]
        };
        for perm in perms {
            assert_eq!(v.permute_slots(&perm), *v, "k={k} perm={perm:?}");
        }
    }
}

#[test]
fn exponential_recovers_omega() {
    for k in 1..=3 {
        for n in 0..=4 {
            if k == 3 && n == 4 {
                continue;
            }
            let om = omega(n, &SlotSubstitution::identity(k)).unwrap();
            let scaled = hh(k, n).unwrap().scale(&RatFunc::big_q().recip().unwrap());
            let back = GradedSeries::from_element(&scaled, n, Grading::Alphabet("X1".into()))
                .unwrap()
                .pexp()
                .unwrap()
                .to_element();
            assert_eq!(back, om, "k={k} n={n}");
        }
    }
}

#[test]
fn coefficients_are_polynomials() {
    for k in 3..=4 {
        let v = hh(k, 3).unwrap();
        for (key, c) in v.terms() {
            assert!(c.is_polynomial(), "k={k} {key:?}: {c}");
        }
    }
}

#[test]
fn stability() {
    assert!(check_stability(2, 4).unwrap());
    assert!(check_stability(3, 3).unwrap());
    assert!(matches!(check_stability(1, 3), Err(Error::Precondition(_))));
}

#[test]
fn pairing_values() {
    let pr = hh_pair(&[h(1), h(1), h(1)], 4).unwrap();
    assert_eq!(pr.value, int(1));
    assert!(pr.warning.is_none());
    let pr = hh_pair(&[h(1), h(2), h(1)], 4).unwrap();
    assert_eq!(pr.value, RatFunc::zero());
    assert!(pr.warning.is_some());
    assert!(hh_pair(&[h(3), h(3)], 2).is_err());
    assert!(hh_pair(&vec![h(1); 9], 2).is_err());
}

#[test]
fn theorem7_small() {
    let ps: Vec<Partition> = partitions_up_to(3).into_iter().filter(|l| !l.is_empty()).collect();
    let mut checked = 0;
    for l in &ps {
        for mu in &ps {
            if mu.part(0) > l.size() || l.size() > mu.size() {
                assert!(matches!(theorem7_sides(l, mu, 3), Err(Error::Precondition(_))));
                continue;
            }
            assert!(check_theorem7(l, mu, 3).unwrap(), "{l:?} {mu:?}");
            checked += 1;
        }
    }
    assert!(checked > 5);
}

#[test]
fn corollary_small() {
    for k in 1..=3 {
        for l in partitions_up_to(k).into_iter().filter(|l| !l.is_empty()) {
            assert!(check_corollary(&l, k, k).unwrap(), "{l:?} k={k}");
        }
    }
}

#[test]
fn substitution_of_one_drops_a_slot() {
    let one = qtsym::plethysm::AlphabetExpr::constant(int(1));
    let sub = SlotSubstitution::identity(3).with(2, one);
    let om3 = omega(2, &sub).unwrap();
    let om2 = omega(2, &SlotSubstitution::identity(2)).unwrap();
    assert_eq!(om3, om2);
}

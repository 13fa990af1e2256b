//! Rational change-of-basis tables between the classical bases and the
//! power sums, cached per (basis, degree).

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, RwLock};

use num_traits::{One, Zero};

use crate::coeff::BigRat;
use crate::partition::{partitions_of, Partition};

/// Sparse rational combination of power sums.
pub(crate) type RatSym = BTreeMap<Partition, BigRat>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub(crate) enum Classical {
    P,
    M,
    E,
    H,
    S,
}

/// For one degree: every `b_λ` in the p-basis, and every `p_ρ` in the b-basis.
#[derive(Debug)]
pub(crate) struct Table {
    pub to_p: BTreeMap<Partition, RatSym>,
    pub from_p: BTreeMap<Partition, RatSym>,
}

type Cache<K, V> = RwLock<HashMap<K, Arc<V>>>;

static TABLES: LazyLock<Cache<(Classical, usize), Table>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

pub(crate) fn table(b: Classical, n: usize) -> Arc<Table> {
    if let Some(t) = TABLES.read().expect("basis cache poisoned").get(&(b, n)) {
        return t.clone();
    }
    let t = Arc::new(build(b, n));
    TABLES
        .write()
        .expect("basis cache poisoned")
        .entry((b, n))
        .or_insert(t)
        .clone()
}

fn build(b: Classical, n: usize) -> Table {
    let parts = partitions_of(n);
    let to_p: BTreeMap<Partition, RatSym> =
        parts.iter().map(|l| (l.clone(), expand(b, l))).collect();
    let from_p = invert(&parts, &to_p);
    Table { to_p, from_p }
}

fn expand(b: Classical, l: &Partition) -> RatSym {
    match b {
        Classical::P => single(l.clone(), BigRat::one()),
        Classical::H => product(l.parts().iter().map(|&k| h_n(k))),
        Classical::E => product(l.parts().iter().map(|&k| e_n(k))),
        Classical::M => m_in_p(l.size())[l].clone(),
        Classical::S => schur(l),
    }
}

fn single(l: Partition, c: BigRat) -> RatSym {
    let mut m = RatSym::new();
    m.insert(l, c);
    m
}

pub(crate) fn rs_mul(a: &RatSym, b: &RatSym) -> RatSym {
    let mut out = RatSym::new();
    for (la, ca) in a {
        for (lb, cb) in b {
            add_term(&mut out, la.union(lb), ca * cb);
        }
    }
    out
}

fn add_term(m: &mut RatSym, l: Partition, c: BigRat) {
    if c.is_zero() {
        return;
    }
    let e = m.entry(l.clone()).or_insert_with(BigRat::zero);
    *e += c;
    if e.is_zero() {
        m.remove(&l);
    }
}

fn rs_add(a: &RatSym, b: &RatSym, sign: &BigRat) -> RatSym {
    let mut out = a.clone();
    for (l, c) in b {
        add_term(&mut out, l.clone(), c * sign);
    }
    out
}

fn product(factors: impl Iterator<Item = RatSym>) -> RatSym {
    factors.fold(single(Partition::empty(), BigRat::one()), |acc, f| {
        rs_mul(&acc, &f)
    })
}

/// `h_n = Σ_{ρ⊢n} p_ρ / z_ρ`.
pub(crate) fn h_n(n: usize) -> RatSym {
    partitions_of(n)
        .into_iter()
        .map(|r| {
            let c = r.z_stat().recip();
            (r, c)
        })
        .collect()
}

/// `e_n = Σ_{ρ⊢n} (-1)^{n-ℓ(ρ)} p_ρ / z_ρ`.
pub(crate) fn e_n(n: usize) -> RatSym {
    partitions_of(n)
        .into_iter()
        .map(|r| {
            let mut c = r.z_stat().recip();
            if (n - r.len()) % 2 == 1 {
                c = -c;
            }
            (r, c)
        })
        .collect()
}

/// Coefficient of `m_μ` in `p_ρ`: the number of ways to distribute the
/// parts of `ρ` over the positions of `μ` with the prescribed sums.
fn p_to_m_coeff(rho: &Partition, mu: &Partition) -> u64 {
    fn rec(parts: &[usize], slots: &mut [usize]) -> u64 {
        match parts.split_first() {
            None => slots.iter().all(|&s| s == 0) as u64,
            Some((&p, rest)) => {
                let mut total = 0;
                for i in 0..slots.len() {
                    if slots[i] >= p {
                        slots[i] -= p;
                        total += rec(rest, slots);
                        slots[i] += p;
                    }
                }
                total
            }
        }
    }
    let mut slots = mu.parts().to_vec();
    rec(rho.parts(), &mut slots)
}

static M_IN_P: LazyLock<Cache<usize, BTreeMap<Partition, RatSym>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn m_in_p(n: usize) -> Arc<BTreeMap<Partition, RatSym>> {
    if let Some(t) = M_IN_P.read().expect("basis cache poisoned").get(&n) {
        return t.clone();
    }
    let parts = partitions_of(n);
    // p_ρ = Σ_μ R[ρ][μ] m_μ; invert to express m in p.
    let p_in_m: BTreeMap<Partition, RatSym> = parts
        .iter()
        .map(|rho| {
            let row = parts
                .iter()
                .filter_map(|mu| {
                    let c = p_to_m_coeff(rho, mu);
                    (c != 0).then(|| (mu.clone(), BigRat::from_integer(c.into())))
                })
                .collect();
            (rho.clone(), row)
        })
        .collect();
    let t = Arc::new(invert(&parts, &p_in_m));
    M_IN_P
        .write()
        .expect("basis cache poisoned")
        .entry(n)
        .or_insert(t)
        .clone()
}

/// Given `b_λ = Σ_ρ M[λ][ρ] x_ρ`, returns `x_ρ = Σ_λ M^{-1}[ρ][λ] b_λ`.
fn invert(parts: &[Partition], rows: &BTreeMap<Partition, RatSym>) -> BTreeMap<Partition, RatSym> {
    let n = parts.len();
    let idx: HashMap<&Partition, usize> = parts.iter().enumerate().map(|(i, p)| (p, i)).collect();
    // Solve M^T-free form: build dense M (rows λ, cols ρ) and invert.
    let mut a = vec![vec![BigRat::zero(); 2 * n]; n];
    for (i, l) in parts.iter().enumerate() {
        for (r, c) in &rows[l] {
            a[i][idx[r]] = c.clone();
        }
        a[i][n + i] = BigRat::one();
    }
    for col in 0..n {
        let piv = (col..n)
            .find(|&r| !a[r][col].is_zero())
            .expect("change-of-basis matrix is invertible");
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, y) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * y;
                }
            }
        }
    }
    // a[.., n..] = M^{-1}; (M^{-1})[ρ][λ] gives x_ρ in terms of b_λ.
    parts
        .iter()
        .enumerate()
        .map(|(ri, rho)| {
            let row = parts
                .iter()
                .enumerate()
                .filter(|(li, _)| !a[ri][n + li].is_zero())
                .map(|(li, l)| (l.clone(), a[ri][n + li].clone()))
                .collect();
            (rho.clone(), row)
        })
        .collect()
}

/// Jacobi–Trudi: `s_λ = det(h_{λ_i - i + j})`, or the dual form in `e`
/// over `λ'` when that matrix is smaller.
fn schur(l: &Partition) -> RatSym {
    let lc = l.conjugate();
    let (shape, gen): (&Partition, fn(usize) -> RatSym) = if lc.len() < l.len() {
        (&lc, e_n)
    } else {
        (l, h_n)
    };
    let k = shape.len();
    if k == 0 {
        return single(Partition::empty(), BigRat::one());
    }
    let entry = |i: usize, j: usize| -> Option<RatSym> {
        let idx = shape.part(i) as isize - i as isize + j as isize;
        match idx {
            i if i < 0 => None,
            0 => Some(single(Partition::empty(), BigRat::one())),
            i => Some(gen(i as usize)),
        }
    };
    // Laplace expansion along rows with memoization on the used-column mask.
    let mut memo: HashMap<(usize, u32), RatSym> = HashMap::new();
    fn det(
        row: usize,
        used: u32,
        k: usize,
        entry: &dyn Fn(usize, usize) -> Option<RatSym>,
        memo: &mut HashMap<(usize, u32), RatSym>,
    ) -> RatSym {
        if row == k {
            return single(Partition::empty(), BigRat::one());
        }
        if let Some(v) = memo.get(&(row, used)) {
            return v.clone();
        }
        let mut acc = RatSym::new();
        let mut sign_parity = 0;
        for col in 0..k {
            if used & (1 << col) != 0 {
                continue;
            }
            // sign = (-1)^{number of unused columns before col}
            let s = if sign_parity % 2 == 0 {
                BigRat::one()
            } else {
                -BigRat::one()
            };
            sign_parity += 1;
            if let Some(e) = entry(row, col) {
                let minor = det(row + 1, used | (1 << col), k, entry, memo);
                if !minor.is_empty() {
                    acc = rs_add(&acc, &rs_mul(&e, &minor), &s);
                }
            }
        }
        memo.insert((row, used), acc.clone());
        acc
    }
    det(0, 0, k, &entry, &mut memo)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn half() -> BigRat {
        BigRat::new(1.into(), 2.into())
    }

    #[test]
    fn newton_identities() {
        let h2 = table(Classical::H, 2).to_p[&p(&[2])].clone();
        assert_eq!(h2[&p(&[1, 1])], half());
        assert_eq!(h2[&p(&[2])], half());
        let e2 = table(Classical::E, 2).to_p[&p(&[2])].clone();
        assert_eq!(e2[&p(&[2])], -half());
        assert_eq!(table(Classical::S, 2).to_p[&p(&[1, 1])], e2);
    }

    #[test]
    fn p_to_m_counts() {
        // p_1^2 = m_2 + 2 m_11
        assert_eq!(p_to_m_coeff(&p(&[1, 1]), &p(&[2])), 1);
        assert_eq!(p_to_m_coeff(&p(&[1, 1]), &p(&[1, 1])), 2);
        assert_eq!(p_to_m_coeff(&p(&[2]), &p(&[1, 1])), 0);
    }

    #[test]
    fn tables_are_inverse() {
        for b in [Classical::M, Classical::E, Classical::H, Classical::S] {
            for n in 0..=6 {
                let t = table(b, n);
                for (l, exp) in &t.to_p {
                    // b_λ -> p -> b must give back b_λ
                    let mut back = RatSym::new();
                    for (rho, c) in exp {
                        for (mu, d) in &t.from_p[rho] {
                            add_term(&mut back, mu.clone(), c * d);
                        }
                    }
                    assert_eq!(back, single(l.clone(), BigRat::one()), "{b:?} {l:?}");
                }
            }
        }
    }
}

//! End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use common::*;
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use qtsym::exprlang::parse;
use qtsym::hlv::{self, check_corollary, check_polynomiality, check_stability, check_theorem7};
use qtsym::macdonald::{
    block, check_koornwinder, delta_f, macdonald_h, macdonald_pair, op_t, op_tstar, op_v,
    op_vstar,
};
use qtsym::partition::{partitions_of, partitions_up_to, Partition};
use qtsym::plethysm::{pexp, plog, pleth, pleth_scalar, AlphabetExpr, GradedSeries, Grading};
use qtsym::symfun::{basis_elements, e, h, p, Basis, MultiSymFunc, SymFunc};
use qtsym::RatFunc;

type Outcome = std::result::Result<(), String>;

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn q_binomial_law() -> Outcome {
    let q = RatFunc::q();
    for k in 1..=6usize {
        let a = &(&pow(&q, k as i32) - &int(1)) / &(&q - &int(1));
        for n in 1..=k {
            let want = &pow(&q, (n * (n - 1) / 2) as i32) * &q_binomial(k, n);
            ensure(pleth_scalar(&e(n), &a) == want, || format!("n={n} k={k}"))?;
        }
    }
    Ok(())
}

fn geometric_closed_forms() -> Outcome {
    let (q, u) = (RatFunc::q(), RatFunc::named("u").unwrap());
    let a = &(&int(1) - &u) / &(&int(1) - &q);
    let (mut e_num, mut h_num, mut den) = (int(1), int(1), int(1));
    for n in 1..=5usize {
        let i = n as i32 - 1;
        e_num = &e_num * &(&pow(&q, i) - &u);
        h_num = &h_num * &(&int(1) - &(&u * &pow(&q, i)));
        den = &den * &(&int(1) - &pow(&q, i + 1));
        ensure(pleth_scalar(&e(n), &a) == &e_num / &den, || format!("e_{n}"))?;
        ensure(pleth_scalar(&h(n), &a) == &h_num / &den, || format!("h_{n}"))?;
    }
    Ok(())
}

fn m_support(f: &SymFunc, scale: &RatFunc) -> Vec<Partition> {
    let a = AlphabetExpr::symbol("X").scale(scale);
    let g = pleth(f, &a).to_sym().expect("one alphabet");
    g.to_basis(Basis::M).expect("classical").into_keys().collect()
}

fn macdonald_definition() -> Outcome {
    let t1 = &RatFunc::t() - &int(1);
    let q1 = &RatFunc::q() - &int(1);
    for n in 0..=5 {
        // the overdetermined system is checked for full rank and consistency
        let b = block(n).map_err(|e| format!("degree {n}: {e}"))?;
        for (l, hl) in &b.h {
            for mu in m_support(hl, &t1) {
                ensure(mu.dominance_leq(l).unwrap(), || format!("H{l:?}[(t-1)X] has m{mu:?}"))?;
            }
            let lc = l.conjugate();
            for mu in m_support(hl, &q1) {
                ensure(mu.dominance_leq(&lc).unwrap(), || format!("H{l:?}[(q-1)X] has m{mu:?}"))?;
            }
            ensure(pleth_scalar(hl, &int(1)).is_one(), || format!("H{l:?}[1] != 1"))?;
            for (mu, hm) in &b.h {
                let want = if l == mu { alpha_oracle(l) } else { RatFunc::zero() };
                ensure(macdonald_pair(hl, hm) == want, || format!("(H{l:?}, H{mu:?})_*"))?;
            }
        }
    }
    Ok(())
}

fn n_stat(l: &Partition) -> i32 {
    l.parts().iter().enumerate().map(|(i, &r)| (i * r) as i32).sum()
}

fn specializations() -> Outcome {
    let q = RatFunc::q();
    let t = RatFunc::t();
    let u = qtsym::macdonald::small_u();
    let geo = &int(1) / &(&int(1) - &q);
    for l in partitions_up_to(5) {
        let hl = macdonald_h(&l).unwrap();
        let mut prod = int(1);
        for (i, &row) in l.parts().iter().enumerate() {
            for j in 0..row {
                let cell = &pow(&q, j as i32) * &pow(&t, i as i32);
                prod = &prod * &(&int(1) - &(&u * &cell));
            }
        }
        ensure(pleth_scalar(&hl, &(&int(1) - &u)) == prod, || format!("H{l:?}[1-u]"))?;

        let sign = if l.size() % 2 == 0 { 1 } else { -1 };
        let want = &int(sign) * &(&pow(&q, n_stat(&l.conjugate())) * &pow(&t, n_stat(&l)));
        ensure(pleth_scalar(&hl, &int(-1)) == want, || format!("H{l:?}[-1]"))?;

        let t_inv = [(qtsym::coeff::registry::T, pow(&q, -1))];
        let lhs = hl.map_coeffs(|c| c.substitute(&t_inv)).unwrap();
        let s = SymFunc::from_basis(Basis::S, &l).unwrap();
        let num = pleth(&s, &AlphabetExpr::symbol("X").scale(&geo)).to_sym().unwrap();
        let rhs = num.scale(&(&int(1) / &pleth_scalar(&s, &geo)));
        ensure(lhs == rhs, || format!("H{l:?} at t=1/q"))?;
    }
    Ok(())
}

fn ght() -> Outcome {
    let big_q = &(&RatFunc::q() - &int(1)) * &(&int(1) - &RatFunc::t());
    for l in partitions_up_to(4) {
        let d = &int(-1) - &(&big_q * &b_oracle(&l));
        let a = AlphabetExpr::symbol("X").scale(&(&d / &big_q));
        let want = GradedSeries::from_element(&a.to_element(), 6, Grading::Alphabet("X".into()))
            .unwrap()
            .pexp()
            .unwrap();
        let got = op_v(&macdonald_h(&l).unwrap(), 6).unwrap();
        ensure(got == want, || format!("V(H{l:?})"))?;
    }
    Ok(())
}

fn homogeneous(d: usize) -> impl Strategy<Value = SymFunc> {
    let shapes = partitions_of(d);
    let n = shapes.len();
    prop::collection::vec((0..n, arb_poly()), 1..3).prop_map(move |terms| {
        let terms: Vec<(Partition, RatFunc)> =
            terms.into_iter().map(|(i, c)| (shapes[i].clone(), c)).collect();
        SymFunc::from_basis_terms(Basis::S, terms.iter().map(|(l, c)| (l, c))).unwrap()
    })
}

fn graded() -> impl Strategy<Value = (usize, SymFunc)> {
    (0usize..=3).prop_flat_map(|d| (Just(d), homogeneous(d)))
}

fn part_of(s: &GradedSeries, d: usize) -> SymFunc {
    s.part(d).to_sym().unwrap()
}

fn conjugacy() -> Outcome {
    let mut r = runner(24);
    r.run(&(graded(), graded()), |((d, f), (_, g))| {
        let lhs = macdonald_pair(&op_t(&f), &g);
        let rhs = macdonald_pair(&f, &part_of(&op_tstar(&g, 3).unwrap(), d));
        prop_assert_eq!(lhs, rhs, "(TF,G)_* = (F,T*G)_*");
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    let mut r = runner(24);
    r.run(&(graded(), graded()), |((d, f), (e, g))| {
        let lhs = macdonald_pair(&part_of(&op_v(&f, 3).unwrap(), e), &g);
        let rhs = macdonald_pair(&f, &part_of(&op_vstar(&g, 3).unwrap(), d));
        prop_assert_eq!(lhs, rhs, "(VF,G)_* = (F,V*G)_*");
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    let mut r = runner(24);
    r.run(&(graded(), graded()), |((_, f), (_, g))| {
        let order = 3;
        let lhs = op_vstar(&(&f * &g), order + 3).unwrap();
        let vg = op_vstar(&g, order + 3).unwrap();
        for d in 0..=order {
            prop_assert_eq!(part_of(&lhs, d), delta_f(&f, &part_of(&vg, d)).unwrap());
        }
        Ok(())
    })
    .map_err(|e| e.to_string())
}

fn koornwinder() -> Outcome {
    let ps = partitions_up_to(4);
    for (i, l) in ps.iter().enumerate() {
        for mu in &ps[i..] {
            ensure(check_koornwinder(l, mu).unwrap(), || format!("{l:?} {mu:?}"))?;
        }
    }
    Ok(())
}

fn two_alphabets() -> Outcome {
    let got = hlv::hh(2, 5).map_err(|e| e.to_string())?;
    let names = MultiSymFunc::default_alphabets(2);
    let want = MultiSymFunc::tensor(&names, &[p(1), p(1)]).unwrap();
    ensure(*got == want, || format!("got {got}"))
}

fn stability() -> Outcome {
    for k in 2..=3 {
        ensure(check_stability(k, 4).map_err(|e| e.to_string())?, || format!("k={k}"))?;
    }
    Ok(())
}

fn polynomiality() -> Outcome {
    for k in 3..=4 {
        let rep = check_polynomiality(k, 3).map_err(|e| e.to_string())?;
        ensure(rep.violations.is_empty(), || format!("k={k}: {:?}", rep.violations))?;
        ensure(rep.round_trip, || format!("k={k}: pExp does not return Ω"))?;
        ensure(rep.terms.iter().all(|(_, c)| c.denom().is_one()), || format!("k={k}: denominators"))?;
    }
    Ok(())
}

fn theorem7_and_corollary() -> Outcome {
    let ps: Vec<Partition> = partitions_up_to(4).into_iter().filter(|l| !l.is_empty()).collect();
    let mut count = 0;
    for l in &ps {
        for mu in &ps {
            if mu.part(0) > l.size() || l.size() > mu.size() {
                continue;
            }
            count += 1;
            let ok = check_theorem7(l, mu, mu.size()).map_err(|e| e.to_string())?;
            ensure(ok, || format!("theorem λ={l:?} μ={mu:?}"))?;
        }
    }
    ensure(count > 0, || "no admissible pairs".into())?;
    for k in 1..=4 {
        for l in partitions_up_to(k).into_iter().filter(|l| !l.is_empty()) {
            let ok = check_corollary(&l, k, k).map_err(|e| e.to_string())?;
            ensure(ok, || format!("corollary λ={l:?} k={k}"))?;
        }
    }
    Ok(())
}

fn alphabets() -> impl Strategy<Value = AlphabetExpr> {
    let x = AlphabetExpr::symbol("X");
    let y = AlphabetExpr::symbol("Y");
    let atoms = prop_oneof![
        Just(AlphabetExpr::constant(int(1))),
        Just(x.clone()),
        Just(y.clone()),
        Just(x.try_mul(&y).unwrap()),
    ];
    prop::collection::vec((atoms, arb_poly()), 1..3).prop_map(|terms| {
        terms
            .into_iter()
            .fold(AlphabetExpr::zero(), |acc, (a, c)| &acc + &a.scale(&c))
    })
}

fn foundations() -> Outcome {
    for n in 0..=6 {
        let hs = basis_elements(Basis::H, n).unwrap();
        let ms = basis_elements(Basis::M, n).unwrap();
        for (l, hl) in &hs {
            for (mu, mm) in &ms {
                let want = int((l == mu) as i64);
                ensure(hl.hall_pair(mm) == want, || format!("(h{l:?}, m{mu:?})"))?;
            }
        }
    }

    let a = &AlphabetExpr::symbol("X") + &AlphabetExpr::symbol("Y").scale(&RatFunc::q());
    let s = pexp(&a, 8).map_err(|e| e.to_string())?;
    let direct = GradedSeries::from_element(&a.to_element(), 8, Grading::Total).unwrap();
    ensure(plog(&s).map_err(|e| e.to_string())? == direct, || "pLog(pExp(A)) != A".into())?;

    let mut r = runner(120);
    r.run(&(arb_symfunc(3), arb_symfunc(3), alphabets()), |(f, g, a)| {
        let (fa, ga) = (pleth(&f, &a), pleth(&g, &a));
        prop_assert_eq!(pleth(&(&f + &g), &a), &fa + &ga);
        prop_assert_eq!(pleth(&(&f * &g), &a), &fa * &ga);
        Ok(())
    })
    .map_err(|e| e.to_string())?;
    let mut r = runner(120);
    r.run(&(1usize..6, arb_poly(), 0i32..3, 0i32..3), |(k, c, i, j)| {
        let u = &pow(&RatFunc::q(), i) * &pow(&RatFunc::t(), j);
        let x = AlphabetExpr::symbol("X");
        let lhs = pleth(&p(k), &x.scale(&(&u * &c)));
        let rhs = pleth(&p(k), &x.scale(&c)).scale(&pow(&u, k as i32));
        prop_assert_eq!(lhs, rhs);
        Ok(())
    })
    .map_err(|e| e.to_string())?;

    for (input, printed) in corpus() {
        let e = parse(&input).map_err(|e| format!("{input}: {e}"))?;
        ensure(e.to_string() == printed, || format!("{input} printed as {e}"))?;
        ensure(parse(&printed).ok() == Some(e), || format!("{printed} does not reparse"))?;
    }
    let mut r = runner(500);
    r.run(&arb_expr(), |e| {
        let text = e.to_string();
        prop_assert_eq!(parse(&text).ok(), Some(e), "{}", text);
        Ok(())
    })
    .map_err(|e| e.to_string())
}

struct Criterion {
    name: &'static str,
    limit: Option<Duration>,
    run: fn() -> Outcome,
}

fn main() {
    let secs = |s: u64| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { name: "q-binomial law", limit: secs(1), run: q_binomial_law },
        Criterion { name: "closed forms at (1-u)/(1-q)", limit: secs(1), run: geometric_closed_forms },
        Criterion { name: "Macdonald definition suite", limit: secs(120), run: macdonald_definition },
        Criterion { name: "specialization suite", limit: secs(60), run: specializations },
        Criterion { name: "V(H_λ) = pExp[D_λX/Q]", limit: secs(300), run: ght },
        Criterion { name: "conjugacy and Δ_F", limit: None, run: conjugacy },
        Criterion { name: "Macdonald–Koornwinder symmetry", limit: secs(120), run: koornwinder },
        Criterion { name: "ℍ[X1,X2] = X1X2", limit: None, run: two_alphabets },
        Criterion { name: "stability", limit: None, run: stability },
        Criterion { name: "polynomiality", limit: secs(600), run: polynomiality },
        Criterion { name: "theorem and corollary", limit: secs(900), run: theorem7_and_corollary },
        Criterion { name: "foundational suites", limit: None, run: foundations },
    ];
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, c) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(c.run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let elapsed = start.elapsed();
        let outcome = match (outcome, c.limit) {
            (Ok(()), Some(limit)) if elapsed > limit => Err(format!("exceeded {limit:?}")),
            (o, _) => o,
        };
        match outcome {
            Ok(()) => println!("PASS {:>2} {} ({:.2}s)", i + 1, c.name, elapsed.as_secs_f64()),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {} ({:.2}s): {why}", i + 1, c.name, elapsed.as_secs_f64());
            }
        }
    }
    println!("{} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

#![allow(dead_code)]

use std::collections::BTreeMap;

use proptest::prelude::*;
use qtsym::exprlang::{BinOp, Expr, ExprKind, Func};
use qtsym::partition::{partitions_up_to, Partition};
use qtsym::symfun::{Basis, SymFunc};
use qtsym::RatFunc;

pub fn part(p: &[usize]) -> Partition {
    Partition::new(p.to_vec()).unwrap()
}

pub fn r(s: &str) -> RatFunc {
    RatFunc::parse(s).unwrap()
}

pub fn int(n: i64) -> RatFunc {
    RatFunc::from_int(n)
}

pub fn pow(x: &RatFunc, e: i32) -> RatFunc {
    x.pow(e).unwrap()
}

/// `∏ (q^a - t^{l+1})(q^{a+1} - t^l)` over the cells, straight from the
/// hook lengths.
pub fn alpha_oracle(l: &Partition) -> RatFunc {
    let (q, t) = (RatFunc::q(), RatFunc::t());
    let conj = l.conjugate();
    let mut acc = int(1);
    for (i, &row) in l.parts().iter().enumerate() {
        for j in 0..row {
            let arm = (row - j - 1) as i32;
            let leg = (conj.part(j) - i - 1) as i32;
            acc = &acc * &(&pow(&q, arm) - &pow(&t, leg + 1));
            acc = &acc * &(&pow(&q, arm + 1) - &pow(&t, leg));
        }
    }
    acc
}

/// `Σ q^c t^r` over the cells.
pub fn b_oracle(l: &Partition) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (i, &row) in l.parts().iter().enumerate() {
        for j in 0..row {
            acc = &acc + &(&pow(&RatFunc::q(), j as i32) * &pow(&RatFunc::t(), i as i32));
        }
    }
    acc
}

/// Semistandard tableaux of shape `l` with entries `1..=n`, as content
/// vectors.
pub fn ssyt_contents(l: &Partition, n: usize) -> Vec<Vec<usize>> {
    let cells: Vec<(usize, usize)> = l
        .parts()
        .iter()
        .enumerate()
        .flat_map(|(i, &row)| (0..row).map(move |j| (i, j)))
        .collect();
    let mut filling = vec![vec![0usize; l.part(0)]; l.len()];
    let mut out = Vec::new();
    fn go(
        k: usize,
        cells: &[(usize, usize)],
        filling: &mut Vec<Vec<usize>>,
        n: usize,
        out: &mut Vec<Vec<usize>>,
    ) {
        if k == cells.len() {
            let mut content = vec![0; n];
            for &(i, j) in cells {
                content[filling[i][j] - 1] += 1;
            }
            out.push(content);
            return;
        }
        let (i, j) = cells[k];
        let lo_row = if j > 0 { filling[i][j - 1] } else { 1 };
        let lo_col = if i > 0 { filling[i - 1][j] + 1 } else { 1 };
        for v in lo_row.max(lo_col)..=n {
            filling[i][j] = v;
            go(k + 1, cells, filling, n, out);
        }
    }
    go(0, &cells, &mut filling, n, &mut out);
    out
}

/// Registers `x1..xn` and returns them.
pub fn xs(n: usize) -> Vec<RatFunc> {
    (1..=n).map(|i| RatFunc::named(&format!("x{i}")).unwrap()).collect()
}

pub fn monomial(xs: &[RatFunc], content: &[usize]) -> RatFunc {
    let mut acc = int(1);
    for (x, &e) in xs.iter().zip(content) {
        acc = &acc * &pow(x, e as i32);
    }
    acc
}

/// `m_λ(x_1,…,x_n)` by summing the distinct rearrangements of `λ`.
pub fn m_eval(l: &Partition, xs: &[RatFunc]) -> RatFunc {
    let n = xs.len();
    if l.len() > n {
        return RatFunc::zero();
    }
    let mut exps: Vec<usize> = l.parts().to_vec();
    exps.resize(n, 0);
    exps.sort_unstable();
    let mut acc = RatFunc::zero();
    loop {
        acc = &acc + &monomial(xs, &exps);
        if !next_permutation(&mut exps) {
            break;
        }
    }
    acc
}

fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Gaussian binomial `(k choose n)_q` by the product formula.
pub fn q_binomial(k: usize, n: usize) -> RatFunc {
    let q = RatFunc::q();
    let mut acc = int(1);
    for i in 0..n {
        let num = &int(1) - &pow(&q, (k - i) as i32);
        let den = &int(1) - &pow(&q, (i + 1) as i32);
        acc = &(&acc * &num) / &den;
    }
    acc
}

/// Small rational functions in `q` and `t` with integer coefficients.
pub fn arb_poly() -> impl Strategy<Value = RatFunc> {
    prop::collection::vec((-3i64..=3, 0i32..3, 0i32..3), 1..4).prop_map(|terms| {
        let mut acc = RatFunc::zero();
        for (c, a, b) in terms {
            acc = &acc + &(&int(c) * &(&pow(&RatFunc::q(), a) * &pow(&RatFunc::t(), b)));
        }
        acc
    })
}

pub fn arb_ratfunc() -> impl Strategy<Value = RatFunc> {
    (arb_poly(), arb_poly()).prop_map(|(n, d)| if d.is_zero() { n } else { &n / &d })
}

/// Random symmetric function of degree at most `max`, with coefficients
/// from [`arb_poly`].
pub fn arb_symfunc(max: usize) -> impl Strategy<Value = SymFunc> {
    let parts = partitions_up_to(max);
    let n = parts.len();
    prop::collection::vec((0..n, arb_poly()), 1..4).prop_map(move |terms| {
        SymFunc::from_terms(terms.into_iter().map(|(i, c)| (parts[i].clone(), c)))
    })
}

/// Homogeneous random symmetric function of degree `d`.
pub fn arb_homogeneous(d: usize) -> impl Strategy<Value = SymFunc> {
    arb_symfunc(d).prop_map(move |f| f.component(d))
}

fn arb_basis() -> impl Strategy<Value = Basis> {
    prop::sample::select(vec![Basis::E, Basis::H, Basis::P, Basis::M, Basis::S, Basis::Macdonald])
}

fn arb_leaf() -> impl Strategy<Value = Expr> {
    let idents = vec!["q", "t", "u", "u1", "y_2", "X", "Y", "X1", "X10", "Z"];
    prop_oneof![
        (0u64..1000).prop_map(Expr::number),
        prop::sample::select(idents).prop_map(Expr::ident),
        (arb_basis(), prop::collection::vec(0usize..6, 1..4)).prop_map(|(b, p)| Expr::basis(b, p)),
    ]
}

fn arb_op() -> impl Strategy<Value = BinOp> {
    prop::sample::select(vec![BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div])
}

/// Random syntax trees of depth at most 6, covering every node kind.
pub fn arb_expr() -> impl Strategy<Value = Expr> {
    arb_leaf().prop_recursive(6, 96, 3, |inner| {
        prop_oneof![
            inner.clone().prop_map(Expr::negate),
            (arb_op(), inner.clone(), inner.clone()).prop_map(|(op, a, b)| Expr::binary(op, a, b)),
            (inner.clone(), 0u32..8).prop_map(|(b, e)| Expr::pow(b, e)),
            (inner.clone(), inner.clone()).prop_map(|(f, a)| Expr::pleth(f, a)),
            (prop::sample::select(Func::ALL.to_vec()), inner.clone(), inner.clone(), 1u64..9).prop_map(
                |(func, a, b, k)| {
                    let args = if func.takes_literal() {
                        vec![Expr::number(k)]
                    } else if func.arity() == 2 {
                        vec![a, b]
                    } else {
                        vec![a]
                    };
                    Expr::call(func, args)
                }
            ),
        ]
    })
}

/// Structural depth of a tree, leaves counting 1.
pub fn depth(e: &Expr) -> usize {
    1 + match &e.kind {
        ExprKind::Neg(x) | ExprKind::Pow { base: x, .. } => depth(x),
        ExprKind::Binary { lhs, rhs, .. } => depth(lhs).max(depth(rhs)),
        ExprKind::Pleth { f, arg } => depth(f).max(depth(arg)),
        ExprKind::Call { args, .. } => args.iter().map(depth).max().unwrap_or(0),
        _ => 0,
    }
}

/// The golden corpus: `(input, expected printed form)` pairs.
pub fn corpus() -> Vec<(String, String)> {
    let text = include_str!("../corpus/expressions.tsv");
    text.lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| {
            let (a, b) = l.split_once('\t').expect("two tab-separated columns");
            (a.to_string(), b.to_string())
        })
        .collect()
}

pub fn coeff_map(f: &SymFunc, b: Basis) -> BTreeMap<Partition, RatFunc> {
    f.to_basis(b).unwrap()
}

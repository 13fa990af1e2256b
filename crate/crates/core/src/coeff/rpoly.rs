//! Recursive dense integer polynomials, used for exact division and gcd.
//!
//! A polynomial is either an integer constant or a univariate polynomial in
//! its main variable whose coefficients only involve variables with larger
//! indices. This is the representation the subresultant PRS works on.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) enum RPoly {
    Const(BigInt),
    /// `coeffs[i]` multiplies `var^i`; at least two entries, last nonzero.
    Var {
        var: usize,
        coeffs: Vec<RPoly>,
    },
}

use RPoly::{Const, Var};

impl RPoly {
    pub fn zero() -> Self {
        Const(BigInt::zero())
    }

    pub fn one() -> Self {
        Const(BigInt::one())
    }

    fn from_coeffs(var: usize, mut coeffs: Vec<RPoly>) -> Self {
        while coeffs.len() > 1 && coeffs.last().is_some_and(RPoly::is_zero) {
            coeffs.pop();
        }
        match coeffs.len() {
            0 => Self::zero(),
            1 => coeffs.pop().unwrap(),
            _ => Var { var, coeffs },
        }
    }

    /// Builds from (exponent vector, coefficient) pairs with nonnegative
    /// exponents. Repeated exponent vectors are summed.
    pub fn from_terms(terms: &[(&[i32], BigInt)]) -> Self {
        Self::build(terms, 0)
    }

    fn build(terms: &[(&[i32], BigInt)], start: usize) -> Self {
        let var = terms
            .iter()
            .flat_map(|(e, _)| {
                e.iter()
                    .enumerate()
                    .skip(start)
                    .find(|(_, &x)| x != 0)
                    .map(|(i, _)| i)
            })
            .min();
        let Some(var) = var else {
            return Const(terms.iter().map(|(_, c)| c.clone()).sum());
        };
        let maxdeg = terms
            .iter()
            .map(|(e, _)| e.get(var).copied().unwrap_or(0))
            .max()
            .unwrap_or(0) as usize;
        let mut buckets: Vec<Vec<(&[i32], BigInt)>> = vec![Vec::new(); maxdeg + 1];
        for (e, c) in terms {
            let d = e.get(var).copied().unwrap_or(0);
            debug_assert!(d >= 0);
            buckets[d as usize].push((e, c.clone()));
        }
        let coeffs = buckets.iter().map(|b| Self::build(b, var + 1)).collect();
        Self::from_coeffs(var, coeffs)
    }

    pub fn for_each_term(&self, f: &mut dyn FnMut(&[i32], &BigInt)) {
        let mut exps = Vec::new();
        self.walk(&mut exps, f);
    }

    fn walk(&self, exps: &mut Vec<i32>, f: &mut dyn FnMut(&[i32], &BigInt)) {
        match self {
            Const(c) => {
                if !c.is_zero() {
                    f(exps, c)
                }
            }
            Var { var, coeffs } => {
                if exps.len() <= *var {
                    exps.resize(var + 1, 0);
                }
                for (i, c) in coeffs.iter().enumerate() {
                    exps[*var] = i as i32;
                    c.walk(exps, f);
                }
                exps[*var] = 0;
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Const(c) if c.is_zero())
    }

    pub fn as_const(&self) -> Option<&BigInt> {
        match self {
            Const(c) => Some(c),
            _ => None,
        }
    }

    fn main_var(&self) -> usize {
        match self {
            Const(_) => usize::MAX,
            Var { var, .. } => *var,
        }
    }

    /// Degree in `v`, assuming no variable smaller than `v` occurs.
    fn deg_in(&self, v: usize) -> usize {
        match self {
            Var { var, coeffs } if *var == v => coeffs.len() - 1,
            _ => 0,
        }
    }

    /// Leading coefficient with respect to `v`.
    fn lc_in(&self, v: usize) -> RPoly {
        match self {
            Var { var, coeffs } if *var == v => coeffs.last().unwrap().clone(),
            _ => self.clone(),
        }
    }

    fn coeffs_in(&self, v: usize) -> Vec<RPoly> {
        match self {
            Var { var, coeffs } if *var == v => coeffs.clone(),
            _ => vec![self.clone()],
        }
    }

    /// `c * v^k` where `c` only involves variables above `v`.
    fn shifted(c: RPoly, v: usize, k: usize) -> RPoly {
        if k == 0 || c.is_zero() {
            return c;
        }
        let mut coeffs = vec![RPoly::zero(); k];
        coeffs.push(c);
        Var { var: v, coeffs }
    }

    pub fn add(&self, other: &RPoly) -> RPoly {
        match (self, other) {
            (Const(a), Const(b)) => Const(a + b),
            _ => {
                let (va, vb) = (self.main_var(), other.main_var());
                if va < vb {
                    let mut cs = self.coeffs_in(va);
                    cs[0] = cs[0].add(other);
                    RPoly::from_coeffs(va, cs)
                } else if vb < va {
                    other.add(self)
                } else {
                    let (a, b) = (self.coeffs_in(va), other.coeffs_in(va));
                    let n = a.len().max(b.len());
                    let cs = (0..n)
                        .map(|i| match (a.get(i), b.get(i)) {
                            (Some(x), Some(y)) => x.add(y),
                            (Some(x), None) => x.clone(),
                            (None, Some(y)) => y.clone(),
                            (None, None) => unreachable!(),
                        })
                        .collect();
                    RPoly::from_coeffs(va, cs)
                }
            }
        }
    }

    pub fn neg(&self) -> RPoly {
        match self {
            Const(c) => Const(-c),
            Var { var, coeffs } => Var {
                var: *var,
                coeffs: coeffs.iter().map(RPoly::neg).collect(),
            },
        }
    }

    pub fn sub(&self, other: &RPoly) -> RPoly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RPoly) -> RPoly {
        if self.is_zero() || other.is_zero() {
            return RPoly::zero();
        }
        match (self, other) {
            (Const(a), Const(b)) => Const(a * b),
            _ => {
                let (va, vb) = (self.main_var(), other.main_var());
                if va < vb {
                    let cs = self.coeffs_in(va).iter().map(|c| c.mul(other)).collect();
                    RPoly::from_coeffs(va, cs)
                } else if vb < va {
                    other.mul(self)
                } else {
                    let (a, b) = (self.coeffs_in(va), other.coeffs_in(va));
                    let mut cs = vec![RPoly::zero(); a.len() + b.len() - 1];
                    for (i, x) in a.iter().enumerate() {
                        if x.is_zero() {
                            continue;
                        }
                        for (j, y) in b.iter().enumerate() {
                            if !y.is_zero() {
                                cs[i + j] = cs[i + j].add(&x.mul(y));
                            }
                        }
                    }
                    RPoly::from_coeffs(va, cs)
                }
            }
        }
    }

    fn pow(&self, n: usize) -> RPoly {
        let mut acc = RPoly::one();
        for _ in 0..n {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient, or `None` if `other` does not divide `self`.
    pub fn exact_div(&self, other: &RPoly) -> Option<RPoly> {
        assert!(!other.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Some(RPoly::zero());
        }
        if let Const(d) = other {
            return self.div_int(d);
        }
        let (va, vb) = (self.main_var(), other.main_var());
        if vb < va {
            return None;
        }
        if va < vb {
            let cs: Option<Vec<_>> = self
                .coeffs_in(va)
                .iter()
                .map(|c| c.exact_div(other))
                .collect();
            return Some(RPoly::from_coeffs(va, cs?));
        }
        let v = va;
        let db = other.deg_in(v);
        let lcb = other.lc_in(v);
        let mut r = self.clone();
        let mut quot = vec![RPoly::zero(); self.deg_in(v) + 1];
        while !r.is_zero() {
            let dr = if r.main_var() == v { r.deg_in(v) } else { 0 };
            if r.main_var() < v || dr < db {
                return None;
            }
            let c = r.lc_in(v).exact_div(&lcb)?;
            let k = dr - db;
            r = r.sub(&RPoly::shifted(c.clone(), v, k).mul(other));
            quot[k] = c;
        }
        Some(RPoly::from_coeffs(v, quot))
    }

    fn div_int(&self, d: &BigInt) -> Option<RPoly> {
        match self {
            Const(c) => {
                let (q, r) = c.div_rem(d);
                r.is_zero().then_some(Const(q))
            }
            Var { var, coeffs } => {
                let cs: Option<Vec<_>> = coeffs.iter().map(|c| c.div_int(d)).collect();
                Some(Var {
                    var: *var,
                    coeffs: cs?,
                })
            }
        }
    }

    /// Pseudo-remainder of `self` by `b` with respect to `v`.
    fn prem(&self, b: &RPoly, v: usize) -> RPoly {
        let db = b.deg_in(v);
        let lcb = b.lc_in(v);
        let da = self.deg_in(v);
        let mut e = (da + 1).saturating_sub(db);
        let mut r = self.clone();
        while !r.is_zero() && r.main_var() == v && r.deg_in(v) >= db {
            let k = r.deg_in(v) - db;
            let s = RPoly::shifted(r.lc_in(v), v, k);
            r = lcb.mul(&r).sub(&s.mul(b));
            e = e.saturating_sub(1);
        }
        lcb.pow(e).mul(&r)
    }

    /// Sign of the recursively leading integer coefficient.
    fn leading_sign_negative(&self) -> bool {
        match self {
            Const(c) => c.is_negative(),
            Var { coeffs, .. } => coeffs.last().unwrap().leading_sign_negative(),
        }
    }

    fn normalize_sign(self) -> RPoly {
        if self.leading_sign_negative() {
            self.neg()
        } else {
            self
        }
    }

    /// Gcd of the coefficients with respect to the main variable.
    fn content(&self) -> RPoly {
        match self {
            Const(c) => Const(c.abs()),
            Var { coeffs, .. } => {
                let mut g = RPoly::zero();
                for c in coeffs.iter().rev() {
                    g = gcd(&g, c);
                    if matches!(&g, Const(k) if k.is_one()) {
                        break;
                    }
                }
                g
            }
        }
    }

    /// Largest absolute value of an integer coefficient.
    fn max_norm(&self) -> BigInt {
        match self {
            Const(c) => c.abs(),
            Var { coeffs, .. } => coeffs.iter().map(RPoly::max_norm).max().unwrap_or_default(),
        }
    }

    /// Applies `f` to every integer coefficient.
    fn map_ints(&self, f: &dyn Fn(&BigInt) -> BigInt) -> RPoly {
        match self {
            Const(c) => Const(f(c)),
            Var { var, coeffs } => {
                RPoly::from_coeffs(*var, coeffs.iter().map(|c| c.map_ints(f)).collect())
            }
        }
    }

    /// Substitutes the integer `x` for `v`, which must not be preceded by
    /// any variable occurring in `self`.
    fn eval_at(&self, v: usize, x: &BigInt) -> RPoly {
        match self {
            Var { var, coeffs } if *var == v => {
                let xs = Const(x.clone());
                let mut acc = RPoly::zero();
                for c in coeffs.iter().rev() {
                    acc = acc.mul(&xs).add(c);
                }
                acc
            }
            _ => self.clone(),
        }
    }

    fn int_content(&self) -> BigInt {
        match self {
            Const(c) => c.abs(),
            Var { coeffs, .. } => {
                let mut g = BigInt::zero();
                for c in coeffs {
                    g = g.gcd(&c.int_content());
                    if g.is_one() {
                        break;
                    }
                }
                g
            }
        }
    }
}

/// Greatest common divisor over Z, normalized to a positive leading
/// coefficient. Tries the heuristic evaluation gcd first and falls back
/// to the subresultant PRS.
pub(crate) fn gcd(a: &RPoly, b: &RPoly) -> RPoly {
    if !a.is_zero() && !b.is_zero() && !(a.as_const().is_some() && b.as_const().is_some()) {
        if let Some(g) = heu_gcd(a, b, 0) {
            return g.normalize_sign();
        }
    }
    prs_gcd(a, b)
}

/// Gcd by subresultant PRS with recursive content extraction.
pub(crate) fn prs_gcd(a: &RPoly, b: &RPoly) -> RPoly {
    if a.is_zero() {
        return b.clone().normalize_sign();
    }
    if b.is_zero() {
        return a.clone().normalize_sign();
    }
    let (va, vb) = (a.main_var(), b.main_var());
    match (a, b) {
        (Const(x), Const(y)) => Const(x.gcd(y)),
        (Const(x), _) => Const(x.gcd(&b.int_content())),
        (_, Const(y)) => Const(y.gcd(&a.int_content())),
        _ if va < vb => prs_gcd(&a.content(), b),
        _ if vb < va => prs_gcd(a, &b.content()),
        _ => {
            let v = va;
            let (ca, cb) = (a.content(), b.content());
            let pa = a.exact_div(&ca).expect("content divides");
            let pb = b.exact_div(&cb).expect("content divides");
            let g = prs_gcd(&ca, &cb);
            let h = primitive_gcd(pa, pb, v);
            g.mul(&h).normalize_sign()
        }
    }
}

/// Heuristic gcd (Char, Geddes and Gonnet): evaluate the outermost
/// variable at a large integer `ξ`, take the gcd of the images
/// recursively, recover a candidate from its balanced `ξ`-adic expansion
/// and accept it only if it divides both inputs.
fn heu_gcd(a: &RPoly, b: &RPoly, depth: usize) -> Option<RPoly> {
    if let (Const(x), Const(y)) = (a, b) {
        return Some(Const(x.gcd(y)));
    }
    if a.is_zero() || b.is_zero() || depth > 8 {
        return None;
    }
    let (ca, cb) = (a.int_content(), b.int_content());
    let cg = ca.gcd(&cb);
    let pa = a.div_int(&ca)?;
    let pb = b.div_int(&cb)?;
    let v = pa.main_var().min(pb.main_var());
    let bound = pa.max_norm().min(pb.max_norm());
    let mut xi: BigInt = bound * 2 + 29;
    for _ in 0..6 {
        let ea = pa.eval_at(v, &xi);
        let eb = pb.eval_at(v, &xi);
        if let Some(ge) = heu_gcd(&ea, &eb, depth + 1) {
            let cand = balanced_expansion(ge, &xi, v);
            if !cand.is_zero() {
                let cont = cand.int_content();
                let cand = cand.div_int(&cont)?.normalize_sign();
                if pa.exact_div(&cand).is_some() && pb.exact_div(&cand).is_some() {
                    return Some(cand.mul(&Const(cg)));
                }
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

/// Rebuilds `Σ c_i v^i` from `g = Σ c_i ξ^i` with balanced digits.
fn balanced_expansion(mut g: RPoly, xi: &BigInt, v: usize) -> RPoly {
    let half: BigInt = xi / 2;
    let mut coeffs = Vec::new();
    while !g.is_zero() {
        let c = g.map_ints(&|x| {
            let r = x.mod_floor(xi);
            if r > half {
                r - xi
            } else {
                r
            }
        });
        g = g
            .sub(&c)
            .div_int(xi)
            .expect("balanced digit leaves a multiple");
        coeffs.push(c);
        if coeffs.len() > 4096 {
            break;
        }
    }
    RPoly::from_coeffs(v, coeffs)
}

/// Gcd of two polynomials primitive in `v`, both of positive degree in `v`.
fn primitive_gcd(pa: RPoly, pb: RPoly, v: usize) -> RPoly {
    if pa == pb || pa == pb.neg() {
        return pa.normalize_sign();
    }
    let (mut a, mut b) = if pa.deg_in(v) >= pb.deg_in(v) {
        (pa, pb)
    } else {
        (pb, pa)
    };
    if a.exact_div(&b).is_some() {
        return b.normalize_sign();
    }
    let mut g = RPoly::one();
    let mut h = RPoly::one();
    loop {
        let d = a.deg_in(v) - b.deg_in(v);
        let r = a.prem(&b, v);
        if r.is_zero() {
            break;
        }
        if r.main_var() != v {
            return RPoly::one();
        }
        let divisor = g.mul(&h.pow(d));
        a = b;
        b = r
            .exact_div(&divisor)
            .expect("subresultant division is exact");
        g = a.lc_in(v);
        h = if d == 0 {
            h
        } else {
            g.pow(d)
                .exact_div(&h.pow(d - 1))
                .expect("subresultant h update is exact")
        };
    }
    let c = b.content();
    b.exact_div(&c).expect("content divides").normalize_sign()
}

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::monomial::Monomial;
use super::registry::Var;
use super::rpoly::RPoly;
use super::BigRat;

/// Sparse Laurent polynomial with rational coefficients.
///
/// Terms are kept sorted ascending in graded-lex order with no zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct LaurentPoly {
    terms: Vec<(Monomial, BigRat)>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(BigRat::one())
    }

    pub fn constant(c: BigRat) -> Self {
        Self::monomial(Monomial::one(), c)
    }

    pub fn from_int(n: i64) -> Self {
        Self::constant(BigRat::from_integer(n.into()))
    }

    pub fn var(v: Var) -> Self {
        Self::monomial(Monomial::var(v, 1), BigRat::one())
    }

    pub fn monomial(m: Monomial, c: BigRat) -> Self {
        if c.is_zero() {
            Self::zero()
        } else {
            LaurentPoly {
                terms: vec![(m, c)],
            }
        }
    }

    /// Builds a polynomial from arbitrary (possibly repeated) terms.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, BigRat)>>(terms: I) -> Self {
        let mut acc: HashMap<Monomial, BigRat> = HashMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match acc.get_mut(&m) {
                Some(e) => *e += c,
                None => {
                    acc.insert(m, c);
                }
            }
        }
        Self::from_map(acc)
    }

    fn from_map(acc: HashMap<Monomial, BigRat>) -> Self {
        let mut terms: Vec<_> = acc.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        LaurentPoly { terms }
    }

    /// Assumes `terms` is already sorted, merged and zero-free.
    pub(crate) fn from_sorted_unchecked(terms: Vec<(Monomial, BigRat)>) -> Self {
        debug_assert!(terms.windows(2).all(|w| w[0].0 < w[1].0));
        LaurentPoly { terms }
    }

    pub fn terms(&self) -> &[(Monomial, BigRat)] {
        &self.terms
    }

    pub fn into_terms(self) -> Vec<(Monomial, BigRat)> {
        self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRat> {
        match self.terms.as_slice() {
            [] => Some(BigRat::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn as_monomial(&self) -> Option<(&Monomial, &BigRat)> {
        match self.terms.as_slice() {
            [(m, c)] => Some((m, c)),
            _ => None,
        }
    }

    /// Smallest term in graded-lex order.
    pub fn trailing(&self) -> Option<&(Monomial, BigRat)> {
        self.terms.first()
    }

    pub fn leading(&self) -> Option<&(Monomial, BigRat)> {
        self.terms.last()
    }

    /// Componentwise minimum exponent over all terms.
    pub fn min_monomial(&self) -> Monomial {
        let mut it = self.terms.iter();
        let Some((first, _)) = it.next() else {
            return Monomial::one();
        };
        it.fold(first.clone(), |acc, (m, _)| acc.gcd_exps(m))
    }

    pub fn has_negative_exponent(&self) -> bool {
        self.terms.iter().any(|(m, _)| m.has_negative())
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        if m.is_one() {
            return self.clone();
        }
        // multiplication by a monomial preserves the order
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.mul(m), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        LaurentPoly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = &acc * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Applies `v -> v^n` to every variable. Order-preserving, so no re-sort.
    pub fn frobenius(&self, n: u32) -> Self {
        if n == 1 {
            return self.clone();
        }
        LaurentPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.pow(n as i32), c.clone()))
                .collect(),
        }
    }

    /// Exponent of `v` ranging over the terms.
    pub fn degree_range(&self, v: Var) -> Option<(i32, i32)> {
        let mut it = self.terms.iter().map(|(m, _)| m.exp(v));
        let first = it.next()?;
        Some(it.fold((first, first), |(lo, hi), e| (lo.min(e), hi.max(e))))
    }

    /// Splits into components by degree in the variables flagged in `mask`.
    pub fn split_by_masked_degree(&self, mask: &[bool]) -> Vec<(i64, LaurentPoly)> {
        let mut parts: Vec<(i64, Vec<(Monomial, BigRat)>)> = Vec::new();
        for (m, c) in &self.terms {
            let d = m.masked_degree(mask);
            match parts.iter_mut().find(|(k, _)| *k == d) {
                Some((_, v)) => v.push((m.clone(), c.clone())),
                None => parts.push((d, vec![(m.clone(), c.clone())])),
            }
        }
        parts.sort_by_key(|(d, _)| *d);
        parts
            .into_iter()
            .map(|(d, ts)| (d, LaurentPoly::from_sorted_unchecked(ts)))
            .collect()
    }

    /// Least common multiple of the coefficient denominators.
    pub fn denominator_lcm(&self) -> BigInt {
        self.terms
            .iter()
            .fold(BigInt::one(), |acc, (_, c)| acc.lcm(c.denom()))
    }

    /// Gcd of the numerators, assuming all coefficients are integers.
    pub fn integer_content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            g = g.gcd(c.numer());
            if g.is_one() {
                break;
            }
        }
        g
    }

    pub fn is_integral(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    /// Converts an integral polynomial with nonnegative exponents.
    pub(crate) fn to_rpoly(&self) -> RPoly {
        debug_assert!(self.is_integral() && !self.has_negative_exponent());
        let terms: Vec<(&[i32], BigInt)> = self
            .terms
            .iter()
            .map(|(m, c)| (m.exps(), c.numer().clone()))
            .collect();
        RPoly::from_terms(&terms)
    }

    pub(crate) fn from_rpoly(p: &RPoly) -> Self {
        let mut out = Vec::new();
        p.for_each_term(&mut |exps, c| {
            out.push((Monomial::from_exps(exps), BigRat::from_integer(c.clone())));
        });
        out.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        LaurentPoly { terms: out }
    }

    /// Exact division in the Laurent ring; `None` if `other` does not divide.
    pub fn exact_div(&self, other: &LaurentPoly) -> Option<LaurentPoly> {
        assert!(!other.is_zero(), "exact_div by zero");
        if self.is_zero() {
            return Some(Self::zero());
        }
        if let Some((m, c)) = other.as_monomial() {
            return Some(self.mul_monomial(&m.inv()).scale(&c.recip()));
        }
        let (a, sa, ka) = self.integral_shifted();
        let (b, sb, kb) = other.integral_shifted();
        let q = a.exact_div(&b)?;
        let shift = sa.div(&sb);
        Some(
            LaurentPoly::from_rpoly(&q)
                .mul_monomial(&shift)
                .scale(&(kb / ka)),
        )
    }

    /// Returns (p, m, k) with self = p * m / k, where p is integral with
    /// nonnegative exponents and no monomial factor.
    pub(crate) fn integral_shifted(&self) -> (RPoly, Monomial, BigRat) {
        let m = self.min_monomial();
        let k = BigRat::from_integer(self.denominator_lcm());
        let scaled = self.mul_monomial(&m.inv()).scale(&k);
        (scaled.to_rpoly(), m, k)
    }

    /// Evaluates each variable through `f`, which returns the image of a
    /// variable as a Laurent polynomial (or `None` to keep it).
    pub fn substitute_with<F>(&self, f: &F) -> Option<LaurentPoly>
    where
        F: Fn(Var) -> Option<LaurentPoly>,
    {
        let mut acc = LaurentPoly::zero();
        for (m, c) in &self.terms {
            let mut term = LaurentPoly::constant(c.clone());
            let mut kept = Monomial::one();
            for (v, e) in m.vars() {
                match f(v) {
                    None => kept = kept.mul(&Monomial::var(v, e)),
                    Some(img) => {
                        let p = if e >= 0 {
                            img.pow(e as u32)
                        } else {
                            let (mm, cc) = img.as_monomial()?;
                            LaurentPoly::monomial(mm.pow(e), num_traits::Pow::pow(cc, e))
                        };
                        term = &term * &p;
                    }
                }
            }
            acc = &acc + &term.mul_monomial(&kept);
        }
        Some(acc)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs: Vec<Var> = Vec::new();
        for (m, _) in &self.terms {
            for (v, _) in m.vars() {
                if !vs.contains(&v) {
                    vs.push(v);
                }
            }
        }
        vs.sort_unstable();
        vs
    }

    fn merge(&self, other: &LaurentPoly, negate: bool) -> LaurentPoly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.terms, &other.terms);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                std::cmp::Ordering::Less => {
                    out.push(a[i].clone());
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    let c = if negate { -&b[j].1 } else { b[j].1.clone() };
                    out.push((b[j].0.clone(), c));
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    let c = if negate {
                        &a[i].1 - &b[j].1
                    } else {
                        &a[i].1 + &b[j].1
                    };
                    if !c.is_zero() {
                        out.push((a[i].0.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend(a[i..].iter().cloned());
        for t in &b[j..] {
            let c = if negate { -&t.1 } else { t.1.clone() };
            out.push((t.0.clone(), c));
        }
        LaurentPoly { terms: out }
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, false)
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.merge(rhs, true)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        if let Some((m, c)) = rhs.as_monomial() {
            return self.mul_monomial(m).scale(c);
        }
        if let Some((m, c)) = self.as_monomial() {
            return rhs.mul_monomial(m).scale(c);
        }
        let mut acc: HashMap<Monomial, BigRat> =
            HashMap::with_capacity(self.terms.len() * rhs.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let c = ca * cb;
                match acc.entry(ma.mul(mb)) {
                    std::collections::hash_map::Entry::Occupied(mut e) => *e.get_mut() += c,
                    std::collections::hash_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                }
            }
        }
        LaurentPoly::from_map(acc)
    }
}

pub(crate) fn fmt_rational(c: &BigRat) -> String {
    if c.is_integer() {
        c.numer().to_string()
    } else {
        format!("{}/{}", c.numer(), c.denom())
    }
}

/// Canonical text: terms ascending in graded-lex order, `c*q^a*t^b`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", fmt_rational(&abs))?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", fmt_rational(&abs))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::laurent::LaurentPoly;
use super::monomial::Monomial;
use super::registry::{self, Var};
use super::rpoly::{self, RPoly};
use super::BigRat;
use crate::error::{Error, Result};

/// Rational function in the registered variables, kept in canonical form.
///
/// Canonical form: numerator and denominator are coprime; the denominator
/// is an integral polynomial with nonnegative exponents, no monomial factor,
/// content 1, and a positive coefficient on its graded-lex smallest term.
/// Any Laurent monomial content lives in the numerator. Two values are equal
/// iff their canonical forms are identical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: LaurentPoly,
    den: LaurentPoly,
}

/// Gcd of two nonzero Laurent polynomials as a primitive integral
/// polynomial without monomial factor.
fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> RPoly {
    let (ra, _, _) = a.integral_shifted();
    let (rb, _, _) = b.integral_shifted();
    let g = rpoly::gcd(&ra, &rb);
    match g.as_const() {
        Some(_) => RPoly::one(),
        None => g,
    }
}

fn is_one(g: &RPoly) -> bool {
    matches!(g.as_const(), Some(c) if c.is_one())
}

fn div_by(p: &LaurentPoly, g: &RPoly) -> LaurentPoly {
    if is_one(g) {
        return p.clone();
    }
    p.exact_div(&LaurentPoly::from_rpoly(g))
        .expect("gcd divides its arguments")
}

impl RatFunc {
    pub fn zero() -> Self {
        RatFunc {
            num: LaurentPoly::zero(),
            den: LaurentPoly::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_poly(LaurentPoly::from_int(n))
    }

    pub fn from_rational(c: BigRat) -> Self {
        Self::from_poly(LaurentPoly::constant(c))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Self::from_rational(BigRat::new(n.into(), d.into()))
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RatFunc {
            num: p,
            den: LaurentPoly::one(),
        }
    }

    pub fn var(v: Var) -> Self {
        Self::from_poly(LaurentPoly::var(v))
    }

    pub fn q() -> Self {
        Self::var(registry::Q)
    }

    pub fn t() -> Self {
        Self::var(registry::T)
    }

    /// Looks up or registers the variable `name`.
    pub fn named(name: &str) -> Result<Self> {
        Ok(Self::var(registry::var(name)?))
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::from_poly(LaurentPoly::monomial(m, BigRat::one()))
    }

    /// `(q - 1)(1 - t)`.
    pub fn big_q() -> Self {
        let q = Self::q();
        let t = Self::t();
        &(&q - &Self::one()) * &(&Self::one() - &t)
    }

    /// Builds `num/den` and brings it to canonical form.
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        if den.as_monomial().is_some() {
            return Ok(Self::finish(num, den));
        }
        let g = poly_gcd(&num, &den);
        Ok(Self::finish(div_by(&num, &g), div_by(&den, &g)))
    }

    /// Canonicalizes a coprime pair: moves monomial content and scalar
    /// normalization of the denominator into the numerator.
    fn finish(num: LaurentPoly, den: LaurentPoly) -> Self {
        debug_assert!(!den.is_zero());
        if num.is_zero() {
            return Self::zero();
        }
        if let Some((m, c)) = den.as_monomial() {
            let inv_m = m.inv();
            let inv_c = c.recip();
            return RatFunc {
                num: num.mul_monomial(&inv_m).scale(&inv_c),
                den: LaurentPoly::one(),
            };
        }
        let m = den.min_monomial();
        let (num, den) = if m.is_one() {
            (num, den)
        } else {
            let inv = m.inv();
            (num.mul_monomial(&inv), den.mul_monomial(&inv))
        };
        let lcm = den.denominator_lcm();
        let scaled = den.scale(&BigRat::from_integer(lcm.clone()));
        let content = scaled.integer_content();
        let sign = if scaled.trailing().unwrap().1.is_negative() {
            -BigInt::one()
        } else {
            BigInt::one()
        };
        let factor = BigRat::new(lcm * &sign, content);
        if factor.is_one() {
            return RatFunc { num, den };
        }
        RatFunc {
            num: num.scale(&factor),
            den: den.scale(&factor),
        }
    }

    pub fn numer(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn denom(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the denominator is 1 (numerator may be Laurent).
    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn as_constant(&self) -> Option<BigRat> {
        if self.den.is_one() {
            self.num.as_constant()
        } else {
            None
        }
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::finish(self.den.clone(), self.num.clone()))
    }

    pub fn checked_div(&self, other: &RatFunc) -> Result<Self> {
        Ok(self * &other.recip()?)
    }

    pub fn pow(&self, e: i32) -> Result<Self> {
        let base = if e < 0 { self.recip()? } else { self.clone() };
        let n = e.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(n),
            den: base.den.pow(n),
        })
    }

    pub fn scale(&self, c: &BigRat) -> Self {
        RatFunc {
            num: self.num.scale(c),
            den: if c.is_zero() {
                LaurentPoly::one()
            } else {
                self.den.clone()
            },
        }
    }

    /// Adams operation on coefficients: every registered variable `v`
    /// is replaced by `v^n`.
    pub fn frobenius(&self, n: u32) -> Self {
        assert!(n >= 1, "frobenius index must be positive");
        RatFunc {
            num: self.num.frobenius(n),
            den: self.den.frobenius(n),
        }
    }

    /// Substitutes variables by monomial elements `c * x^a`.
    pub fn substitute(&self, bindings: &[(Var, RatFunc)]) -> Result<Self> {
        for (_, target) in bindings {
            if !target.den.is_one() || target.num.len() > 1 {
                return Err(Error::NonMonomialBinding(target.to_string()));
            }
        }
        let image = |v: Var| {
            bindings
                .iter()
                .find(|(w, _)| *w == v)
                .map(|(_, r)| r.num.clone())
        };
        let num = self
            .num
            .substitute_with(&image)
            .ok_or(Error::DivisionByZero)?;
        let den = self
            .den
            .substitute_with(&image)
            .ok_or(Error::DivisionByZero)?;
        Self::new(num, den)
    }

    /// Substitution by variable name; unknown names are an error.
    pub fn substitute_named(&self, bindings: &[(&str, RatFunc)]) -> Result<Self> {
        let mut resolved = Vec::with_capacity(bindings.len());
        for (name, r) in bindings {
            let v =
                registry::lookup(name).ok_or_else(|| Error::InvalidVariable(name.to_string()))?;
            resolved.push((v, r.clone()));
        }
        self.substitute(&resolved)
    }

    pub fn variables(&self) -> Vec<Var> {
        let mut vs = self.num.variables();
        for v in self.den.variables() {
            if !vs.contains(&v) {
                vs.push(v);
            }
        }
        vs.sort_unstable();
        vs
    }

    /// Splits into homogeneous pieces with respect to the small variables.
    /// Errors if a small variable occurs in the denominator or with a
    /// negative exponent.
    pub fn split_small(&self, mask: &[bool]) -> Result<Vec<(u32, RatFunc)>> {
        if self.is_zero() {
            return Ok(Vec::new());
        }
        let small_in = |p: &LaurentPoly| {
            p.terms()
                .iter()
                .any(|(m, _)| m.vars().any(|(v, _)| mask.get(v).copied().unwrap_or(false)))
        };
        if small_in(&self.den) {
            return Err(Error::SmallVariableInDenominator(self.to_string()));
        }
        if !small_in(&self.num) {
            return Ok(vec![(0, self.clone())]);
        }
        let mut out = Vec::new();
        for (d, part) in self.num.split_by_masked_degree(mask) {
            if d < 0 {
                return Err(Error::NegativeSmallPower(self.to_string()));
            }
            // a summand of a reduced numerator may share factors with den
            out.push((d as u32, RatFunc::new(part, self.den.clone())?));
        }
        Ok(out)
    }

    /// Degree-0 part with respect to the small variables.
    pub fn small_degree_zero_part(&self, mask: &[bool]) -> Result<RatFunc> {
        Ok(self
            .split_small(mask)?
            .into_iter()
            .find(|(d, _)| *d == 0)
            .map(|(_, r)| r)
            .unwrap_or_else(RatFunc::zero))
    }

    /// Total small-variable degree bounds (min, max) of the numerator.
    pub fn small_degree_max(&self, mask: &[bool]) -> i64 {
        self.num
            .terms()
            .iter()
            .map(|(m, _)| m.masked_degree(mask))
            .max()
            .unwrap_or(0)
    }

    pub fn parse(s: &str) -> Result<Self> {
        super::text::parse_ratfunc(s)
    }

    fn add_impl(&self, other: &RatFunc, negate: bool) -> RatFunc {
        let rhs_num = if negate {
            -&other.num
        } else {
            other.num.clone()
        };
        if self.is_zero() {
            return RatFunc {
                num: rhs_num,
                den: other.den.clone(),
            };
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(&self.num + &rhs_num);
        }
        if self.den == other.den {
            let num = &self.num + &rhs_num;
            return RatFunc::new(num, self.den.clone()).expect("nonzero denominator");
        }
        if self.den.is_one() {
            let num = &(&self.num * &other.den) + &rhs_num;
            return RatFunc {
                num,
                den: other.den.clone(),
            };
        }
        if other.den.is_one() {
            let num = &self.num + &(&rhs_num * &self.den);
            return RatFunc {
                num,
                den: self.den.clone(),
            };
        }
        let g = poly_gcd(&self.den, &other.den);
        if is_one(&g) {
            let num = &(&self.num * &other.den) + &(&rhs_num * &self.den);
            let den = &self.den * &other.den;
            return RatFunc::finish(num, den);
        }
        let gp = LaurentPoly::from_rpoly(&g);
        let d1 = div_by(&self.den, &g);
        let d2 = div_by(&other.den, &g);
        let num = &(&self.num * &d2) + &(&rhs_num * &d1);
        if num.is_zero() {
            return RatFunc::zero();
        }
        let h = poly_gcd(&num, &gp);
        let num = div_by(&num, &h);
        let den = &d1 * &div_by(&other.den, &h);
        RatFunc::finish(num, den)
    }

    fn mul_impl(&self, other: &RatFunc) -> RatFunc {
        if self.is_zero() || other.is_zero() {
            return RatFunc::zero();
        }
        if self.den.is_one() && other.den.is_one() {
            return RatFunc::from_poly(&self.num * &other.num);
        }
        let (n1, d2) = if other.den.is_one() {
            (self.num.clone(), other.den.clone())
        } else {
            let g = poly_gcd(&self.num, &other.den);
            (div_by(&self.num, &g), div_by(&other.den, &g))
        };
        let (n2, d1) = if self.den.is_one() {
            (other.num.clone(), self.den.clone())
        } else {
            let g = poly_gcd(&other.num, &self.den);
            (div_by(&other.num, &g), div_by(&self.den, &g))
        };
        RatFunc::finish(&n1 * &n2, &d1 * &d2)
    }
}

impl Default for RatFunc {
    fn default() -> Self {
        Self::zero()
    }
}

impl Add for &RatFunc {
    type Output = RatFunc;
    fn add(self, rhs: &RatFunc) -> RatFunc {
        self.add_impl(rhs, false)
    }
}

impl Sub for &RatFunc {
    type Output = RatFunc;
    fn sub(self, rhs: &RatFunc) -> RatFunc {
        self.add_impl(rhs, true)
    }
}

impl Mul for &RatFunc {
    type Output = RatFunc;
    fn mul(self, rhs: &RatFunc) -> RatFunc {
        self.mul_impl(rhs)
    }
}

/// Panics on division by zero; use [`RatFunc::checked_div`] to handle it.
impl Div for &RatFunc {
    type Output = RatFunc;
    fn div(self, rhs: &RatFunc) -> RatFunc {
        self.checked_div(rhs)
            .expect("division by zero rational function")
    }
}

impl Neg for &RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        RatFunc {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: RatFunc) -> RatFunc { (&self).$m(&rhs) }
        }
        impl $tr<&RatFunc> for RatFunc {
            type Output = RatFunc;
            fn $m(self, rhs: &RatFunc) -> RatFunc { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for RatFunc {
    type Output = RatFunc;
    fn neg(self) -> RatFunc {
        -&self
    }
}

impl std::ops::AddAssign<&RatFunc> for RatFunc {
    fn add_assign(&mut self, rhs: &RatFunc) {
        *self = &*self + rhs;
    }
}

impl From<i64> for RatFunc {
    fn from(n: i64) -> Self {
        RatFunc::from_int(n)
    }
}

impl From<BigRat> for RatFunc {
    fn from(c: BigRat) -> Self {
        RatFunc::from_rational(c)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl std::str::FromStr for RatFunc {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        RatFunc::parse(s)
    }
}

impl serde::Serialize for RatFunc {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> serde::Deserialize<'de> for RatFunc {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        RatFunc::parse(&s).map_err(serde::de::Error::custom)
    }
}

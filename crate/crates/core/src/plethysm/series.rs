use std::fmt;

use rayon::prelude::*;

use super::AlphabetExpr;
use crate::coeff::{registry, BigRat, RatFunc};
use crate::error::{Error, Result};
use crate::symfun::{MultiSymFunc, SymFunc};

/// How the degree of a term is measured for truncation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grading {
    /// Sizes of all slots plus the degree in the declared small variables.
    Total,
    /// Size of the given alphabet only.
    Alphabet(String),
}

/// A series truncated after degree `order`, stored by homogeneous parts.
#[derive(Clone, PartialEq, Eq)]
pub struct GradedSeries {
    alphabets: Vec<String>,
    parts: Vec<MultiSymFunc>,
    order: usize,
    grading: Grading,
}

impl GradedSeries {
    pub fn zero(alphabets: Vec<String>, order: usize, grading: Grading) -> Self {
        GradedSeries {
            parts: vec![MultiSymFunc::zero(alphabets.clone()); order + 1],
            alphabets,
            order,
            grading,
        }
    }

    pub fn one(alphabets: Vec<String>, order: usize, grading: Grading) -> Self {
        let mut s = Self::zero(alphabets.clone(), order, grading);
        s.parts[0] = MultiSymFunc::constant(alphabets, RatFunc::one());
        s
    }

    /// Splits `m` into graded parts, dropping everything above `order`.
    pub fn from_element(m: &MultiSymFunc, order: usize, grading: Grading) -> Result<Self> {
        let mut s = Self::zero(m.alphabets().to_vec(), order, grading);
        match &s.grading {
            Grading::Total => {
                let mask = registry::small_mask();
                for (k, c) in m.terms() {
                    let base = k.total_size();
                    for (d, piece) in c.split_small(&mask)? {
                        let deg = base + d as usize;
                        if deg <= order {
                            s.parts[deg].add_term(k.clone(), piece);
                        }
                    }
                }
            }
            Grading::Alphabet(name) => {
                let slot = m.alphabets().iter().position(|a| a == name);
                for (k, c) in m.terms() {
                    let deg = slot.map_or(0, |i| k.0[i].size());
                    if deg <= order {
                        s.parts[deg].add_term(k.clone(), c.clone());
                    }
                }
            }
        }
        Ok(s)
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn grading(&self) -> &Grading {
        &self.grading
    }

    pub fn alphabets(&self) -> &[String] {
        &self.alphabets
    }

    pub fn part(&self, d: usize) -> &MultiSymFunc {
        &self.parts[d]
    }

    pub fn parts(&self) -> &[MultiSymFunc] {
        &self.parts
    }

    /// Sum of all parts.
    pub fn to_element(&self) -> MultiSymFunc {
        let mut out = MultiSymFunc::zero(self.alphabets.clone());
        for p in &self.parts {
            out = &out + p;
        }
        out
    }

    pub fn truncate(&self, order: usize) -> GradedSeries {
        let order = order.min(self.order);
        GradedSeries {
            alphabets: self.alphabets.clone(),
            parts: self.parts[..=order].to_vec(),
            order,
            grading: self.grading.clone(),
        }
    }

    fn check_grading(&self, other: &GradedSeries) -> Result<()> {
        if self.grading != other.grading {
            return Err(Error::AlphabetMismatch(format!(
                "series graded by {:?} and {:?}",
                self.grading, other.grading
            )));
        }
        Ok(())
    }

    fn realigned(&self, names: &[String]) -> Vec<MultiSymFunc> {
        self.parts
            .iter()
            .map(|p| p.embed(names).expect("union of alphabets"))
            .collect()
    }

    pub fn add(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check_grading(other)?;
        let names = MultiSymFunc::union_alphabets(&self.alphabets, &other.alphabets);
        let order = self.order.min(other.order);
        let (a, b) = (self.realigned(&names), other.realigned(&names));
        Ok(GradedSeries {
            parts: (0..=order).map(|d| &a[d] + &b[d]).collect(),
            alphabets: names,
            order,
            grading: self.grading.clone(),
        })
    }

    pub fn neg(&self) -> GradedSeries {
        GradedSeries {
            parts: self.parts.iter().map(|p| -p).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.add(&other.neg())
    }

    /// Truncated product; the order is the smaller of the two.
    pub fn mul(&self, other: &GradedSeries) -> Result<GradedSeries> {
        self.check_grading(other)?;
        let names = MultiSymFunc::union_alphabets(&self.alphabets, &other.alphabets);
        let order = self.order.min(other.order);
        let (a, b) = (self.realigned(&names), other.realigned(&names));
        let parts = (0..=order)
            .into_par_iter()
            .map(|d| {
                let mut acc = MultiSymFunc::zero(names.clone());
                for i in 0..=d {
                    if !a[i].is_zero() && !b[d - i].is_zero() {
                        acc = &acc + &(&a[i] * &b[d - i]);
                    }
                }
                acc
            })
            .collect();
        Ok(GradedSeries {
            alphabets: names,
            parts,
            order,
            grading: self.grading.clone(),
        })
    }

    /// Multiplies by a coefficient; small variables in `c` shift degrees.
    pub fn scale(&self, c: &RatFunc) -> Result<GradedSeries> {
        let shifts = matches!(self.grading, Grading::Total)
            && c.variables().iter().any(|&v| registry::is_small(v));
        if !shifts {
            return Ok(GradedSeries {
                parts: self.parts.iter().map(|p| p.scale(c)).collect(),
                ..self.clone()
            });
        }
        Self::from_element(
            &self.to_element().scale(c),
            self.order,
            self.grading.clone(),
        )
    }

    /// `p_n` applied to the series: part `d` moves to degree `n·d`.
    pub fn adams(&self, n: usize) -> GradedSeries {
        let mut out = Self::zero(self.alphabets.clone(), self.order, self.grading.clone());
        for (d, p) in self.parts.iter().enumerate() {
            if d * n <= self.order && !p.is_zero() {
                out.parts[d * n] = &out.parts[d * n] + &p.adams(n);
            }
        }
        out
    }

    pub fn constant_term(&self) -> RatFunc {
        self.parts[0].constant_term()
    }

    /// `pExp` of this series; its degree-0 part must vanish.
    pub fn pexp(&self) -> Result<GradedSeries> {
        if !self.parts[0].is_zero() {
            return Err(Error::NonzeroConstantTerm);
        }
        let n = self.order;
        // P = Σ p_k[A]/k, graded
        let mut p = Self::zero(self.alphabets.clone(), n, self.grading.clone());
        for k in 1..=n {
            let ak = self.adams(k);
            let inv = RatFunc::from_rational(BigRat::new(1.into(), (k as i64).into()));
            for d in 1..=n {
                if !ak.parts[d].is_zero() {
                    p.parts[d] = &p.parts[d] + &ak.parts[d].scale(&inv);
                }
            }
        }
        // E_d = (1/d) Σ_{i=1}^{d} i P_i E_{d-i}
        let mut e = Self::one(self.alphabets.clone(), n, self.grading.clone());
        for d in 1..=n {
            let terms: Vec<MultiSymFunc> = (1..=d)
                .into_par_iter()
                .filter(|&i| !p.parts[i].is_zero() && !e.parts[d - i].is_zero())
                .map(|i| (&p.parts[i] * &e.parts[d - i]).scale(&RatFunc::from_int(i as i64)))
                .collect();
            let mut acc = MultiSymFunc::zero(self.alphabets.clone());
            for t in &terms {
                acc = &acc + t;
            }
            let inv = RatFunc::from_rational(BigRat::new(1.into(), (d as i64).into()));
            e.parts[d] = acc.scale(&inv);
        }
        Ok(e)
    }

    /// `pLog` of this series; its degree-0 part must be exactly 1.
    pub fn plog(&self) -> Result<GradedSeries> {
        let one = MultiSymFunc::constant(self.alphabets.clone(), RatFunc::one());
        if self.parts[0] != one {
            return Err(Error::ConstantTermNotOne(self.parts[0].to_string()));
        }
        let n = self.order;
        // formal log: L_d = S_d - (1/d) Σ_{i<d} i L_i S_{d-i}
        let mut l = Self::zero(self.alphabets.clone(), n, self.grading.clone());
        for d in 1..=n {
            let terms: Vec<MultiSymFunc> = (1..d)
                .into_par_iter()
                .filter(|&i| !l.parts[i].is_zero() && !self.parts[d - i].is_zero())
                .map(|i| (&l.parts[i] * &self.parts[d - i]).scale(&RatFunc::from_int(i as i64)))
                .collect();
            let mut acc = MultiSymFunc::zero(self.alphabets.clone());
            for t in &terms {
                acc = &acc + t;
            }
            let inv = RatFunc::from_rational(BigRat::new((-1).into(), (d as i64).into()));
            l.parts[d] = &self.parts[d] + &acc.scale(&inv);
        }
        // Möbius inversion of Σ p_k/k
        let mut out = Self::zero(self.alphabets.clone(), n, self.grading.clone());
        for k in 1..=n {
            let mu = moebius(k);
            if mu == 0 {
                continue;
            }
            let c = RatFunc::from_rational(BigRat::new(mu.into(), (k as i64).into()));
            let lk = l.adams(k);
            for d in 1..=n {
                if !lk.parts[d].is_zero() {
                    out.parts[d] = &out.parts[d] + &lk.parts[d].scale(&c);
                }
            }
        }
        Ok(out)
    }
}

fn moebius(mut n: usize) -> i64 {
    let mut mu = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            mu = -mu;
        }
        p += 1;
    }
    if n > 1 {
        mu = -mu;
    }
    mu
}

/// `pExp[A]` up to total degree `order`.
pub fn pexp(a: &AlphabetExpr, order: usize) -> Result<GradedSeries> {
    let s = GradedSeries::from_element(&a.to_element(), order, Grading::Total)?;
    if !s.part(0).is_zero() {
        return Err(Error::NonzeroConstantTerm);
    }
    s.pexp()
}

/// `pExp` of an arbitrary series.
pub fn pexp_series(s: &GradedSeries) -> Result<GradedSeries> {
    s.pexp()
}

/// `pLog` of a series with constant term 1.
pub fn plog(s: &GradedSeries) -> Result<GradedSeries> {
    s.plog()
}

/// `(F[X], pExp[XY])_X`, which reproduces `F[Y]`.
pub fn reproducing_pair(f: &SymFunc) -> Result<SymFunc> {
    let n = f.degree().unwrap_or(0);
    let xy = AlphabetExpr::symbol("X").try_mul(&AlphabetExpr::symbol("Y"))?;
    let s = GradedSeries::from_element(&xy.to_element(), n, Grading::Alphabet("X".into()))?;
    let kernel = s.pexp()?.to_element();
    let paired = kernel.pair_slot(0, f);
    Ok(paired.to_sym().expect("single alphabet"))
}

impl fmt::Display for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_element())
    }
}

impl fmt::Debug for GradedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + O({})", self.to_element(), self.order + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::Partition;
    use crate::symfun::{h, Basis};

    fn r(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    #[test]
    fn moebius_values() {
        let v: Vec<i64> = (1..=10).map(moebius).collect();
        assert_eq!(v, [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]);
    }

    #[test]
    fn pexp_of_small_variable() {
        registry::declare_small("u").unwrap();
        let a = AlphabetExpr::constant(r("u"));
        let s = pexp(&a, 5).unwrap();
        for d in 0..=5 {
            assert_eq!(s.part(d).as_scalar().unwrap(), r(&format!("u^{d}")));
        }
        let back = s.plog().unwrap();
        assert_eq!(back.to_element().as_scalar().unwrap(), r("u"));
    }

    #[test]
    fn pexp_rejects_constants() {
        assert!(matches!(
            pexp(&AlphabetExpr::constant(r("q")), 3),
            Err(Error::NonzeroConstantTerm)
        ));
    }

    #[test]
    fn pexp_of_alphabet_is_sum_of_h() {
        let s = pexp(&AlphabetExpr::symbol("X"), 4).unwrap();
        for d in 0..=4 {
            assert_eq!(s.part(d).to_sym().unwrap(), h(d));
        }
    }

    #[test]
    fn reproducing_kernel() {
        let f = h(3);
        assert_eq!(reproducing_pair(&f).unwrap(), f);
        let s21 = SymFunc::from_basis(Basis::S, &Partition::new(vec![2, 1]).unwrap()).unwrap();
        assert_eq!(reproducing_pair(&s21).unwrap(), s21);
    }
}

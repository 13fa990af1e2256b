//! Symmetric functions over `Q(q,t)` stored in the power-sum basis.

mod bases;
mod multi;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_traits::Zero;
use serde_json::json;

pub use multi::{natural_alphabet_cmp, MultiSymFunc, PTuple};

use crate::coeff::RatFunc;
use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};
use bases::Classical;

/// Named bases of `Sym`. `Macdonald` is the modified Macdonald basis `H_λ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Basis {
    P,
    M,
    E,
    H,
    S,
    Macdonald,
}

impl Basis {
    pub fn letter(self) -> &'static str {
        match self {
            Basis::P => "p",
            Basis::M => "m",
            Basis::E => "e",
            Basis::H => "h",
            Basis::S => "s",
            Basis::Macdonald => "H",
        }
    }

    fn classical(self) -> Option<Classical> {
        match self {
            Basis::P => Some(Classical::P),
            Basis::M => Some(Classical::M),
            Basis::E => Some(Classical::E),
            Basis::H => Some(Classical::H),
            Basis::S => Some(Classical::S),
            Basis::Macdonald => None,
        }
    }
}

impl FromStr for Basis {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "p" => Basis::P,
            "m" => Basis::M,
            "e" => Basis::E,
            "h" => Basis::H,
            "s" => Basis::S,
            "H" => Basis::Macdonald,
            _ => return Err(Error::UnknownBasis(s.to_string())),
        })
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.letter())
    }
}

/// Finite linear combination `Σ c_λ p_λ` with coefficients in `Q(q,t)`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct SymFunc {
    terms: BTreeMap<Partition, RatFunc>,
}

impl SymFunc {
    pub fn zero() -> Self {
        SymFunc::default()
    }

    pub fn one() -> Self {
        Self::constant(RatFunc::one())
    }

    pub fn constant(c: RatFunc) -> Self {
        Self::monomial(Partition::empty(), c)
    }

    /// The power sum `p_λ`.
    pub fn p(l: Partition) -> Self {
        Self::monomial(l, RatFunc::one())
    }

    pub fn monomial(l: Partition, c: RatFunc) -> Self {
        let mut s = SymFunc::zero();
        s.add_term(l, c);
        s
    }

    pub fn from_terms<I: IntoIterator<Item = (Partition, RatFunc)>>(terms: I) -> Self {
        let mut s = SymFunc::zero();
        for (l, c) in terms {
            s.add_term(l, c);
        }
        s
    }

    pub(crate) fn add_term(&mut self, l: Partition, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&l) {
            Some(e) => {
                *e = &*e + &c;
                if e.is_zero() {
                    self.terms.remove(&l);
                }
            }
            None => {
                self.terms.insert(l, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Partition, RatFunc> {
        &self.terms
    }

    pub fn coeff(&self, l: &Partition) -> RatFunc {
        self.terms.get(l).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> RatFunc {
        self.coeff(&Partition::empty())
    }

    /// Largest degree present, `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.terms.keys().map(Partition::size).max()
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut it = self.terms.keys().map(Partition::size);
        match it.next() {
            None => true,
            Some(d) => it.all(|e| e == d),
        }
    }

    /// Homogeneous component of degree `n`.
    pub fn component(&self, n: usize) -> SymFunc {
        SymFunc {
            terms: self
                .terms
                .iter()
                .filter(|(l, _)| l.size() == n)
                .map(|(l, c)| (l.clone(), c.clone()))
                .collect(),
        }
    }

    /// Drops all terms of degree above `n`.
    pub fn truncate(&self, n: usize) -> SymFunc {
        SymFunc {
            terms: self
                .terms
                .iter()
                .filter(|(l, _)| l.size() <= n)
                .map(|(l, c)| (l.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn scale(&self, c: &RatFunc) -> SymFunc {
        if c.is_zero() {
            return SymFunc::zero();
        }
        SymFunc {
            terms: self.terms.iter().map(|(l, k)| (l.clone(), k * c)).collect(),
        }
    }

    pub fn map_coeffs<F: Fn(&RatFunc) -> Result<RatFunc>>(&self, f: F) -> Result<SymFunc> {
        let mut out = SymFunc::zero();
        for (l, c) in &self.terms {
            out.add_term(l.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Adams operation `p_n[F]`: `p_λ ↦ p_{nλ}` with Frobenius on
    /// coefficients.
    pub fn adams(&self, n: usize) -> SymFunc {
        SymFunc {
            terms: self
                .terms
                .iter()
                .map(|(l, c)| (l.scaled(n), c.frobenius(n as u32)))
                .collect(),
        }
    }

    /// `b_λ` expanded in power sums. The Macdonald basis is delegated to
    /// [`crate::macdonald::macdonald_h`].
    pub fn from_basis(b: Basis, l: &Partition) -> Result<SymFunc> {
        match b.classical() {
            Some(c) => {
                let t = bases::table(c, l.size());
                Ok(SymFunc::from_terms(t.to_p[l].iter().map(|(r, c)| {
                    (r.clone(), RatFunc::from_rational(c.clone()))
                })))
            }
            None => crate::macdonald::macdonald_h(l),
        }
    }

    /// Coefficients of `self` in the basis `b`.
    pub fn to_basis(&self, b: Basis) -> Result<BTreeMap<Partition, RatFunc>> {
        let Some(c) = b.classical() else {
            return crate::macdonald::expand_in_h(self);
        };
        let mut out: BTreeMap<Partition, RatFunc> = BTreeMap::new();
        for (rho, coef) in &self.terms {
            let t = bases::table(c, rho.size());
            for (l, k) in &t.from_p[rho] {
                let e = out.entry(l.clone()).or_insert_with(RatFunc::zero);
                *e = &*e + &coef.scale(k);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Builds `Σ c_λ b_λ`.
    pub fn from_basis_terms<'a, I>(b: Basis, terms: I) -> Result<SymFunc>
    where
        I: IntoIterator<Item = (&'a Partition, &'a RatFunc)>,
    {
        let mut out = SymFunc::zero();
        for (l, c) in terms {
            out = &out + &SymFunc::from_basis(b, l)?.scale(c);
        }
        Ok(out)
    }

    /// Hall scalar product, `(p_λ, p_μ) = δ_{λμ} z_λ`.
    pub fn hall_pair(&self, other: &SymFunc) -> RatFunc {
        let (small, large) = if self.terms.len() <= other.terms.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = RatFunc::zero();
        for (l, c) in &small.terms {
            if let Some(d) = large.terms.get(l) {
                acc = &acc + &(c * d).scale(&l.z_stat());
            }
        }
        acc
    }

    /// `(ΔF)[X, Y] = F[X + Y]` in the two-alphabet power-sum basis.
    pub fn coproduct(&self) -> MultiSymFunc {
        let names = vec!["X".to_string(), "Y".to_string()];
        let mut out = MultiSymFunc::zero(names.clone());
        for (l, c) in &self.terms {
            // p_λ[X+Y] = ∏ (p_i[X] + p_i[Y]); expand over subsets of parts.
            let parts = l.parts();
            let k = parts.len();
            for mask in 0u32..(1 << k) {
                let (mut a, mut b) = (Vec::new(), Vec::new());
                for (i, &p) in parts.iter().enumerate() {
                    if mask & (1 << i) != 0 {
                        b.push(p);
                    } else {
                        a.push(p);
                    }
                }
                let key = PTuple(vec![
                    Partition::from_unsorted(a),
                    Partition::from_unsorted(b),
                ]);
                out.add_term(key, c.clone());
            }
        }
        out
    }

    pub fn to_text(&self, b: Basis) -> Result<String> {
        if b == Basis::P {
            return Ok(self.to_string());
        }
        let coeffs = self.to_basis(b)?;
        Ok(format_linear(
            coeffs.iter().map(|(l, c)| (basis_atom(b, l), c)),
        ))
    }

    pub fn to_json(&self, b: Basis) -> Result<serde_json::Value> {
        let coeffs = if b == Basis::P {
            self.terms.clone()
        } else {
            self.to_basis(b)?
        };
        let terms: Vec<_> = coeffs
            .iter()
            .map(|(l, c)| json!({"index": l.parts(), "coeff": c.to_string()}))
            .collect();
        Ok(json!({"basis": b.letter(), "terms": terms}))
    }

    pub fn from_json(v: &serde_json::Value) -> Result<SymFunc> {
        let bad = |m: &str| Error::Parse {
            input: v.to_string(),
            message: m.to_string(),
        };
        let b: Basis = v["basis"]
            .as_str()
            .ok_or_else(|| bad("missing basis"))?
            .parse()?;
        let mut coeffs = BTreeMap::new();
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let l: Partition =
                serde_json::from_value(t["index"].clone()).map_err(|e| bad(&e.to_string()))?;
            let c = RatFunc::parse(t["coeff"].as_str().ok_or_else(|| bad("missing coeff"))?)?;
            coeffs.insert(l, c);
        }
        SymFunc::from_basis_terms(b, coeffs.iter())
    }
}

/// Kostka-free shortcut for `h_n` etc. in p-basis.
pub fn h(n: usize) -> SymFunc {
    SymFunc::from_basis(Basis::H, &Partition::row(n)).expect("classical basis")
}

pub fn e(n: usize) -> SymFunc {
    SymFunc::from_basis(Basis::E, &Partition::row(n)).expect("classical basis")
}

pub fn p(n: usize) -> SymFunc {
    SymFunc::p(Partition::row(n))
}

/// `b[λ]` as printed and parsed by the expression language.
pub(crate) fn basis_atom(b: Basis, l: &Partition) -> String {
    if l.is_empty() {
        String::new()
    } else {
        format!("{}[{}]", b.letter(), l)
    }
}

/// Renders `Σ c_i · atom_i`, where an empty atom stands for 1.
pub(crate) fn format_linear<'a, I>(terms: I) -> String
where
    I: IntoIterator<Item = (String, &'a RatFunc)>,
{
    let mut out = String::new();
    for (i, (atom, c)) in terms.into_iter().enumerate() {
        let (neg, body) = format_term(&atom, c);
        match (i, neg) {
            (0, false) => {}
            (0, true) => out.push('-'),
            (_, false) => out.push_str(" + "),
            (_, true) => out.push_str(" - "),
        }
        out.push_str(&body);
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn format_term(atom: &str, c: &RatFunc) -> (bool, String) {
    if c.is_polynomial() && c.numer().len() == 1 {
        let (m, k) = &c.numer().terms()[0];
        let neg = k.is_negative_rat();
        let abs = RatFunc::from_poly(crate::coeff::LaurentPoly::monomial(m.clone(), k.abs_rat()));
        let body = if atom.is_empty() {
            abs.to_string()
        } else if abs.is_one() {
            atom.to_string()
        } else {
            format!("{abs}*{atom}")
        };
        return (neg, body);
    }
    let body = if atom.is_empty() {
        format!("({c})")
    } else if c.is_polynomial() {
        format!("({c})*{atom}")
    } else {
        format!("{c}*{atom}")
    };
    (false, body)
}

trait RatSign {
    fn is_negative_rat(&self) -> bool;
    fn abs_rat(&self) -> crate::coeff::BigRat;
}

impl RatSign for crate::coeff::BigRat {
    fn is_negative_rat(&self) -> bool {
        self < &crate::coeff::BigRat::zero()
    }
    fn abs_rat(&self) -> crate::coeff::BigRat {
        if self.is_negative_rat() {
            -self
        } else {
            self.clone()
        }
    }
}

/// Power-sum text form, e.g. `1/2*p[1,1] + 1/2*p[2]`.
impl fmt::Display for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_linear(
            self.terms.iter().map(|(l, c)| (basis_atom(Basis::P, l), c)),
        ))
    }
}

impl fmt::Debug for SymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl Add for &SymFunc {
    type Output = SymFunc;
    fn add(self, rhs: &SymFunc) -> SymFunc {
        let mut out = self.clone();
        for (l, c) in &rhs.terms {
            out.add_term(l.clone(), c.clone());
        }
        out
    }
}

impl Sub for &SymFunc {
    type Output = SymFunc;
    fn sub(self, rhs: &SymFunc) -> SymFunc {
        let mut out = self.clone();
        for (l, c) in &rhs.terms {
            out.add_term(l.clone(), -c);
        }
        out
    }
}

impl Neg for &SymFunc {
    type Output = SymFunc;
    fn neg(self) -> SymFunc {
        SymFunc {
            terms: self.terms.iter().map(|(l, c)| (l.clone(), -c)).collect(),
        }
    }
}

impl Mul for &SymFunc {
    type Output = SymFunc;
    fn mul(self, rhs: &SymFunc) -> SymFunc {
        let mut acc: std::collections::HashMap<Partition, RatFunc> =
            std::collections::HashMap::new();
        for (la, ca) in &self.terms {
            for (lb, cb) in &rhs.terms {
                let k = la.union(lb);
                let c = ca * cb;
                match acc.get_mut(&k) {
                    Some(e) => *e = &*e + &c,
                    None => {
                        acc.insert(k, c);
                    }
                }
            }
        }
        SymFunc {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

/// All partitions of `n` paired with a basis, as a convenience for sweeps.
pub fn basis_elements(b: Basis, n: usize) -> Result<Vec<(Partition, SymFunc)>> {
    partitions_of(n)
        .into_iter()
        .map(|l| SymFunc::from_basis(b, &l).map(|f| (l, f)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn part(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn r(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    #[test]
    fn from_basis_examples() {
        let half = r("1/2");
        let h2 = SymFunc::from_basis(Basis::H, &part(&[2])).unwrap();
        assert_eq!(
            h2,
            SymFunc::from_terms([(part(&[1, 1]), half.clone()), (part(&[2]), half.clone())])
        );
        let e2 = SymFunc::from_basis(Basis::E, &part(&[2])).unwrap();
        assert_eq!(
            e2,
            SymFunc::from_terms([(part(&[1, 1]), half.clone()), (part(&[2]), -&half)])
        );
        assert_eq!(SymFunc::from_basis(Basis::S, &part(&[1, 1])).unwrap(), e2);
        assert_eq!(e2.to_string(), "-1/2*p[2] + 1/2*p[1,1]");
    }

    #[test]
    fn to_basis_examples() {
        let e2 = e(2);
        let m = e2.to_basis(Basis::M).unwrap();
        assert_eq!(m.len(), 1);
        assert!(m[&part(&[1, 1])].is_one());
        let m = h(2).to_basis(Basis::M).unwrap();
        assert!(m[&part(&[2])].is_one() && m[&part(&[1, 1])].is_one());
        let h21 = SymFunc::from_basis(Basis::H, &part(&[2, 1])).unwrap();
        let s = h21.to_basis(Basis::S).unwrap();
        assert!(s[&part(&[2, 1])].is_one());
        assert!(s[&part(&[3])].is_one());
        assert!(!s.contains_key(&part(&[1, 1, 1])));
    }

    #[test]
    fn hall_pair_examples() {
        let h21 = SymFunc::from_basis(Basis::H, &part(&[2, 1])).unwrap();
        for mu in partitions_of(3) {
            let m = SymFunc::from_basis(Basis::M, &mu).unwrap();
            let expect = if mu == part(&[2, 1]) {
                RatFunc::one()
            } else {
                RatFunc::zero()
            };
            assert_eq!(h21.hall_pair(&m), expect);
        }
        assert_eq!(p(2).hall_pair(&p(2)), RatFunc::from_int(2));
    }

    #[test]
    fn coproduct_examples() {
        let d = h(2).coproduct();
        let names = vec!["X".to_string(), "Y".to_string()];
        let expect = MultiSymFunc::tensor(&names, &[h(2), SymFunc::one()]).unwrap()
            + MultiSymFunc::tensor(&names, &[h(1), h(1)]).unwrap()
            + MultiSymFunc::tensor(&names, &[SymFunc::one(), h(2)]).unwrap();
        assert_eq!(d, expect);
        let dp = p(3).coproduct();
        assert_eq!(dp.terms().len(), 2);
    }

    #[test]
    fn text_and_json() {
        let f = h(2);
        assert_eq!(f.to_text(Basis::H).unwrap(), "h[2]");
        let j = f.to_json(Basis::M).unwrap();
        assert_eq!(j["basis"], "m");
        assert_eq!(SymFunc::from_json(&j).unwrap(), f);
        let x = SymFunc::from_terms([(Partition::empty(), r("1 + q")), (part(&[1]), r("-q"))]);
        assert_eq!(x.to_string(), "(1 + q) - q*p[1]");
        assert_eq!(SymFunc::zero().to_string(), "0");
    }

    #[test]
    fn unknown_basis() {
        assert!(matches!("x".parse::<Basis>(), Err(Error::UnknownBasis(_))));
    }
}

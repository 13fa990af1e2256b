//! Integer partitions and the statistics attached to them.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::coeff::registry::{Q, T};
use crate::coeff::{BigRat, LaurentPoly, Monomial, RatFunc};
use crate::error::{Error, Result};

/// Weakly decreasing sequence of positive integers.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Partition {
    parts: Vec<usize>,
    size: usize,
}

impl Partition {
    pub fn empty() -> Self {
        Partition::default()
    }

    /// Validates that `parts` is weakly decreasing and strictly positive.
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::InvalidPartition(format!("{parts:?}")));
        }
        let size = parts.iter().sum();
        Ok(Partition { parts, size })
    }

    /// Sorts the parts and drops zeros.
    pub fn from_unsorted(mut parts: Vec<usize>) -> Self {
        parts.retain(|&p| p > 0);
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let size = parts.iter().sum();
        Partition { parts, size }
    }

    /// The one-row partition `(n)`, or `()` for `n = 0`.
    pub fn row(n: usize) -> Self {
        Self::from_unsorted(vec![n])
    }

    /// The one-column partition `(1^n)`.
    pub fn column(n: usize) -> Self {
        Partition {
            parts: vec![1; n],
            size: n,
        }
    }

    pub fn parts(&self) -> &[usize] {
        &self.parts
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Part `i` (zero-indexed), 0 beyond the length.
    pub fn part(&self, i: usize) -> usize {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Multiset union; the power-sum product `p_λ p_μ = p_{λ ∪ μ}`.
    pub fn union(&self, other: &Partition) -> Partition {
        let mut parts = Vec::with_capacity(self.len() + other.len());
        let (mut i, mut j) = (0, 0);
        while i < self.len() && j < other.len() {
            if self.parts[i] >= other.parts[j] {
                parts.push(self.parts[i]);
                i += 1;
            } else {
                parts.push(other.parts[j]);
                j += 1;
            }
        }
        parts.extend_from_slice(&self.parts[i..]);
        parts.extend_from_slice(&other.parts[j..]);
        Partition {
            parts,
            size: self.size + other.size,
        }
    }

    /// Every part multiplied by `n`; `p_n[p_λ] = p_{nλ}`.
    pub fn scaled(&self, n: usize) -> Partition {
        Partition {
            parts: self.parts.iter().map(|p| p * n).collect(),
            size: self.size * n,
        }
    }

    /// Adjoins a part (ignored when zero) keeping the parts sorted.
    pub fn with_part(&self, m: usize) -> Partition {
        self.union(&Partition::row(m))
    }

    pub fn conjugate(&self) -> Partition {
        let cols = self.part(0);
        let parts = (0..cols)
            .map(|c| self.parts.iter().take_while(|&&p| p > c).count())
            .collect();
        Partition {
            parts,
            size: self.size,
        }
    }

    /// Dominance order `self ≤ other`; only defined for equal sizes.
    pub fn dominance_leq(&self, other: &Partition) -> Result<bool> {
        if self.size != other.size {
            return Err(Error::SizeMismatch(self.to_string(), other.to_string()));
        }
        let (mut a, mut b) = (0, 0);
        for i in 0..self.len().max(other.len()) {
            a += self.part(i);
            b += other.part(i);
            if a > b {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Zero-indexed cells `(row, col)` in row-major order.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }

    /// Arm and leg lengths of the cell `(row, col)`.
    pub fn arm_leg(&self, row: usize, col: usize) -> Result<(usize, usize)> {
        if row >= self.len() || col >= self.parts[row] {
            return Err(Error::CellOutside {
                row,
                col,
                partition: self.to_string(),
            });
        }
        let arm = self.parts[row] - col - 1;
        let leg = self.parts.iter().filter(|&&p| p > col).count() - row - 1;
        Ok((arm, leg))
    }

    /// `n(λ) = Σ (i-1) λ_i`.
    pub fn n_stat(&self) -> usize {
        self.parts.iter().enumerate().map(|(i, p)| i * p).sum()
    }

    /// Multiplicities `(part, count)` in decreasing part order.
    pub fn multiplicities(&self) -> Vec<(usize, usize)> {
        let mut out: Vec<(usize, usize)> = Vec::new();
        for &p in &self.parts {
            match out.last_mut() {
                Some((q, m)) if *q == p => *m += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }

    /// `z_λ = ∏ i^{m_i} m_i!`, the norm of `p_λ` under the Hall pairing.
    pub fn z_stat(&self) -> BigRat {
        let mut z = BigInt::one();
        for (i, m) in self.multiplicities() {
            for k in 1..=m {
                z *= BigInt::from(i) * BigInt::from(k);
            }
        }
        BigRat::from_integer(z)
    }

    /// `α_λ = ∏_cells (q^a - t^{l+1})(q^{a+1} - t^l)`.
    pub fn alpha(&self) -> RatFunc {
        let mut acc = LaurentPoly::one();
        for (r, c) in self.cells() {
            let (a, l) = self.arm_leg(r, c).expect("cell of the diagram");
            let f1 = &qt(a as i32, 0) - &qt(0, l as i32 + 1);
            let f2 = &qt(a as i32 + 1, 0) - &qt(0, l as i32);
            acc = &(&acc * &f1) * &f2;
        }
        RatFunc::from_poly(acc)
    }

    /// `B_λ = Σ_cells q^c t^r`.
    pub fn b_stat(&self) -> RatFunc {
        RatFunc::from_poly(LaurentPoly::from_terms(
            self.cells()
                .map(|(r, c)| (monomial_qt(c as i32, r as i32), BigRat::one())),
        ))
    }

    /// `D_λ = -1 - Q B_λ` with `Q = (q-1)(1-t)`.
    pub fn d_stat(&self) -> RatFunc {
        &(-&RatFunc::one()) - &(&RatFunc::big_q() * &self.b_stat())
    }
}

fn monomial_qt(a: i32, b: i32) -> Monomial {
    Monomial::var(Q, a).mul(&Monomial::var(T, b))
}

fn qt(a: i32, b: i32) -> LaurentPoly {
    LaurentPoly::monomial(monomial_qt(a, b), BigRat::one())
}

/// All partitions of `n` in reverse lexicographic order.
pub fn partitions_of(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut cur = Vec::new();
    fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
        if rem == 0 {
            out.push(Partition::from_unsorted(cur.clone()));
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            rec(rem - p, p, cur, out);
            cur.pop();
        }
    }
    rec(n, n, &mut cur, &mut out);
    out
}

/// All partitions of size at most `n`, grouped by size.
pub fn partitions_up_to(n: usize) -> Vec<Partition> {
    (0..=n).flat_map(partitions_of).collect()
}

/// Size first, then reverse lexicographic: `() < (1) < (2) < (1,1) < (3) < (2,1) < …`.
impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.size
            .cmp(&other.size)
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Comma-separated parts; the empty partition prints as the empty string.
impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s: Vec<String> = self.parts.iter().map(|p| p.to_string()).collect();
        write!(f, "{}", s.join(","))
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// Accepts `3,1,1`, the empty string or `0` for `()`.
impl FromStr for Partition {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() || s == "0" {
            return Ok(Partition::empty());
        }
        let parts: std::result::Result<Vec<usize>, _> =
            s.split(',').map(|p| p.trim().parse::<usize>()).collect();
        let parts = parts.map_err(|_| Error::InvalidPartition(s.to_string()))?;
        Partition::new(parts).map_err(|_| Error::InvalidPartition(s.to_string()))
    }
}

impl serde::Serialize for Partition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.parts.serialize(s)
    }
}

impl<'de> serde::Deserialize<'de> for Partition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let parts = Vec::<usize>::deserialize(d)?;
        Partition::new(parts).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[usize]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    fn r(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    #[test]
    fn conjugates() {
        assert_eq!(p(&[3, 1]).conjugate(), p(&[2, 1, 1]));
        assert_eq!(Partition::empty().conjugate(), Partition::empty());
        for n in 0..=8 {
            for l in partitions_of(n) {
                assert_eq!(l.conjugate().conjugate(), l);
            }
        }
    }

    #[test]
    fn dominance_examples() {
        assert!(p(&[1, 1, 1]).dominance_leq(&p(&[2, 1])).unwrap());
        assert!(p(&[2, 2]).dominance_leq(&p(&[3, 1])).unwrap());
        assert!(!p(&[3, 1]).dominance_leq(&p(&[2, 2])).unwrap());
        assert!(!p(&[3, 3]).dominance_leq(&p(&[4, 1, 1])).unwrap());
        assert!(!p(&[4, 1, 1]).dominance_leq(&p(&[3, 3])).unwrap());
        assert!(matches!(
            p(&[2]).dominance_leq(&p(&[1])),
            Err(Error::SizeMismatch(..))
        ));
    }

    #[test]
    fn dominance_reverses_under_conjugation() {
        for n in 1..=8 {
            let ps = partitions_of(n);
            for a in &ps {
                for b in &ps {
                    assert_eq!(
                        a.dominance_leq(b).unwrap(),
                        b.conjugate().dominance_leq(&a.conjugate()).unwrap()
                    );
                }
            }
        }
    }

    #[test]
    fn arms_and_legs() {
        assert_eq!(p(&[3, 2]).arm_leg(0, 0).unwrap(), (2, 1));
        assert_eq!(p(&[1]).arm_leg(0, 0).unwrap(), (0, 0));
        assert_eq!(p(&[2, 2]).arm_leg(0, 1).unwrap(), (0, 1));
        assert!(matches!(
            p(&[2, 1]).arm_leg(1, 1),
            Err(Error::CellOutside { .. })
        ));
    }

    #[test]
    fn alpha_values() {
        assert_eq!(p(&[1]).alpha(), r("(1 - t)*(q - 1)"));
        assert_eq!(p(&[2]).alpha(), r("(q - t)*(q^2 - 1)*(1 - t)*(q - 1)"));
        assert!(Partition::empty().alpha().is_one());
    }

    #[test]
    fn b_and_d() {
        assert_eq!(p(&[2, 1]).b_stat(), r("1 + q + t"));
        assert_eq!(p(&[3]).b_stat(), r("1 + q + q^2"));
        assert_eq!(p(&[1]).d_stat(), r("-1 - (q - 1)*(1 - t)"));
        assert!(Partition::empty().b_stat().is_zero());
        assert_eq!(Partition::empty().d_stat(), r("-1"));
    }

    #[test]
    fn swap_symmetries() {
        let swap = |x: &RatFunc| {
            x.substitute(&[(Q, RatFunc::t()), (T, RatFunc::q())])
                .unwrap()
        };
        for n in 0..=6 {
            for l in partitions_of(n) {
                assert_eq!(swap(&l.alpha()), l.conjugate().alpha(), "alpha {l:?}");
                assert_eq!(swap(&l.b_stat()), l.conjugate().b_stat(), "B {l:?}");
                assert_eq!(l.b_stat().numer().len(), l.size());
            }
        }
    }

    #[test]
    fn n_and_z() {
        assert_eq!(p(&[2, 1]).n_stat(), 1);
        assert_eq!(p(&[1, 1, 1]).n_stat(), 3);
        assert_eq!(p(&[3]).conjugate().n_stat(), 3);
        assert_eq!(p(&[2, 1]).z_stat(), BigRat::from_integer(2.into()));
        assert_eq!(p(&[1, 1, 1]).z_stat(), BigRat::from_integer(6.into()));
        assert!(Partition::empty().z_stat().is_one());
    }

    #[test]
    fn enumeration() {
        assert_eq!(partitions_of(0), vec![Partition::empty()]);
        assert_eq!(partitions_of(4).len(), 5);
        assert_eq!(partitions_of(6).len(), 11);
        assert_eq!(partitions_of(3), vec![p(&[3]), p(&[2, 1]), p(&[1, 1, 1])]);
        let ps = partitions_up_to(5);
        assert!(ps.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn text_form() {
        assert_eq!(p(&[3, 1, 1]).to_string(), "3,1,1");
        assert_eq!(Partition::empty().to_string(), "");
        assert_eq!("0".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("".parse::<Partition>().unwrap(), Partition::empty());
        assert_eq!("3,1,1".parse::<Partition>().unwrap(), p(&[3, 1, 1]));
        assert!("1,3".parse::<Partition>().is_err());
        assert!("a".parse::<Partition>().is_err());
    }
}

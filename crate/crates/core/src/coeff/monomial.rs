use std::cmp::Ordering;
use std::fmt;

use smallvec::SmallVec;

use super::registry::{self, Var};

/// Laurent monomial in the registered variables.
///
/// Stored as a dense exponent vector with trailing zeros trimmed, so values
/// created before later registrations compare equal to padded ones.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Monomial(SmallVec<[i32; 4]>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(SmallVec::new())
    }

    pub fn var(v: Var, exp: i32) -> Self {
        let mut m = Monomial(SmallVec::from_elem(0, v + 1));
        m.0[v] = exp;
        m.trim();
        m
    }

    pub fn from_exps(exps: &[i32]) -> Self {
        let mut m = Monomial(SmallVec::from_slice(exps));
        m.trim();
        m
    }

    fn trim(&mut self) {
        while self.0.last() == Some(&0) {
            self.0.pop();
        }
    }

    pub fn exps(&self) -> &[i32] {
        &self.0
    }

    pub fn exp(&self, v: Var) -> i32 {
        self.0.get(v).copied().unwrap_or(0)
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().map(|&e| e as i64).sum()
    }

    /// Degree counted over the variables flagged in `mask` only.
    pub fn masked_degree(&self, mask: &[bool]) -> i64 {
        self.0
            .iter()
            .zip(mask)
            .filter(|(_, &m)| m)
            .map(|(&e, _)| e as i64)
            .sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut out: SmallVec<[i32; 4]> = SmallVec::with_capacity(n);
        for i in 0..n {
            out.push(self.exp(i) + other.exp(i));
        }
        let mut m = Monomial(out);
        m.trim();
        m
    }

    pub fn div(&self, other: &Monomial) -> Monomial {
        self.mul(&other.inv())
    }

    pub fn inv(&self) -> Monomial {
        Monomial(self.0.iter().map(|e| -e).collect())
    }

    pub fn pow(&self, n: i32) -> Monomial {
        let mut m = Monomial(self.0.iter().map(|e| e * n).collect());
        m.trim();
        m
    }

    /// Componentwise minimum.
    pub fn gcd_exps(&self, other: &Monomial) -> Monomial {
        let n = self.0.len().max(other.0.len());
        let mut m = Monomial((0..n).map(|i| self.exp(i).min(other.exp(i))).collect());
        m.trim();
        m
    }

    pub fn has_negative(&self) -> bool {
        self.0.iter().any(|&e| e < 0)
    }

    pub fn vars(&self) -> impl Iterator<Item = (Var, i32)> + '_ {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e != 0)
            .map(|(v, &e)| (v, e))
    }
}

/// Graded lexicographic order: total degree first, then lexicographic with
/// `q > t > ...` (larger exponent in an earlier variable is larger).
impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            let n = self.0.len().max(other.0.len());
            for i in 0..n {
                match self.exp(i).cmp(&other.exp(i)) {
                    Ordering::Equal => continue,
                    o => return o,
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return write!(f, "1");
        }
        let mut first = true;
        for (v, e) in self.vars() {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            write!(f, "{}", registry::name(v))?;
            if e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

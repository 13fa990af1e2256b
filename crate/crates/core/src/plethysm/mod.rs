//! The λ-ring action: alphabet expressions, plethystic substitution and
//! the plethystic exponential and logarithm on truncated series.

mod series;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::coeff::RatFunc;
use crate::error::{Error, Result};
use crate::partition::Partition;
use crate::symfun::{natural_alphabet_cmp, MultiSymFunc, PTuple, SymFunc};

pub use series::{pexp, pexp_series, plog, reproducing_pair, GradedSeries, Grading};

/// An alphabet symbol carrying the Adams index it has been hit with:
/// `(X, n)` stands for `p_n[X]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub adams: usize,
}

impl Ord for Symbol {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        natural_alphabet_cmp(&self.name, &other.name).then(self.adams.cmp(&other.adams))
    }
}

impl PartialOrd for Symbol {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Formal sum `Σ c_S · S` where `S` is a multiset of at most two symbols
/// and `c_S` a rational function in the coefficient variables.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct AlphabetExpr {
    terms: BTreeMap<Vec<Symbol>, RatFunc>,
}

impl AlphabetExpr {
    pub const MAX_DEPTH: usize = 2;

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: RatFunc) -> Self {
        let mut a = Self::zero();
        a.add_term(Vec::new(), c);
        a
    }

    pub fn symbol(name: &str) -> Self {
        let mut a = Self::zero();
        a.add_term(
            vec![Symbol {
                name: name.to_string(),
                adams: 1,
            }],
            RatFunc::one(),
        );
        a
    }

    fn add_term(&mut self, key: Vec<Symbol>, c: RatFunc) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&key) {
            Some(e) => {
                *e = &*e + &c;
                if e.is_zero() {
                    self.terms.remove(&key);
                }
            }
            None => {
                self.terms.insert(key, c);
            }
        }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<Symbol>, RatFunc> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value when no symbol occurs.
    pub fn as_scalar(&self) -> Option<RatFunc> {
        match self.terms.len() {
            0 => Some(RatFunc::zero()),
            1 => self.terms.get(&Vec::new()).cloned(),
            _ => None,
        }
    }

    /// Sorted, deduplicated alphabet names.
    pub fn alphabets(&self) -> Vec<String> {
        let mut names: Vec<String> = self
            .terms
            .keys()
            .flatten()
            .map(|s| s.name.clone())
            .collect();
        names.sort_by(|a, b| natural_alphabet_cmp(a, b));
        names.dedup();
        names
    }

    pub fn scale(&self, c: &RatFunc) -> AlphabetExpr {
        let mut out = Self::zero();
        for (k, x) in &self.terms {
            out.add_term(k.clone(), x * c);
        }
        out
    }

    pub fn div_scalar(&self, c: &RatFunc) -> Result<AlphabetExpr> {
        Ok(self.scale(&c.recip()?))
    }

    /// Product of alphabets; multisets deeper than [`Self::MAX_DEPTH`]
    /// are rejected.
    pub fn try_mul(&self, other: &AlphabetExpr) -> Result<AlphabetExpr> {
        let mut out = Self::zero();
        for (ka, ca) in &self.terms {
            for (kb, cb) in &other.terms {
                if ka.len() + kb.len() > Self::MAX_DEPTH {
                    return Err(Error::UnsupportedDepth);
                }
                let mut k: Vec<Symbol> = ka.iter().chain(kb).cloned().collect();
                k.sort();
                out.add_term(k, ca * cb);
            }
        }
        Ok(out)
    }

    /// `p_n[A]`: Frobenius on coefficients, Adams tags multiplied by `n`.
    pub fn pleth_pn(&self, n: usize) -> AlphabetExpr {
        assert!(n >= 1, "Adams index must be positive");
        let mut out = Self::zero();
        for (k, c) in &self.terms {
            let key = k
                .iter()
                .map(|s| Symbol {
                    name: s.name.clone(),
                    adams: s.adams * n,
                })
                .collect();
            out.add_term(key, c.frobenius(n as u32));
        }
        out
    }

    /// `A` itself as an element of the symmetric algebra of its alphabets.
    pub fn to_element(&self) -> MultiSymFunc {
        let names = self.alphabets();
        let mut out = MultiSymFunc::zero(names.clone());
        for (k, c) in &self.terms {
            out.add_term(symbol_key(&names, k, 1), c.clone());
        }
        out
    }

    /// Reads an element back as an alphabet expression: each `p_n[X]`
    /// factor becomes the symbol `X` with Adams tag `n`.
    pub fn from_element(m: &MultiSymFunc) -> Result<AlphabetExpr> {
        let mut out = Self::zero();
        for (k, c) in m.terms() {
            let mut key = Vec::new();
            for (name, l) in m.alphabets().iter().zip(&k.0) {
                key.extend(l.parts().iter().map(|&n| Symbol {
                    name: name.clone(),
                    adams: n,
                }));
            }
            if key.len() > Self::MAX_DEPTH {
                return Err(Error::UnsupportedDepth);
            }
            key.sort();
            out.add_term(key, c.clone());
        }
        Ok(out)
    }
}

/// Key of `∏_{s∈S} p_{n·adams(s)}[s]` over the alphabet list `names`.
fn symbol_key(names: &[String], syms: &[Symbol], n: usize) -> PTuple {
    let mut slots: Vec<Vec<usize>> = vec![Vec::new(); names.len()];
    for s in syms {
        let i = names
            .iter()
            .position(|a| *a == s.name)
            .expect("known alphabet");
        slots[i].push(s.adams * n);
    }
    PTuple(slots.into_iter().map(Partition::from_unsorted).collect())
}

impl From<RatFunc> for AlphabetExpr {
    fn from(c: RatFunc) -> Self {
        AlphabetExpr::constant(c)
    }
}

impl Add for &AlphabetExpr {
    type Output = AlphabetExpr;
    fn add(self, rhs: &AlphabetExpr) -> AlphabetExpr {
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &AlphabetExpr {
    type Output = AlphabetExpr;
    fn sub(self, rhs: &AlphabetExpr) -> AlphabetExpr {
        self + &(-rhs)
    }
}

impl Neg for &AlphabetExpr {
    type Output = AlphabetExpr;
    fn neg(self) -> AlphabetExpr {
        self.scale(&RatFunc::from_int(-1))
    }
}

impl fmt::Display for AlphabetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let atoms = self.terms.iter().map(|(k, c)| {
            let atom: Vec<String> = k
                .iter()
                .map(|s| match s.adams {
                    1 => s.name.clone(),
                    n => format!("p[{n}][{}]", s.name),
                })
                .collect();
            (atom.join("*"), c)
        });
        f.write_str(&crate::symfun::format_linear(atoms))
    }
}

impl fmt::Debug for AlphabetExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `p_n[A]` as an element over the alphabets of `A`.
fn pn_image(a: &AlphabetExpr, names: &[String], n: usize) -> MultiSymFunc {
    let mut out = MultiSymFunc::zero(names.to_vec());
    for (k, c) in &a.terms {
        out.add_term(symbol_key(names, k, n), c.frobenius(n as u32));
    }
    out
}

/// `F[A]`, expressed in the power sums of the alphabets of `A`.
pub fn pleth(f: &SymFunc, a: &AlphabetExpr) -> MultiSymFunc {
    let names = a.alphabets();
    let mut out = MultiSymFunc::zero(names.clone());
    if a.terms.len() == 1 {
        // A = c·S: p_λ[cS] = ∏ frobenius(c, λ_i) · p_λ[S]
        let (syms, c) = a.terms.iter().next().expect("one term");
        for (l, d) in f.terms() {
            let mut coeff = d.clone();
            let mut key = PTuple::empty(names.len());
            for &i in l.parts() {
                coeff = &coeff * &c.frobenius(i as u32);
                key = key.union(&symbol_key(&names, syms, i));
            }
            out.add_term(key, coeff);
        }
        return out;
    }
    let mut images: HashMap<usize, MultiSymFunc> = HashMap::new();
    let mut products: HashMap<Partition, MultiSymFunc> = HashMap::new();
    products.insert(
        Partition::empty(),
        MultiSymFunc::constant(names.clone(), RatFunc::one()),
    );
    for (l, d) in f.terms() {
        let img = product_image(l, a, &names, &mut images, &mut products);
        out = &out + &img.scale(d);
    }
    out
}

fn product_image(
    l: &Partition,
    a: &AlphabetExpr,
    names: &[String],
    images: &mut HashMap<usize, MultiSymFunc>,
    products: &mut HashMap<Partition, MultiSymFunc>,
) -> MultiSymFunc {
    if let Some(m) = products.get(l) {
        return m.clone();
    }
    let parts = l.parts();
    let last = parts[parts.len() - 1];
    let rest = Partition::from_unsorted(parts[..parts.len() - 1].to_vec());
    let head = product_image(&rest, a, names, images, products);
    let img = images
        .entry(last)
        .or_insert_with(|| pn_image(a, names, last))
        .clone();
    let m = &head * &img;
    products.insert(l.clone(), m.clone());
    m
}

/// `F[A]` when `A` has no alphabet symbols.
pub fn pleth_scalar(f: &SymFunc, a: &RatFunc) -> RatFunc {
    let mut acc = RatFunc::zero();
    let mut frob: HashMap<usize, RatFunc> = HashMap::new();
    for (l, d) in f.terms() {
        let mut c = d.clone();
        for &i in l.parts() {
            let x = frob.entry(i).or_insert_with(|| a.frobenius(i as u32));
            c = &c * x;
        }
        acc = &acc + &c;
    }
    acc
}

/// Substitutes the alphabet `slot` of `m` by `A`.
pub fn pleth_slot(m: &MultiSymFunc, slot: usize, a: &AlphabetExpr) -> MultiSymFunc {
    let mut rest_names = m.alphabets().to_vec();
    rest_names.remove(slot);
    let mut by_rest: BTreeMap<Partition, MultiSymFunc> = BTreeMap::new();
    for (k, c) in m.terms() {
        let mut rest = k.0.clone();
        let l = rest.remove(slot);
        by_rest
            .entry(l)
            .or_insert_with(|| MultiSymFunc::zero(rest_names.clone()))
            .add_term(PTuple(rest), c.clone());
    }
    let mut out = MultiSymFunc::zero(rest_names.clone());
    for (l, rest) in by_rest {
        let img = pleth(&SymFunc::p(l), a);
        out = &out + &(&rest * &img);
    }
    out
}

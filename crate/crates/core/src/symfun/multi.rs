use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde_json::json;

use super::{basis_atom, format_linear, Basis, SymFunc};
use crate::coeff::RatFunc;
use crate::error::{Error, Result};
use crate::partition::Partition;

/// One partition per alphabet: the multi-index of `p_{λ1}[X1] ⋯ p_{λk}[Xk]`.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct PTuple(pub Vec<Partition>);

impl PTuple {
    pub fn empty(k: usize) -> Self {
        PTuple(vec![Partition::empty(); k])
    }

    pub fn total_size(&self) -> usize {
        self.0.iter().map(Partition::size).sum()
    }

    pub fn union(&self, other: &PTuple) -> PTuple {
        debug_assert_eq!(self.0.len(), other.0.len());
        PTuple(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.union(b))
                .collect(),
        )
    }

    pub fn scaled(&self, n: usize) -> PTuple {
        PTuple(self.0.iter().map(|p| p.scaled(n)).collect())
    }

    pub fn is_empty(&self) -> bool {
        self.0.iter().all(Partition::is_empty)
    }

    pub fn is_diagonal(&self) -> bool {
        self.0.windows(2).all(|w| w[0].size() == w[1].size())
    }
}

/// Graded by total size, then slot by slot.
impl Ord for PTuple {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_size()
            .cmp(&other.total_size())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for PTuple {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for PTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.0).finish()
    }
}

/// Orders alphabet names as `X < X1 < X2 < X10 < Y`.
pub fn natural_alphabet_cmp(a: &str, b: &str) -> Ordering {
    fn split(s: &str) -> (&str, Option<u64>) {
        let i = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
        (&s[..i], s[i..].parse().ok())
    }
    split(a).cmp(&split(b)).then_with(|| a.cmp(b))
}

/// Element of `Sym[X1,…,Xk] ⊗ Q(q,t)` in the power-sum basis of each
/// alphabet. With `k = 0` it is a plain rational function.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiSymFunc {
    alphabets: Vec<String>,
    terms: BTreeMap<PTuple, RatFunc>,
}

impl MultiSymFunc {
    pub fn zero(alphabets: Vec<String>) -> Self {
        MultiSymFunc {
            alphabets,
            terms: BTreeMap::new(),
        }
    }

    pub fn scalar(c: RatFunc) -> Self {
        Self::constant(Vec::new(), c)
    }

    pub fn constant(alphabets: Vec<String>, c: RatFunc) -> Self {
        let k = alphabets.len();
        let mut m = Self::zero(alphabets);
        m.add_term(PTuple::empty(k), c);
        m
    }

    /// Default names `X1, …, Xk`.
    pub fn default_alphabets(k: usize) -> Vec<String> {
        (1..=k).map(|i| format!("X{i}")).collect()
    }

    /// The element `p_1[name]`, i.e. the alphabet itself.
    pub fn symbol(name: &str) -> Self {
        let mut m = Self::zero(vec![name.to_string()]);
        m.add_term(PTuple(vec![Partition::row(1)]), RatFunc::one());
        m
    }

    pub fn from_sym(f: &SymFunc, name: &str) -> Self {
        MultiSymFunc {
            alphabets: vec![name.to_string()],
            terms: f
                .terms()
                .iter()
                .map(|(l, c)| (PTuple(vec![l.clone()]), c.clone()))
                .collect(),
        }
    }

    /// `F1[X1] ⋯ Fk[Xk]`.
    pub fn tensor(alphabets: &[String], factors: &[SymFunc]) -> Result<Self> {
        if alphabets.len() != factors.len() {
            return Err(Error::AlphabetMismatch(format!(
                "{} alphabets for {} factors",
                alphabets.len(),
                factors.len()
            )));
        }
        let mut acc: Vec<(Vec<Partition>, RatFunc)> = vec![(Vec::new(), RatFunc::one())];
        for f in factors {
            let mut next = Vec::with_capacity(acc.len() * f.terms().len());
            for (key, c) in &acc {
                for (l, d) in f.terms() {
                    let mut k = key.clone();
                    k.push(l.clone());
                    next.push((k, c * d));
                }
            }
            acc = next;
        }
        let mut out = Self::zero(alphabets.to_vec());
        for (k, c) in acc {
            out.add_term(PTuple(k), c);
        }
        Ok(out)
    }

    pub fn alphabets(&self) -> &[String] {
        &self.alphabets
    }

    pub fn k(&self) -> usize {
        self.alphabets.len()
    }

    pub fn terms(&self) -> &BTreeMap<PTuple, RatFunc> {
        &self.terms
    }

    pub fn into_terms(self) -> BTreeMap<PTuple, RatFunc> {
        self.terms
    }

    pub fn coeff(&self, key: &PTuple) -> RatFunc {
        self.terms.get(key).cloned().unwrap_or_else(RatFunc::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_term(&mut self, key: PTuple, c: RatFunc) {
        debug_assert_eq!(key.0.len(), self.alphabets.len());
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

    /// Coefficient of the empty tuple.
    pub fn constant_term(&self) -> RatFunc {
        self.coeff(&PTuple::empty(self.k()))
    }

    /// The value as a rational function when no alphabet occurs.
    pub fn as_scalar(&self) -> Option<RatFunc> {
        if self.terms.keys().all(PTuple::is_empty) {
            Some(self.constant_term())
        } else {
            None
        }
    }

    /// Single-alphabet view; also accepts scalars.
    pub fn to_sym(&self) -> Option<SymFunc> {
        match self.k() {
            0 => Some(SymFunc::constant(self.constant_term())),
            1 => Some(SymFunc::from_terms(
                self.terms.iter().map(|(k, c)| (k.0[0].clone(), c.clone())),
            )),
            _ => {
                let s = self.drop_unused();
                (s.k() <= 1).then(|| s.to_sym()).flatten()
            }
        }
    }

    /// Removes alphabets that do not occur in any term.
    pub fn drop_unused(&self) -> MultiSymFunc {
        let used: Vec<usize> = (0..self.k())
            .filter(|&i| self.terms.keys().any(|k| !k.0[i].is_empty()))
            .collect();
        if used.len() == self.k() {
            return self.clone();
        }
        MultiSymFunc {
            alphabets: used.iter().map(|&i| self.alphabets[i].clone()).collect(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    (
                        PTuple(used.iter().map(|&i| k.0[i].clone()).collect()),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    /// Re-expresses `self` over `target`, which must contain every
    /// alphabet of `self`.
    pub fn embed(&self, target: &[String]) -> Result<MultiSymFunc> {
        if self.alphabets == target {
            return Ok(self.clone());
        }
        let mut pos = Vec::with_capacity(self.k());
        for a in &self.alphabets {
            let i = target
                .iter()
                .position(|b| b == a)
                .ok_or_else(|| Error::AlphabetMismatch(format!("{a} not among {target:?}")))?;
            pos.push(i);
        }
        let k = target.len();
        Ok(MultiSymFunc {
            alphabets: target.to_vec(),
            terms: self
                .terms
                .iter()
                .map(|(key, c)| {
                    let mut t = PTuple::empty(k);
                    for (j, &i) in pos.iter().enumerate() {
                        t.0[i] = key.0[j].clone();
                    }
                    (t, c.clone())
                })
                .collect(),
        })
    }

    /// Sorted union of the two alphabet lists.
    pub fn union_alphabets(a: &[String], b: &[String]) -> Vec<String> {
        if a == b {
            return a.to_vec();
        }
        let mut all: Vec<String> = a.iter().chain(b).cloned().collect();
        all.sort_by(|x, y| natural_alphabet_cmp(x, y));
        all.dedup();
        all
    }

    fn aligned(&self, other: &MultiSymFunc) -> (MultiSymFunc, MultiSymFunc) {
        if self.alphabets == other.alphabets {
            return (self.clone(), other.clone());
        }
        let names = Self::union_alphabets(&self.alphabets, &other.alphabets);
        (
            self.embed(&names).expect("union contains all"),
            other.embed(&names).expect("union contains all"),
        )
    }

    pub fn scale(&self, c: &RatFunc) -> MultiSymFunc {
        if c.is_zero() {
            return Self::zero(self.alphabets.clone());
        }
        MultiSymFunc {
            alphabets: self.alphabets.clone(),
            terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect(),
        }
    }

    /// Adams operation `p_n[·]` on the whole element.
    pub fn adams(&self, n: usize) -> MultiSymFunc {
        MultiSymFunc {
            alphabets: self.alphabets.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| (k.scaled(n), c.frobenius(n as u32)))
                .collect(),
        }
    }

    pub fn filter<F: Fn(&PTuple) -> bool>(&self, keep: F) -> MultiSymFunc {
        MultiSymFunc {
            alphabets: self.alphabets.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(k, _)| keep(k))
                .map(|(k, c)| (k.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn map_coeffs<F: Fn(&RatFunc) -> Result<RatFunc>>(&self, f: F) -> Result<MultiSymFunc> {
        let mut out = Self::zero(self.alphabets.clone());
        for (k, c) in &self.terms {
            out.add_term(k.clone(), f(c)?);
        }
        Ok(out)
    }

    /// Product, keeping only terms whose key passes `keep`.
    pub fn mul_filtered<F>(&self, other: &MultiSymFunc, keep: F) -> MultiSymFunc
    where
        F: Fn(&PTuple) -> bool + Sync,
    {
        let (a, b) = self.aligned(other);
        let rows: Vec<(&PTuple, &RatFunc)> = a.terms.iter().collect();
        // products are formed in parallel per left term; the reduction
        // below walks them in a fixed order
        let partials: Vec<Vec<(PTuple, RatFunc)>> = rows
            .par_iter()
            .map(|(ka, ca)| {
                b.terms
                    .iter()
                    .filter_map(|(kb, cb)| {
                        let k = ka.union(kb);
                        keep(&k).then(|| (k, *ca * cb))
                    })
                    .collect()
            })
            .collect();
        let mut acc: HashMap<PTuple, RatFunc> = HashMap::new();
        for (k, c) in partials.into_iter().flatten() {
            match acc.get_mut(&k) {
                Some(e) => *e = &*e + &c,
                None => {
                    acc.insert(k, c);
                }
            }
        }
        MultiSymFunc {
            alphabets: a.alphabets,
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Hall pairing against `f` in alphabet slot `slot`, removing that slot.
    pub fn pair_slot(&self, slot: usize, f: &SymFunc) -> MultiSymFunc {
        let mut names = self.alphabets.clone();
        names.remove(slot);
        let mut out = Self::zero(names);
        for (k, c) in &self.terms {
            let l = &k.0[slot];
            let d = f.coeff(l);
            if d.is_zero() {
                continue;
            }
            let mut rest = k.0.clone();
            rest.remove(slot);
            out.add_term(PTuple(rest), (c * &d).scale(&l.z_stat()));
        }
        out
    }

    /// Slot-wise Hall pairing against `f1[X1] ⋯ fk[Xk]`.
    pub fn pair_all(&self, fs: &[SymFunc]) -> Result<RatFunc> {
        if fs.len() != self.k() {
            return Err(Error::AlphabetMismatch(format!(
                "{} arguments for {} alphabets",
                fs.len(),
                self.k()
            )));
        }
        let mut acc = RatFunc::zero();
        'terms: for (key, c) in &self.terms {
            let mut prod = c.clone();
            for (l, f) in key.0.iter().zip(fs) {
                let d = f.coeff(l);
                if d.is_zero() {
                    continue 'terms;
                }
                prod = (&prod * &d).scale(&l.z_stat());
            }
            acc = &acc + &prod;
        }
        Ok(acc)
    }

    /// Swaps the alphabet contents according to `perm` (slot i gets the
    /// contents of slot perm[i]).
    pub fn permute_slots(&self, perm: &[usize]) -> MultiSymFunc {
        MultiSymFunc {
            alphabets: self.alphabets.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| {
                    (
                        PTuple(perm.iter().map(|&i| k.0[i].clone()).collect()),
                        c.clone(),
                    )
                })
                .collect(),
        }
    }

    pub fn to_json(&self, order: Option<usize>) -> serde_json::Value {
        let terms: Vec<_> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let idx: Vec<&[usize]> = k.0.iter().map(Partition::parts).collect();
                json!({"index": idx, "coeff": c.to_string()})
            })
            .collect();
        let mut v = json!({"k": self.k(), "terms": terms});
        if let Some(n) = order {
            v["N"] = json!(n);
        }
        if self.alphabets != Self::default_alphabets(self.k()) {
            v["alphabets"] = json!(self.alphabets);
        }
        v
    }

    pub fn from_json(v: &serde_json::Value) -> Result<MultiSymFunc> {
        let bad = |m: &str| Error::Parse {
            input: v.to_string(),
            message: m.to_string(),
        };
        let k = v["k"].as_u64().ok_or_else(|| bad("missing k"))? as usize;
        let names = match v.get("alphabets") {
            Some(a) => serde_json::from_value(a.clone()).map_err(|e| bad(&e.to_string()))?,
            None => Self::default_alphabets(k),
        };
        let mut out = Self::zero(names);
        for t in v["terms"].as_array().ok_or_else(|| bad("missing terms"))? {
            let idx: Vec<Partition> =
                serde_json::from_value(t["index"].clone()).map_err(|e| bad(&e.to_string()))?;
            if idx.len() != k {
                return Err(bad("index length differs from k"));
            }
            let c = RatFunc::parse(t["coeff"].as_str().ok_or_else(|| bad("missing coeff"))?)?;
            out.add_term(PTuple(idx), c);
        }
        Ok(out)
    }

    fn term_atom(&self, key: &PTuple) -> String {
        let factors: Vec<String> = key
            .0
            .iter()
            .zip(&self.alphabets)
            .filter(|(l, _)| !l.is_empty())
            .map(|(l, a)| format!("{}[{a}]", basis_atom(Basis::P, l)))
            .collect();
        factors.join("*")
    }
}

/// `c*p[2,1][X1]*p[1][X2] + …`; scalars print as the rational function.
impl fmt::Display for MultiSymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(c) = self.as_scalar() {
            return write!(f, "{c}");
        }
        f.write_str(&format_linear(
            self.terms.iter().map(|(k, c)| (self.term_atom(k), c)),
        ))
    }
}

impl fmt::Debug for MultiSymFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}: {}", self.alphabets, self)
    }
}

impl Add for &MultiSymFunc {
    type Output = MultiSymFunc;
    fn add(self, rhs: &MultiSymFunc) -> MultiSymFunc {
        let (mut a, b) = self.aligned(rhs);
        for (k, c) in b.terms {
            a.add_term(k, c);
        }
        a
    }
}

impl Add for MultiSymFunc {
    type Output = MultiSymFunc;
    fn add(self, rhs: MultiSymFunc) -> MultiSymFunc {
        &self + &rhs
    }
}

impl Sub for &MultiSymFunc {
    type Output = MultiSymFunc;
    fn sub(self, rhs: &MultiSymFunc) -> MultiSymFunc {
        self + &(-rhs)
    }
}

impl Neg for &MultiSymFunc {
    type Output = MultiSymFunc;
    fn neg(self) -> MultiSymFunc {
        MultiSymFunc {
            alphabets: self.alphabets.clone(),
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl Mul for &MultiSymFunc {
    type Output = MultiSymFunc;
    fn mul(self, rhs: &MultiSymFunc) -> MultiSymFunc {
        self.mul_filtered(rhs, |_| true)
    }
}

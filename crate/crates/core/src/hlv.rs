//! The kernel `Ω[X1,…,Xk] = Σ_λ H_λ[X1]⋯H_λ[Xk]/α_λ`, the series `ℍ`
//! with `Ω = pExp[ℍ/Q]`, its scalar-product evaluations and checkers.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use rayon::prelude::*;

use crate::coeff::RatFunc;
use crate::error::{Error, Result};
use crate::macdonald;
use crate::partition::{partitions_up_to, Partition};
use crate::plethysm::{pleth, pleth_slot, AlphabetExpr, GradedSeries, Grading};
use crate::symfun::{Basis, MultiSymFunc, PTuple, SymFunc};

/// Largest supported number of alphabets.
pub const MAX_K: usize = 8;

fn check_k(k: usize) -> Result<()> {
    if k == 0 || k > MAX_K {
        return Err(Error::Precondition(format!(
            "number of alphabets must be between 1 and {MAX_K}, got {k}"
        )));
    }
    Ok(())
}

/// Per-slot plethystic arguments for [`omega`]; `None` keeps `X_i`.
#[derive(Clone, Debug, Default)]
pub struct SlotSubstitution {
    slots: Vec<Option<AlphabetExpr>>,
}

impl SlotSubstitution {
    pub fn identity(k: usize) -> Self {
        SlotSubstitution {
            slots: vec![None; k],
        }
    }

    pub fn with(mut self, slot: usize, a: AlphabetExpr) -> Self {
        self.slots[slot] = Some(a);
        self
    }

    pub fn k(&self) -> usize {
        self.slots.len()
    }

    fn image(&self, slot: usize, h: &SymFunc) -> MultiSymFunc {
        match &self.slots[slot] {
            None => MultiSymFunc::from_sym(h, &format!("X{}", slot + 1)),
            Some(a) => pleth(h, a),
        }
    }

    pub fn is_identity(&self) -> bool {
        self.slots.iter().all(Option::is_none)
    }
}

/// `Σ_{|λ| ≤ n} ∏_i H_λ[sub_i] / α_λ`.
pub fn omega(n: usize, sub: &SlotSubstitution) -> Result<MultiSymFunc> {
    check_k(sub.k())?;
    let lambdas = partitions_up_to(n);
    for d in 0..=n {
        macdonald::block(d)?;
    }
    let names = MultiSymFunc::default_alphabets(sub.k());
    let summands: Vec<MultiSymFunc> = lambdas
        .par_iter()
        .map(|l| -> Result<MultiSymFunc> {
            let h = macdonald::macdonald_h(l)?;
            let inv_alpha = l.alpha().recip()?;
            if sub.is_identity() {
                let factors = vec![h; sub.k()];
                return Ok(MultiSymFunc::tensor(&names, &factors)?.scale(&inv_alpha));
            }
            let mut acc = MultiSymFunc::scalar(inv_alpha);
            for i in 0..sub.k() {
                acc = &acc * &sub.image(i, &h);
            }
            Ok(acc)
        })
        .collect::<Result<_>>()?;
    let mut out = MultiSymFunc::zero(Vec::new());
    for s in &summands {
        out = &out + s;
    }
    Ok(out)
}

fn grading(m: &MultiSymFunc) -> Grading {
    Grading::Alphabet(m.alphabets().first().cloned().unwrap_or_default())
}

/// `Q · pLog[Ω]` graded by the first alphabet and truncated after `n`.
pub fn hh_from_omega(omega: &MultiSymFunc, n: usize) -> Result<MultiSymFunc> {
    let s = GradedSeries::from_element(omega, n, grading(omega))?;
    Ok(s.plog()?.to_element().scale(&RatFunc::big_q()))
}

/// `k -> (order, ℍ_k)`
type HhCache = RwLock<HashMap<usize, (usize, Arc<MultiSymFunc>)>>;

static HH_CACHE: LazyLock<HhCache> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// `ℍ[X1,…,Xk]` up to diagonal degree `n`.
pub fn hh(k: usize, n: usize) -> Result<Arc<MultiSymFunc>> {
    check_k(k)?;
    if let Some((m, v)) = HH_CACHE.read().expect("hh cache poisoned").get(&k) {
        if *m == n {
            return Ok(v.clone());
        }
        if *m > n {
            return Ok(Arc::new(v.filter(|key| key.0[0].size() <= n)));
        }
    }
    let om = omega(n, &SlotSubstitution::identity(k))?;
    let v = Arc::new(hh_from_omega(&om, n)?);
    let mut cache = HH_CACHE.write().expect("hh cache poisoned");
    let keep = cache.get(&k).is_none_or(|(m, _)| *m < n);
    if keep {
        cache.insert(k, (n, v.clone()));
    }
    Ok(v)
}

/// Value of `ℍ(F_1,…,F_k)` with a note when the arguments' degrees differ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pairing {
    pub value: RatFunc,
    pub warning: Option<String>,
}

fn degrees(f: &SymFunc) -> Vec<usize> {
    let mut d: Vec<usize> = f.terms().keys().map(Partition::size).collect();
    d.dedup();
    d.sort_unstable();
    d.dedup();
    d
}

/// `(ℍ[X1,…,Xk], F_1[X1]⋯F_k[Xk])`, slot-wise Hall pairing.
pub fn hh_pair(args: &[SymFunc], n: usize) -> Result<Pairing> {
    let k = args.len();
    check_k(k)?;
    let degs: Vec<Vec<usize>> = args.iter().map(degrees).collect();
    let mut common: Vec<usize> = degs[0].clone();
    for d in &degs[1..] {
        common.retain(|x| d.contains(x));
    }
    common.retain(|&d| d > 0);
    let warning = (degs.iter().any(|d| *d != degs[0]))
        .then(|| format!("arguments have different degrees {degs:?}; mismatched parts pair to 0"));
    let top = common.iter().copied().max().unwrap_or(0);
    if top > n {
        return Err(Error::Precondition(format!(
            "pairing needs degree {top} but the truncation order is {n}"
        )));
    }
    if common.is_empty() {
        return Ok(Pairing {
            value: RatFunc::zero(),
            warning,
        });
    }
    let h = hh(k, top)?;
    let mut value = RatFunc::zero();
    for d in common {
        let comps: Vec<SymFunc> = args.iter().map(|f| f.component(d)).collect();
        let part = h.filter(|key| key.0[0].size() == d);
        value = &value + &part.pair_all(&comps)?;
    }
    Ok(Pairing { value, warning })
}

fn hh_value(args: &[SymFunc]) -> Result<RatFunc> {
    let n = args.iter().filter_map(SymFunc::degree).max().unwrap_or(0);
    Ok(hh_pair(args, n.max(1))?.value)
}

/// `ℍ[X1,…,Xk,1] = ℍ[X1,…,Xk]`, checked through `Ω` with the last slot
/// set to 1 and by substituting 1 into `ℍ_{k+1}` directly.
pub fn check_stability(k: usize, n: usize) -> Result<bool> {
    if k < 2 {
        return Err(Error::Precondition(format!(
            "stability needs k >= 2, got {k}"
        )));
    }
    check_k(k + 1)?;
    let target = hh(k, n)?;
    let one = AlphabetExpr::constant(RatFunc::one());
    let sub = SlotSubstitution::identity(k + 1).with(k, one.clone());
    let via_omega = hh_from_omega(&omega(n, &sub)?, n)?;
    let via_hh = pleth_slot(&*hh(k + 1, n)?, k, &one);
    Ok(via_omega == *target && via_hh == *target)
}

/// Coefficients of `ℍ` that fail to be polynomials, plus the result of
/// re-exponentiating `ℍ` back to `Ω`.
#[derive(Clone, Debug)]
pub struct PolynomialityReport {
    pub k: usize,
    pub order: usize,
    pub terms: Vec<(PTuple, RatFunc)>,
    pub violations: Vec<(PTuple, RatFunc)>,
    pub round_trip: bool,
}

impl PolynomialityReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.round_trip
    }
}

pub fn check_polynomiality(k: usize, n: usize) -> Result<PolynomialityReport> {
    let h = hh(k, n)?;
    let terms: Vec<(PTuple, RatFunc)> = h
        .terms()
        .iter()
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect();
    let violations = terms
        .iter()
        .filter(|(_, c)| !c.is_polynomial())
        .cloned()
        .collect();
    let om = omega(n, &SlotSubstitution::identity(k))?;
    let scaled = h.scale(&RatFunc::big_q().recip()?);
    let back = GradedSeries::from_element(&scaled, n, grading(&om))?
        .pexp()?
        .to_element();
    Ok(PolynomialityReport {
        k,
        order: n,
        terms,
        violations,
        round_trip: back == om,
    })
}

fn hb(parts: Vec<usize>) -> SymFunc {
    let parts: Vec<usize> = parts.into_iter().filter(|&x| x > 0).collect();
    SymFunc::from_basis(Basis::H, &Partition::from_unsorted(parts)).expect("classical basis")
}

fn eb(n: usize) -> SymFunc {
    SymFunc::from_basis(Basis::E, &Partition::row(n)).expect("classical basis")
}

/// Both sides of
/// `ℍ(h_λ, h_{|λ|-μ_1}e_{μ_1}, …) = ℍ(h_{λ,|μ|-|λ|}, h_μ, e_{|μ|})`.
pub fn theorem7_sides(l: &Partition, mu: &Partition, n: usize) -> Result<(RatFunc, RatFunc)> {
    let (a, b) = (l.size(), mu.size());
    if mu.is_empty() || mu.part(0) < 1 {
        return Err(Error::Precondition("1 <= μ1 fails: μ is empty".into()));
    }
    if mu.part(0) > a {
        return Err(Error::Precondition(format!(
            "μ1 <= |λ| fails: {} > {a}",
            mu.part(0)
        )));
    }
    if a > b {
        return Err(Error::Precondition(format!("|λ| <= |μ| fails: {a} > {b}")));
    }
    if n < b {
        return Err(Error::Precondition(format!(
            "truncation {n} is below |μ| = {b}"
        )));
    }
    let mut lhs = vec![hb(l.parts().to_vec())];
    for &m in mu.parts() {
        lhs.push(&hb(vec![a - m]) * &eb(m));
    }
    let rhs = vec![
        hb(l.with_part(b - a).parts().to_vec()),
        hb(mu.parts().to_vec()),
        eb(b),
    ];
    Ok((hh_value(&lhs)?, hh_value(&rhs)?))
}

pub fn check_theorem7(l: &Partition, mu: &Partition, n: usize) -> Result<bool> {
    let (x, y) = theorem7_sides(l, mu, n)?;
    Ok(x == y)
}

/// Both sides of
/// `ℍ(h_λ, h_{n-1,1}, …, h_{n-1,1}) = ℍ(h_{λ,k-n}, h_{1^k}, e_k)`.
pub fn corollary_sides(l: &Partition, k: usize, n: usize) -> Result<(RatFunc, RatFunc)> {
    let size = l.size();
    if size < 1 {
        return Err(Error::Precondition("|λ| >= 1 fails".into()));
    }
    if k < size {
        return Err(Error::Precondition(format!("k >= |λ| fails: {k} < {size}")));
    }
    if n < k {
        return Err(Error::Precondition(format!(
            "truncation {n} is below k = {k}"
        )));
    }
    let mut lhs = vec![hb(l.parts().to_vec())];
    lhs.extend(std::iter::repeat_n(hb(vec![size - 1, 1]), k));
    let rhs = vec![
        hb(l.with_part(k - size).parts().to_vec()),
        hb(vec![1; k]),
        eb(k),
    ];
    Ok((hh_value(&lhs)?, hh_value(&rhs)?))
}

pub fn check_corollary(l: &Partition, k: usize, n: usize) -> Result<bool> {
    let (x, y) = corollary_sides(l, k, n)?;
    Ok(x == y)
}

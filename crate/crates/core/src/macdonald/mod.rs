//! Modified Macdonald polynomials `H_λ` from their triangularity
//! characterization, the `*`-scalar product and the operators
//! ∇, T, T*, V, V*, Δ_F.

mod solve;

use std::collections::{BTreeMap, HashMap};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, LazyLock, RwLock};

use crate::coeff::{registry, Monomial, RatFunc};
use crate::error::{Error, Result};
use crate::partition::{partitions_of, Partition};
use crate::plethysm::{pleth, pleth_scalar, AlphabetExpr, GradedSeries, Grading};
use crate::symfun::{Basis, SymFunc};

/// All `H_λ` of one degree, with their norms and values at `-1`.
#[derive(Debug)]
pub struct Block {
    pub n: usize,
    pub h: BTreeMap<Partition, SymFunc>,
    pub alpha: BTreeMap<Partition, RatFunc>,
    pub at_minus_one: BTreeMap<Partition, RatFunc>,
}

impl Block {
    fn from_h(n: usize, h: BTreeMap<Partition, SymFunc>) -> Block {
        let alpha = h.keys().map(|l| (l.clone(), l.alpha())).collect();
        let at_minus_one = h
            .iter()
            .map(|(l, f)| (l.clone(), pleth_scalar(f, &RatFunc::from_int(-1))))
            .collect();
        Block {
            n,
            h,
            alpha,
            at_minus_one,
        }
    }

    /// `H_λ` in the monomial basis.
    pub fn in_m_basis(&self) -> Result<BTreeMap<Partition, BTreeMap<Partition, RatFunc>>> {
        self.h
            .iter()
            .map(|(l, f)| Ok((l.clone(), f.to_basis(Basis::M)?)))
            .collect()
    }
}

static BLOCKS: LazyLock<RwLock<HashMap<usize, Arc<Block>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

static SOLVES: AtomicUsize = AtomicUsize::new(0);

/// Number of blocks computed by linear solves in this process.
pub fn solve_count() -> usize {
    SOLVES.load(Ordering::Relaxed)
}

/// Degrees currently held in memory.
pub fn cached_degrees() -> Vec<usize> {
    let mut v: Vec<usize> = BLOCKS
        .read()
        .expect("block cache poisoned")
        .keys()
        .copied()
        .collect();
    v.sort_unstable();
    v
}

pub fn clear_memory_cache() {
    BLOCKS.write().expect("block cache poisoned").clear();
}

/// Installs externally stored `H_λ` (given in the m-basis) for degree `n`.
/// Normalization `H_λ[1] = 1` is checked; a mismatch rejects the block.
pub fn install_block(
    n: usize,
    m_coeffs: &BTreeMap<Partition, BTreeMap<Partition, RatFunc>>,
) -> Result<()> {
    let mut h = BTreeMap::new();
    for l in partitions_of(n) {
        let terms = m_coeffs
            .get(&l)
            .ok_or_else(|| Error::Precondition(format!("stored block {n} lacks H[{l}]")))?;
        let f = SymFunc::from_basis_terms(Basis::M, terms)?;
        if n > 0 && !pleth_scalar(&f, &RatFunc::one()).is_one() {
            return Err(Error::Precondition(format!(
                "stored H[{l}] is not normalized"
            )));
        }
        h.insert(l, f);
    }
    BLOCKS
        .write()
        .expect("block cache poisoned")
        .entry(n)
        .or_insert_with(|| Arc::new(Block::from_h(n, h)));
    Ok(())
}

/// The block of degree `n`, solving for it on first use.
pub fn block(n: usize) -> Result<Arc<Block>> {
    if let Some(b) = BLOCKS.read().expect("block cache poisoned").get(&n) {
        return Ok(b.clone());
    }
    let mut h = BTreeMap::new();
    for l in partitions_of(n) {
        let f = solve_h(&l)?;
        h.insert(l, f);
    }
    SOLVES.fetch_add(1, Ordering::Relaxed);
    let b = Arc::new(Block::from_h(n, h));
    Ok(BLOCKS
        .write()
        .expect("block cache poisoned")
        .entry(n)
        .or_insert(b)
        .clone())
}

/// `∏ (v^{ρ_i} - 1)` for the variable `v`.
fn adams_shift(rho: &Partition, v: usize) -> RatFunc {
    let mut acc = RatFunc::one();
    for &i in rho.parts() {
        let m = RatFunc::monomial(Monomial::var(v, i as i32));
        acc = &acc * &(&m - &RatFunc::one());
    }
    acc
}

/// Solves for `H_λ` from `H[(t-1)X] ∈ M_{≤λ}`, `H[(q-1)X] ∈ M_{≤λ'}` and
/// `H[1] = 1`.
///
/// One triangularity is built into the unknowns: with `v = t` the first
/// condition says `H = Σ_{μ ≤ λ} a_μ m_μ[X/(t-1)]`. The other condition and
/// the normalization then form an overdetermined system for the `a_μ`.
/// Whichever variable gives fewer unknowns is used for the ansatz.
fn solve_h(l: &Partition) -> Result<SymFunc> {
    let n = l.size();
    if n == 0 {
        return Ok(SymFunc::one());
    }
    let lc = l.conjugate();
    let below = |b: &Partition| -> Result<Vec<Partition>> {
        let mut v = Vec::new();
        for mu in partitions_of(n) {
            if mu.dominance_leq(b)? {
                v.push(mu);
            }
        }
        Ok(v)
    };
    let (below_l, below_lc) = (below(l)?, below(&lc)?);
    // (ansatz variable, ansatz support, condition variable, condition bound)
    let (av, support, cv, bound) = if below_l.len() <= below_lc.len() {
        (registry::T, below_l, registry::Q, &lc)
    } else {
        (registry::Q, below_lc, registry::T, l)
    };
    let rhos = partitions_of(n);
    let inv_shift: BTreeMap<&Partition, RatFunc> = rhos
        .iter()
        .map(|r| Ok((r, adams_shift(r, av).recip()?)))
        .collect::<Result<_>>()?;
    // ansatz functions m_μ[X/(v-1)] in the p-basis
    let basis: Vec<SymFunc> = support
        .iter()
        .map(|mu| {
            let m = SymFunc::from_basis(Basis::M, mu)?;
            Ok(SymFunc::from_terms(
                m.terms()
                    .iter()
                    .map(|(r, c)| (r.clone(), c * &inv_shift[r])),
            ))
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<Vec<RatFunc>> = Vec::new();
    let mut norm: Vec<RatFunc> = basis
        .iter()
        .map(|f| pleth_scalar(f, &RatFunc::one()))
        .collect();
    norm.push(RatFunc::one());
    rows.push(norm);
    // m-coefficients of F[(w-1)X] for the condition variable w
    let images: Vec<BTreeMap<Partition, RatFunc>> = basis
        .iter()
        .map(|f| {
            SymFunc::from_terms(
                f.terms()
                    .iter()
                    .map(|(r, c)| (r.clone(), c * &adams_shift(r, cv))),
            )
            .to_basis(Basis::M)
        })
        .collect::<Result<_>>()?;
    for nu in partitions_of(n) {
        if nu.dominance_leq(bound)? {
            continue;
        }
        let mut row: Vec<RatFunc> = images
            .iter()
            .map(|m| m.get(&nu).cloned().unwrap_or_else(RatFunc::zero))
            .collect();
        row.push(RatFunc::zero());
        rows.push(row);
    }
    let a = solve::solve(rows, support.len(), &format!("H[{l}]"))?;
    let mut h = SymFunc::zero();
    for (f, c) in basis.iter().zip(&a) {
        h = &h + &f.scale(c);
    }
    Ok(h)
}

/// `H_λ` in the power-sum basis.
pub fn macdonald_h(l: &Partition) -> Result<SymFunc> {
    Ok(block(l.size())?.h[l].clone())
}

/// `Q_ρ = ∏ (q^{ρ_i} - 1)(1 - t^{ρ_i})`, so that `(p_ρ, p_ρ)_* = z_ρ Q_ρ`.
fn q_factor(rho: &Partition) -> RatFunc {
    let q = RatFunc::big_q();
    let mut acc = RatFunc::one();
    for &i in rho.parts() {
        acc = &acc * &q.frobenius(i as u32);
    }
    acc
}

/// `(F, G)_* = (F, G[QX])` with `Q = (q-1)(1-t)`.
pub fn macdonald_pair(f: &SymFunc, g: &SymFunc) -> RatFunc {
    let mut acc = RatFunc::zero();
    for (rho, a) in f.terms() {
        if let Some(b) = g.terms().get(rho) {
            acc = &acc + &(&(a * b) * &q_factor(rho)).scale(&rho.z_stat());
        }
    }
    acc
}

/// Coefficients of `F` in the basis `{H_λ}`, via `c_λ = (F, H_λ)_* / α_λ`.
pub fn expand_in_h(f: &SymFunc) -> Result<BTreeMap<Partition, RatFunc>> {
    let mut out = BTreeMap::new();
    let top = f.degree().unwrap_or(0);
    for n in 0..=top {
        let fn_ = f.component(n);
        if fn_.is_zero() {
            continue;
        }
        let b = block(n)?;
        for (l, h) in &b.h {
            let c = &macdonald_pair(&fn_, h) / &b.alpha[l];
            if !c.is_zero() {
                out.insert(l.clone(), c);
            }
        }
    }
    Ok(out)
}

/// Rescales every `H_λ` in the expansion of `F` by `w(λ)`.
fn diagonal<W>(f: &SymFunc, w: W) -> Result<SymFunc>
where
    W: Fn(&Block, &Partition) -> RatFunc,
{
    let mut out = SymFunc::zero();
    for (l, c) in expand_in_h(f)? {
        let b = block(l.size())?;
        out = &out + &b.h[&l].scale(&(&c * &w(&b, &l)));
    }
    Ok(out)
}

/// `∇H_λ = H_λ[-1] H_λ`.
pub fn nabla(f: &SymFunc) -> Result<SymFunc> {
    diagonal(f, |b, l| b.at_minus_one[l].clone())
}

/// `Δ_F H_λ = F[D_λ] H_λ`.
pub fn delta_f(f: &SymFunc, g: &SymFunc) -> Result<SymFunc> {
    diagonal(g, |_, l| pleth_scalar(f, &l.d_stat()))
}

fn x_plus_one() -> AlphabetExpr {
    &AlphabetExpr::symbol("X") + &AlphabetExpr::constant(RatFunc::one())
}

fn grading() -> Grading {
    Grading::Alphabet("X".into())
}

fn to_sym(m: &crate::symfun::MultiSymFunc) -> SymFunc {
    m.to_sym().expect("single alphabet")
}

/// Series in the alphabet `X` truncated after degree `order`.
pub fn series(f: &SymFunc, order: usize) -> Result<GradedSeries> {
    GradedSeries::from_element(
        &crate::symfun::MultiSymFunc::from_sym(f, "X"),
        order,
        grading(),
    )
}

/// `(TF)[X] = F[X+1]`.
pub fn op_t(f: &SymFunc) -> SymFunc {
    to_sym(&pleth(f, &x_plus_one()))
}

/// `pExp[X/Q]` to degree `order`.
pub fn kernel_x_over_q(order: usize) -> Result<GradedSeries> {
    let a = AlphabetExpr::symbol("X").div_scalar(&RatFunc::big_q())?;
    GradedSeries::from_element(&a.to_element(), order, grading())?.pexp()
}

/// `(T*F)[X] = pExp[X/Q] F[X]`.
pub fn op_tstar(f: &SymFunc, order: usize) -> Result<GradedSeries> {
    kernel_x_over_q(order)?.mul(&series(f, order)?)
}

/// `V = ∇ T* T`.
pub fn op_v(f: &SymFunc, order: usize) -> Result<GradedSeries> {
    let s = op_tstar(&op_t(f), order)?;
    series(&nabla(&to_sym(&s.to_element()))?, order)
}

/// `V* = T* T ∇`.
pub fn op_vstar(f: &SymFunc, order: usize) -> Result<GradedSeries> {
    op_tstar(&op_t(&nabla(f)?), order)
}

/// `pExp[D_λ X / Q]` to degree `order`.
pub fn ght_rhs(l: &Partition, order: usize) -> Result<GradedSeries> {
    let a = AlphabetExpr::symbol("X").scale(&(&l.d_stat() / &RatFunc::big_q()));
    GradedSeries::from_element(&a.to_element(), order, grading())?.pexp()
}

/// Ensures `u` is a registered small variable and returns it.
pub fn small_u() -> RatFunc {
    registry::declare_small("u").expect("u is a valid small variable");
    RatFunc::named("u").expect("registered")
}

/// `pExp[uB_λ] H_λ[1 + uD_μ]` as an exact rational function of `u`.
pub fn koornwinder_value(l: &Partition, mu: &Partition) -> Result<RatFunc> {
    let u = small_u();
    let arg = &RatFunc::one() + &(&u * &mu.d_stat());
    let num = pleth_scalar(&macdonald_h(l)?, &arg);
    let mut den = RatFunc::one();
    for (r, c) in l.cells() {
        let cell = RatFunc::monomial(
            Monomial::var(registry::Q, c as i32).mul(&Monomial::var(registry::T, r as i32)),
        );
        den = &den * &(&RatFunc::one() - &(&u * &cell));
    }
    num.checked_div(&den)
}

/// Symmetry of [`koornwinder_value`] under `λ ↔ μ`.
pub fn check_koornwinder(l: &Partition, mu: &Partition) -> Result<bool> {
    Ok(koornwinder_value(l, mu)? == koornwinder_value(mu, l)?)
}

/// Outcome of the three specialization identities for one `λ`.
#[derive(Clone, Debug)]
pub struct SpecializationReport {
    pub partition: Partition,
    /// `H_λ[1-u] = ∏ (1 - u q^c t^r)`
    pub one_minus_u: (RatFunc, RatFunc),
    /// `H_λ[-1] = (-1)^{|λ|} q^{n(λ')} t^{n(λ)}`
    pub minus_one: (RatFunc, RatFunc),
    /// `H_λ|_{t=1/q} = s_λ[X/(1-q)] / s_λ[1/(1-q)]`
    pub principal: (SymFunc, SymFunc),
}

impl SpecializationReport {
    pub fn passed(&self) -> bool {
        self.one_minus_u.0 == self.one_minus_u.1
            && self.minus_one.0 == self.minus_one.1
            && self.principal.0 == self.principal.1
    }
}

pub fn check_specializations(l: &Partition) -> Result<SpecializationReport> {
    let h = macdonald_h(l)?;
    let u = small_u();
    let lhs1 = pleth_scalar(&h, &(&RatFunc::one() - &u));
    let mut rhs1 = RatFunc::one();
    for (r, c) in l.cells() {
        let cell = RatFunc::q().pow(c as i32)? * RatFunc::t().pow(r as i32)?;
        rhs1 = &rhs1 * &(&RatFunc::one() - &(&u * &cell));
    }
    let lhs2 = pleth_scalar(&h, &RatFunc::from_int(-1));
    let sign = if l.size().is_multiple_of(2) { 1 } else { -1 };
    let rhs2 = &(&RatFunc::from_int(sign) * &RatFunc::q().pow(l.conjugate().n_stat() as i32)?)
        * &RatFunc::t().pow(l.n_stat() as i32)?;
    let q_inv = RatFunc::q().pow(-1)?;
    let lhs3 = h.map_coeffs(|c| c.substitute(&[(registry::T, q_inv.clone())]))?;
    let s = SymFunc::from_basis(Basis::S, l)?;
    let geo = RatFunc::one().checked_div(&(&RatFunc::one() - &RatFunc::q()))?;
    let num = to_sym(&pleth(&s, &AlphabetExpr::symbol("X").scale(&geo)));
    let rhs3 = num.scale(&pleth_scalar(&s, &geo).recip()?);
    Ok(SpecializationReport {
        partition: l.clone(),
        one_minus_u: (lhs1, rhs1),
        minus_one: (lhs2, rhs2),
        principal: (lhs3, rhs3),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symfun::{e, h};

    fn part(p: &[usize]) -> Partition {
        Partition::new(p.to_vec()).unwrap()
    }

    fn r(s: &str) -> RatFunc {
        RatFunc::parse(s).unwrap()
    }

    #[test]
    fn small_cases_in_m_basis() {
        assert_eq!(macdonald_h(&part(&[1])).unwrap(), SymFunc::p(part(&[1])));
        let h2 = macdonald_h(&part(&[2]))
            .unwrap()
            .to_basis(Basis::M)
            .unwrap();
        assert!(h2[&part(&[2])].is_one());
        assert_eq!(h2[&part(&[1, 1])], r("1 + q"));
        let h11 = macdonald_h(&part(&[1, 1]))
            .unwrap()
            .to_basis(Basis::M)
            .unwrap();
        assert_eq!(h11[&part(&[1, 1])], r("1 + t"));
    }

    #[test]
    fn pairing_examples() {
        let h1 = macdonald_h(&part(&[1])).unwrap();
        assert_eq!(macdonald_pair(&h1, &h1), part(&[1]).alpha());
        let h2 = macdonald_h(&part(&[2])).unwrap();
        let h11 = macdonald_h(&part(&[1, 1])).unwrap();
        assert!(macdonald_pair(&h2, &h11).is_zero());
    }

    #[test]
    fn nabla_examples() {
        assert_eq!(
            nabla(&SymFunc::p(part(&[1]))).unwrap(),
            -&SymFunc::p(part(&[1]))
        );
        let h2 = macdonald_h(&part(&[2])).unwrap();
        assert_eq!(nabla(&h2).unwrap(), h2.scale(&RatFunc::q()));
        assert_eq!(nabla(&SymFunc::one()).unwrap(), SymFunc::one());
    }

    #[test]
    fn t_of_h2() {
        let expect = &(&h(2) + &h(1)) + &SymFunc::one();
        assert_eq!(op_t(&h(2)), expect);
    }

    #[test]
    fn tstar_of_one() {
        let s = op_tstar(&SymFunc::one(), 2).unwrap();
        let a = AlphabetExpr::symbol("X")
            .div_scalar(&RatFunc::big_q())
            .unwrap();
        let expect = &(&SymFunc::one() + &to_sym(&pleth(&h(1), &a))) + &to_sym(&pleth(&h(2), &a));
        assert_eq!(to_sym(&s.to_element()), expect);
    }

    #[test]
    fn v_of_small_cases() {
        for l in [Partition::empty(), part(&[1])] {
            assert_eq!(
                op_v(&macdonald_h(&l).unwrap(), 4).unwrap(),
                ght_rhs(&l, 4).unwrap()
            );
        }
    }

    #[test]
    fn delta_examples() {
        let h1 = macdonald_h(&part(&[1])).unwrap();
        let d = delta_f(&e(1), &h1).unwrap();
        assert_eq!(d, h1.scale(&(&RatFunc::from_int(-1) - &RatFunc::big_q())));
        let f = h(2);
        assert_eq!(
            delta_f(&f, &SymFunc::one()).unwrap(),
            SymFunc::constant(pleth_scalar(&f, &RatFunc::from_int(-1)))
        );
    }

    #[test]
    fn koornwinder_examples() {
        let one = part(&[1]);
        let expect = &(&RatFunc::one() - &(&small_u() * &(&RatFunc::one() + &RatFunc::big_q())))
            / &(&RatFunc::one() - &small_u());
        assert_eq!(koornwinder_value(&one, &one).unwrap(), expect);
        assert!(check_koornwinder(&part(&[2]), &one).unwrap());
        assert!(check_koornwinder(&part(&[2, 1]), &part(&[1, 1])).unwrap());
    }

    #[test]
    fn specialization_examples() {
        for l in [part(&[1]), part(&[2]), part(&[2, 1])] {
            let rep = check_specializations(&l).unwrap();
            assert!(rep.passed(), "{rep:?}");
        }
        let rep = check_specializations(&part(&[2, 1])).unwrap();
        assert_eq!(rep.minus_one.0, r("-q*t"));
    }
}

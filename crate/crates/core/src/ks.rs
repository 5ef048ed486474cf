//! Kirkwood–Salsburg kernel, operator, and fixed-point solver.
//!
//! The kernel attached to a root site `s`, a shift set `N` and a boundary
//! `B` is the alternating Möbius sum
//!
//! ```text
//! γ(s, N | B) = Σ_{M ⊆ N} (−1)^{|N∖M|} κ({s} | B ∪ M),
//! ```
//!
//! equivalently (for `N` disjoint from `{s} ∪ B`) the cover sum
//! `Σ_{𝒞 ⊆ 2^N, ⋃𝒞 = N} ∏_{L ∈ 𝒞} (W({s}∪L | B) − 1)` — two independent
//! routes kept side by side on purpose. The fixed-point operator reads
//!
//! ```text
//! (K_Λ ρ)(∅)      = ρ(∅),
//! (K_Λ ρ)(X)      = Σ_{N ⊆ Λ∖X'} z(s) γ(s, N | X') ρ(X' ∪ N),    X ≠ ∅,
//! ```
//!
//! with `s` chosen from `X` by a selector and `X' = X∖{s}`. Its fixed
//! points normalized at `ρ(∅) = 1` are the finite-volume correlation
//! functions, reached here by plain Picard (Jacobi) iteration from the
//! empty-set indicator.

use crate::error::EvalError;
use crate::model::{CriterionParams, InteractionModel};
use crate::scalar::Scalar;
use crate::sites::{Site, SiteSet};
use num_complex::Complex;
use num_traits::{One, Zero};

/// A kernel evaluation point `γ(root, shift | boundary)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelQuery {
    pub root: Site,
    pub shift: SiteSet,
    pub boundary: SiteSet,
}

/// `γ` by the alternating Möbius sum over `M ⊆ shift`.
pub fn gamma_mobius<F: Scalar>(model: &InteractionModel<F>, q: KernelQuery) -> Complex<F> {
    assert!(q.shift.len() <= 20, "shift set too large for direct enumeration");
    let single = SiteSet::singleton(q.root);
    let mut out = Complex::zero();
    for m in q.shift.subsets() {
        let term = model.kappa_conditional(single, q.boundary | m);
        if (q.shift.len() - m.len()) % 2 == 0 {
            out = out + term;
        } else {
            out = out - term;
        }
    }
    out
}

/// `γ` by the cover sum over collections of subsets of `shift` whose union
/// is `shift`; requires `shift` disjoint from `{root} ∪ boundary`.
///
/// Only candidates `L` with `W({root}∪L | boundary) ≠ 1` can contribute, so
/// the collection enumeration runs over that (typically tiny) family.
pub fn gamma_cover<F: Scalar>(model: &InteractionModel<F>, q: KernelQuery) -> Complex<F> {
    cover_sum(model, q, true)
}

/// The reduced kernel `γ̂`: the same cover sum restricted to collections of
/// non-empty subsets, so that `γ = κ({root} | boundary) · γ̂`.
pub fn gamma_hat<F: Scalar>(model: &InteractionModel<F>, q: KernelQuery) -> Complex<F> {
    cover_sum(model, q, false)
}

fn cover_sum<F: Scalar>(
    model: &InteractionModel<F>,
    q: KernelQuery,
    include_empty: bool,
) -> Complex<F> {
    assert!(q.shift.len() <= 12, "shift set too large for cover enumeration");
    assert!(
        q.shift.is_disjoint(SiteSet::singleton(q.root) | q.boundary),
        "cover form needs the shift disjoint from root and boundary"
    );
    let single = SiteSet::singleton(q.root);
    let mut candidates: Vec<(SiteSet, Complex<F>)> = Vec::new();
    for l in q.shift.subsets() {
        if l.is_empty() && !include_empty {
            continue;
        }
        let w = model.w_conditional(single | l, q.boundary);
        if w != Complex::one() {
            candidates.push((l, w - Complex::one()));
        }
    }
    assert!(candidates.len() <= 24, "too many non-unit cover factors");
    let mut out = Complex::zero();
    for pick in 0u32..1 << candidates.len() {
        let mut union = SiteSet::EMPTY;
        let mut product = Complex::one();
        for (bit, (l, factor)) in candidates.iter().enumerate() {
            if pick & (1 << bit) != 0 {
                union = union | *l;
                product = product * *factor;
            }
        }
        if union == q.shift {
            out = out + product;
        }
    }
    out
}

/// Batch kernel row: `γ(root, N | boundary)` for every `N ⊆ pool`, indexed
/// by `pool.subset_index(N)`.
///
/// Computes `κ({root} | boundary ∪ M)` on all of `pool` and applies the
/// in-place alternating subset transform — a third evaluation route, tested
/// against [`gamma_mobius`] pointwise.
pub fn gamma_row<F: Scalar>(
    model: &InteractionModel<F>,
    root: Site,
    boundary: SiteSet,
    pool: SiteSet,
) -> Vec<Complex<F>> {
    let single = SiteSet::singleton(root);
    let k = pool.len();
    let mut row: Vec<Complex<F>> = (0u32..1 << k)
        .map(|i| model.kappa_conditional(single, boundary | pool.nth_subset(i)))
        .collect();
    for bit in 0..k {
        let step = 1usize << bit;
        for m in 0..row.len() {
            if m & step != 0 {
                row[m] = row[m] - row[m - step];
            }
        }
    }
    row
}

/// The minimal subcover `𝒞*` of a cover: for each covered point keep the
/// canonically smallest member containing it.
pub fn minimal_subcover(cover: &[SiteSet]) -> Vec<SiteSet> {
    let union = cover.iter().fold(SiteSet::EMPTY, |u, &l| u | l);
    let mut out: Vec<SiteSet> = Vec::new();
    for site in union.sites() {
        let best = cover
            .iter()
            .copied()
            .filter(|l| l.contains(site))
            .min()
            .expect("site comes from the union");
        if !out.contains(&best) {
            out.push(best);
        }
    }
    out.sort_unstable();
    out
}

/// Two sides of a kernel bound (`lhs ≤ rhs` up to slack).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundCheck<F: Scalar> {
    pub lhs: F,
    pub rhs: F,
}

/// Compares `|γ(x, N)| α^N` against the collection sum
/// `Σ_{𝒳 ⊆ F(x), ⋃𝒳∖{x} = N} ∏_{X ∈ 𝒳} (m(X) − 1)` built from the
/// criterion bond factors `m`.
pub fn gamma_alpha_bound<F: Scalar>(
    model: &InteractionModel<F>,
    params: &CriterionParams<F>,
    root: Site,
    shift: SiteSet,
) -> BoundCheck<F> {
    assert!(!shift.contains(root), "shift must avoid the root");
    let gamma = gamma_mobius(model, KernelQuery { root, shift, boundary: SiteSet::EMPTY });
    let lhs = gamma.norm() * params.alpha_pow(shift);

    // Candidate bonds are {root} ∪ L for L ⊆ shift; only m ≠ 1 matters.
    let single = SiteSet::singleton(root);
    let mut candidates: Vec<(SiteSet, F)> = Vec::new();
    for l in shift.subsets() {
        let m = crate::criteria::bond_factor(model, params, single | l, root);
        if m != F::one() {
            candidates.push((l, m - F::one()));
        }
    }
    assert!(candidates.len() <= 24, "too many non-unit bound factors");
    let mut rhs = F::zero();
    for pick in 0u32..1 << candidates.len() {
        let mut union = SiteSet::EMPTY;
        let mut product = F::one();
        for (bit, (l, factor)) in candidates.iter().enumerate() {
            if pick & (1 << bit) != 0 {
                union = union | *l;
                product = product * *factor;
            }
        }
        if union == shift {
            rhs = rhs + product;
        }
    }
    BoundCheck { lhs, rhs }
}

/// Pieces of the summed kernel bound over one volume.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumBoundCheck<F: Scalar> {
    /// `Σ_{N ⊆ Λ} |γ(x, N)| α^N`.
    pub sum_all: F,
    /// `(1 + α(x) 1_Λ(x)) Σ_{N ⊆ Λ∖{x}} |γ(x, N)| α^N` — equals `sum_all`.
    pub prefactor_form: F,
    /// `Σ_{N ⊆ Λ∖{x}} |γ(x, N)| α^N`.
    pub restricted_sum: F,
    /// `∏_{X ∋ x, X∖{x} ⊆ Λ} m(X)` — dominates `restricted_sum`.
    pub product_bound: F,
}

/// Evaluates the summed kernel bound and its split-off prefactor identity.
pub fn sum_gamma_alpha_bound_check<F: Scalar>(
    model: &InteractionModel<F>,
    params: &CriterionParams<F>,
    root: Site,
    volume: SiteSet,
) -> SumBoundCheck<F> {
    let sum_over = |pool: SiteSet| -> F {
        let mut acc = F::zero();
        for n in pool.subsets() {
            let g = gamma_mobius(model, KernelQuery { root, shift: n, boundary: SiteSet::EMPTY });
            acc = acc + g.norm() * params.alpha_pow(n);
        }
        acc
    };
    let sum_all = sum_over(volume);
    let restricted_sum = sum_over(volume.remove(root));
    let prefactor = if volume.contains(root) {
        F::one() + params.alpha(root)
    } else {
        F::one()
    };

    let single = SiteSet::singleton(root);
    let mut product_bound = F::one();
    for (bond, _) in model.entries_containing(root) {
        if (bond - single).is_subset_of(volume) {
            product_bound = product_bound * crate::criteria::bond_factor(model, params, bond, root);
        }
    }
    SumBoundCheck {
        sum_all,
        prefactor_form: prefactor * restricted_sum,
        restricted_sum,
        product_bound,
    }
}

/// Dense table of complex values over the subsets of a support set.
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationTable<F: Scalar> {
    support: SiteSet,
    entries: Vec<Complex<F>>,
}

impl<F: Scalar> CorrelationTable<F> {
    pub fn zero(support: SiteSet) -> Self {
        CorrelationTable { support, entries: vec![Complex::zero(); 1 << support.len()] }
    }

    /// The empty-set indicator `1_{∅}` — the Picard starting point.
    pub fn empty_indicator(support: SiteSet) -> Self {
        let mut t = Self::zero(support);
        t.entries[0] = Complex::one();
        t
    }

    pub fn from_fn(support: SiteSet, mut f: impl FnMut(SiteSet) -> Complex<F>) -> Self {
        let entries = (0u32..1 << support.len())
            .map(|i| f(support.nth_subset(i)))
            .collect();
        CorrelationTable { support, entries }
    }

    pub fn support(&self) -> SiteSet {
        self.support
    }

    pub fn get(&self, subset: SiteSet) -> Complex<F> {
        self.entries[self.support.subset_index(subset) as usize]
    }

    pub fn set(&mut self, subset: SiteSet, value: Complex<F>) {
        let i = self.support.subset_index(subset) as usize;
        self.entries[i] = value;
    }

    /// `(subset, value)` pairs in ascending canonical subset order.
    pub fn iter(&self) -> impl Iterator<Item = (SiteSet, Complex<F>)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.support.nth_subset(i as u32), v))
    }

    /// `max_X |self(X) − other(X)|`; supports must match.
    pub fn max_abs_diff(&self, other: &Self) -> F {
        assert_eq!(self.support, other.support, "tables over different supports");
        self.entries
            .iter()
            .zip(&other.entries)
            .map(|(a, b)| (*a - *b).norm())
            .fold(F::zero(), F::max)
    }
}

/// Dense non-negative real table over the subsets of a support set (the
/// majorant side of the domination argument).
#[derive(Debug, Clone, PartialEq)]
pub struct RealTable<F: Scalar> {
    support: SiteSet,
    entries: Vec<F>,
}

impl<F: Scalar> RealTable<F> {
    pub fn from_fn(support: SiteSet, mut f: impl FnMut(SiteSet) -> F) -> Self {
        let entries = (0u32..1 << support.len())
            .map(|i| f(support.nth_subset(i)))
            .collect();
        RealTable { support, entries }
    }

    pub fn support(&self) -> SiteSet {
        self.support
    }

    pub fn get(&self, subset: SiteSet) -> F {
        self.entries[self.support.subset_index(subset) as usize]
    }

    pub fn iter(&self) -> impl Iterator<Item = (SiteSet, F)> + '_ {
        self.entries
            .iter()
            .enumerate()
            .map(|(i, &v)| (self.support.nth_subset(i as u32), v))
    }

    /// `self(X) ≤ other(X) + slack` everywhere.
    pub fn dominated_by(&self, other: &Self, slack: F) -> bool {
        assert_eq!(self.support, other.support, "tables over different supports");
        self.entries
            .iter()
            .zip(&other.entries)
            .all(|(a, b)| *a <= *b + slack)
    }
}

/// Picks the pivot site removed from a configuration by the operator.
/// All choices yield the same fixed point; the default is the smallest
/// site index.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Selector {
    #[default]
    MinSite,
    MaxSite,
    /// Deterministic pseudo-random pick keyed by the seed and the subset.
    Seeded(u64),
}

impl Selector {
    pub fn choose(&self, subset: SiteSet) -> Site {
        assert!(!subset.is_empty(), "selector needs a non-empty subset");
        match self {
            Selector::MinSite => subset.min_site().unwrap(),
            Selector::MaxSite => subset.max_site().unwrap(),
            Selector::Seeded(seed) => {
                let h = splitmix64(seed ^ u64::from(subset.mask()).wrapping_mul(0x9E37_79B9_7F4A_7C15));
                let idx = (h % subset.len() as u64) as usize;
                subset.sites().nth(idx).unwrap()
            }
        }
    }
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

fn require_support(support: SiteSet, volume: SiteSet) -> Result<(), EvalError> {
    if !volume.is_subset_of(support) {
        return Err(EvalError::SupportTooSmall { support, volume });
    }
    Ok(())
}

/// One application of the operator `K_Λ` to a table.
pub fn ks_apply<F: Scalar>(
    model: &InteractionModel<F>,
    volume: SiteSet,
    rho: &CorrelationTable<F>,
    selector: Selector,
) -> Result<CorrelationTable<F>, EvalError> {
    let support = rho.support();
    require_support(support, volume)?;
    let mut out = CorrelationTable::zero(support);
    out.set(SiteSet::EMPTY, rho.get(SiteSet::EMPTY));
    for x in support.subsets().skip(1) {
        let s = selector.choose(x);
        let rest = x.remove(s);
        let pool = volume - rest;
        let row = gamma_row(model, s, rest, pool);
        let z = model.activity(s);
        let mut acc = Complex::zero();
        for (i, g) in row.iter().enumerate() {
            let n = pool.nth_subset(i as u32);
            acc = acc + z * *g * rho.get(rest | n);
        }
        out.set(x, acc);
    }
    Ok(out)
}

/// One application of the absolute-value operator `K̃_Λ` to a non-negative
/// table: `(K̃ ξ)(X) = Σ_N |z(s)| |γ(s, N | X')| ξ(X' ∪ N)` for `X ≠ ∅`.
pub fn ks_tilde_apply<F: Scalar>(
    model: &InteractionModel<F>,
    volume: SiteSet,
    xi: &RealTable<F>,
    selector: Selector,
) -> Result<RealTable<F>, EvalError> {
    let support = xi.support();
    require_support(support, volume)?;
    let mut entries = vec![F::zero(); 1 << support.len()];
    entries[0] = xi.get(SiteSet::EMPTY);
    for x in support.subsets().skip(1) {
        let s = selector.choose(x);
        let rest = x.remove(s);
        let pool = volume - rest;
        let row = gamma_row(model, s, rest, pool);
        let z_norm = model.activity(s).norm();
        let mut acc = F::zero();
        for (i, g) in row.iter().enumerate() {
            let n = pool.nth_subset(i as u32);
            acc = acc + z_norm * g.norm() * xi.get(rest | n);
        }
        entries[support.subset_index(x) as usize] = acc;
    }
    Ok(RealTable { support, entries })
}

/// The comparison ansatz `ξ(X) = ∏_{x ∈ X ∩ Λ} α(x) · ∏_{x ∈ X∖Λ} r(x)`.
pub fn ansatz_xi<F: Scalar>(params: &CriterionParams<F>, volume: SiteSet, subset: SiteSet) -> F {
    subset.sites().fold(F::one(), |acc, x| {
        acc * if volume.contains(x) { params.alpha(x) } else { params.r(x) }
    })
}

/// [`ansatz_xi`] tabulated over a support.
pub fn ansatz_xi_table<F: Scalar>(
    params: &CriterionParams<F>,
    volume: SiteSet,
    support: SiteSet,
) -> RealTable<F> {
    RealTable::from_fn(support, |x| ansatz_xi(params, volume, x))
}

/// Converged Picard iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct PicardSolution<F: Scalar> {
    pub table: CorrelationTable<F>,
    /// Sweeps actually performed.
    pub iterations: usize,
    /// `max_X |(K ρ)(X) − ρ(X)|` of the returned table.
    pub residual: F,
}

/// Default sweep budget for a support set.
pub fn default_max_iter(support: SiteSet) -> usize {
    10 * (support.len() + 1)
}

/// Iterates `ρ_{n+1} = K_Λ ρ_n` from the empty-set indicator until the
/// sup-norm update drops below `tol` (full Jacobi sweeps, all entries
/// refreshed from the previous iterate).
pub fn picard_solve<F: Scalar>(
    model: &InteractionModel<F>,
    volume: SiteSet,
    support: SiteSet,
    selector: Selector,
    tol: F,
    max_iter: usize,
) -> Result<PicardSolution<F>, EvalError> {
    picard_solve_observed(model, volume, support, selector, tol, max_iter, |_, _| {})
}

/// As [`picard_solve`], invoking `observer(sweep, ρ_sweep)` after every
/// sweep (and once with the initial iterate at sweep 0).
pub fn picard_solve_observed<F: Scalar>(
    model: &InteractionModel<F>,
    volume: SiteSet,
    support: SiteSet,
    selector: Selector,
    tol: F,
    max_iter: usize,
    mut observer: impl FnMut(usize, &CorrelationTable<F>),
) -> Result<PicardSolution<F>, EvalError> {
    if tol <= F::zero() || tol.is_nan() {
        return Err(EvalError::InvalidParameter(format!("tol = {tol} must be positive")));
    }
    require_support(support, volume)?;

    // The kernel rows do not change across sweeps; precompute the operator.
    let op = PrecomputedOperator::new(model, volume, support, selector);

    let mut rho = CorrelationTable::empty_indicator(support);
    observer(0, &rho);
    let mut last_delta = F::infinity();
    for sweep in 1..=max_iter {
        let next = op.apply(&rho);
        last_delta = next.max_abs_diff(&rho);
        rho = next;
        observer(sweep, &rho);
        if last_delta < tol {
            let residual = op.apply(&rho).max_abs_diff(&rho);
            return Ok(PicardSolution { table: rho, iterations: sweep, residual });
        }
    }
    Err(EvalError::NoConvergence {
        iterations: max_iter,
        residual: last_delta.to_f64().unwrap_or(f64::NAN),
    })
}

/// `K_Λ` with all kernel rows evaluated once: per non-empty `X` the list of
/// `(table index of X' ∪ N, z(s) γ(s, N | X'))`.
struct PrecomputedOperator<F: Scalar> {
    support: SiteSet,
    rows: Vec<Vec<(usize, Complex<F>)>>,
}

impl<F: Scalar> PrecomputedOperator<F> {
    fn new(
        model: &InteractionModel<F>,
        volume: SiteSet,
        support: SiteSet,
        selector: Selector,
    ) -> Self {
        let rows = support
            .subsets()
            .map(|x| {
                if x.is_empty() {
                    return Vec::new();
                }
                let s = selector.choose(x);
                let rest = x.remove(s);
                let pool = volume - rest;
                let z = model.activity(s);
                gamma_row(model, s, rest, pool)
                    .into_iter()
                    .enumerate()
                    .map(|(i, g)| {
                        let n = pool.nth_subset(i as u32);
                        (support.subset_index(rest | n) as usize, z * g)
                    })
                    .collect()
            })
            .collect();
        PrecomputedOperator { support, rows }
    }

    fn apply(&self, rho: &CorrelationTable<F>) -> CorrelationTable<F> {
        let mut out = CorrelationTable::zero(self.support);
        out.entries[0] = rho.entries[0];
        for (xi, row) in self.rows.iter().enumerate().skip(1) {
            let mut acc = Complex::zero();
            for &(idx, coeff) in row {
                acc = acc + coeff * rho.entries[idx];
            }
            out.entries[xi] = acc;
        }
        out
    }
}

/// Inverts the overlap sum: `μ(X) = Σ_{Y ⊆ Λ∖X} (−1)^{|Y|} ρ(X ∪ Y)`.
///
/// At a fixed point of `K_Λ`, `μ(X)/μ(∅) = z^X κ(X)`.
pub fn mu_recover<F: Scalar>(
    rho: &CorrelationTable<F>,
    volume: SiteSet,
) -> Result<CorrelationTable<F>, EvalError> {
    let support = rho.support();
    require_support(support, volume)?;
    let mut out = CorrelationTable::zero(support);
    for x in support.subsets() {
        let free = volume - x;
        let mut acc = Complex::zero();
        for y in free.subsets() {
            if y.len() % 2 == 0 {
                acc = acc + rho.get(x | y);
            } else {
                acc = acc - rho.get(x | y);
            }
        }
        out.set(x, acc);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact;
    use crate::{C64, Model64, Params64};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn set(sites: &[usize]) -> SiteSet {
        SiteSet::from_sites(sites.iter().copied())
    }

    fn pair_model(w: C64) -> Model64 {
        Model64::new(vec![c(0.3, 0.1), c(0.2, -0.2)])
            .unwrap()
            .with_interaction(set(&[0, 1]), w)
            .unwrap()
    }

    #[test]
    fn gamma_empty_shift_is_kappa() {
        let m = pair_model(c(0.4, 0.2));
        let q = KernelQuery { root: 0, shift: SiteSet::EMPTY, boundary: set(&[1]) };
        let g = gamma_mobius(&m, q);
        assert!((g - m.kappa_conditional(set(&[0]), set(&[1]))).norm() < 1e-15);
        assert!((gamma_cover(&m, q) - g).norm() < 1e-15);
    }

    #[test]
    fn gamma_single_shift_formula() {
        // B = ∅, N = {y}: γ = W({s}) (W({s,y}) − 1).
        let w = c(0.4, 0.2);
        let m = pair_model(w);
        let q = KernelQuery { root: 0, shift: set(&[1]), boundary: SiteSet::EMPTY };
        let g = gamma_mobius(&m, q);
        let expect = m.w(set(&[0])) * (w - C64::one());
        assert!((g - expect).norm() < 1e-15);
        assert!((gamma_cover(&m, q) - g).norm() < 1e-15);
    }

    #[test]
    fn gamma_vanishes_for_root_in_boundary() {
        let m = pair_model(c(0.4, 0.2));
        let q = KernelQuery { root: 0, shift: set(&[1]), boundary: set(&[0]) };
        assert_eq!(gamma_mobius(&m, q), C64::zero());
    }

    #[test]
    fn gamma_sign_split_identity() {
        // γ(x, N | B) = (−1)^{1_N(x)} γ(x, N∖{x} | B) for x ∉ B.
        let m = Model64::new(vec![c(0.3, 0.1), c(0.2, -0.2), c(0.25, 0.0)])
            .unwrap()
            .with_interaction(set(&[0, 1]), c(0.5, 0.3))
            .unwrap()
            .with_interaction(set(&[0, 1, 2]), c(1.5, -0.4))
            .unwrap();
        let with_root = gamma_mobius(&m, KernelQuery { root: 0, shift: set(&[0, 2]), boundary: SiteSet::EMPTY });
        let without = gamma_mobius(&m, KernelQuery { root: 0, shift: set(&[2]), boundary: SiteSet::EMPTY });
        assert!((with_root + without).norm() < 1e-15);
    }

    #[test]
    fn gamma_hat_factorizes_gamma() {
        let m = pair_model(c(0.7, 0.4));
        let q = KernelQuery { root: 0, shift: set(&[1]), boundary: SiteSet::EMPTY };
        let g = gamma_mobius(&m, q);
        let ghat = gamma_hat(&m, q);
        let kappa = m.kappa(set(&[0]));
        assert!((g - kappa * ghat).norm() < 1e-15);
    }

    #[test]
    fn gamma_row_matches_pointwise_queries() {
        let m = Model64::new(vec![c(0.3, 0.1), c(0.2, -0.2), c(0.25, 0.0), c(0.1, 0.3)])
            .unwrap()
            .with_interaction(set(&[0, 1]), c(0.5, 0.3))
            .unwrap()
            .with_interaction(set(&[0, 2, 3]), C64::zero())
            .unwrap();
        let pool = set(&[1, 2, 3]);
        let row = gamma_row(&m, 0, SiteSet::EMPTY, pool);
        for (i, &g) in row.iter().enumerate() {
            let n = pool.nth_subset(i as u32);
            let direct = gamma_mobius(&m, KernelQuery { root: 0, shift: n, boundary: SiteSet::EMPTY });
            assert!((g - direct).norm() < 1e-14);
        }
    }

    #[test]
    fn minimal_subcover_examples() {
        // {{a},{a,b},{b,c}} covers {a,b,c}; the minimum at a is {a}, at b is
        // {a,b}, at c is {b,c}.
        let cover = [set(&[0]), set(&[0, 1]), set(&[1, 2])];
        assert_eq!(minimal_subcover(&cover), vec![set(&[0]), set(&[0, 1]), set(&[1, 2])]);

        // A redundant big member disappears.
        let cover2 = [set(&[0]), set(&[1]), set(&[0, 1])];
        assert_eq!(minimal_subcover(&cover2), vec![set(&[0]), set(&[1])]);

        // Idempotence.
        let min = minimal_subcover(&cover2);
        assert_eq!(minimal_subcover(&min), min);
    }

    #[test]
    fn gamma_alpha_bound_trivial_shift() {
        // N = ∅, W({x}) = 1: lhs = 1 and rhs = 1 (empty collection only).
        let m = Model64::new(vec![c(0.3, 0.1), c(0.2, -0.2)]).unwrap();
        let p = Params64::constant_alpha(2, 0.5).unwrap();
        let check = gamma_alpha_bound(&m, &p, 0, SiteSet::EMPTY);
        assert!((check.lhs - 1.0).abs() < 1e-15);
        assert!((check.rhs - 1.0).abs() < 1e-15);
    }

    #[test]
    fn selector_choices() {
        let x = set(&[1, 3, 5]);
        assert_eq!(Selector::MinSite.choose(x), 1);
        assert_eq!(Selector::MaxSite.choose(x), 5);
        let s = Selector::Seeded(42);
        let pick = s.choose(x);
        assert!(x.contains(pick));
        assert_eq!(s.choose(x), pick, "seeded selector must be deterministic");
    }

    #[test]
    fn ks_apply_on_empty_indicator() {
        // (K ρ0)({x}) = z(x) γ(x, ∅) = z(x) W({x}).
        let m = pair_model(c(0.4, 0.2));
        let rho0 = CorrelationTable::empty_indicator(m.lattice());
        let out = ks_apply(&m, m.lattice(), &rho0, Selector::MinSite).unwrap();
        assert_eq!(out.get(SiteSet::EMPTY), C64::one());
        assert!((out.get(set(&[0])) - m.activity(0) * m.w(set(&[0]))).norm() < 1e-15);
    }

    #[test]
    fn support_must_cover_volume() {
        let m = pair_model(c(0.4, 0.2));
        let rho = CorrelationTable::empty_indicator(set(&[0]));
        assert!(matches!(
            ks_apply(&m, m.lattice(), &rho, Selector::MinSite),
            Err(EvalError::SupportTooSmall { .. })
        ));
    }

    #[test]
    fn picard_empty_volume_fixed_point() {
        // Λ = ∅: the fixed point is ρ(X) = z^X κ(X).
        let m = pair_model(c(0.4, 0.2));
        let sol = picard_solve(&m, SiteSet::EMPTY, m.lattice(), Selector::MinSite, 1e-12, 40)
            .unwrap();
        for (x, v) in sol.table.iter() {
            let expect = m.monomial(x) * m.kappa(x);
            assert!((v - expect).norm() < 1e-12, "mismatch at {x:?}");
        }
        assert!(sol.residual < 1e-12);
    }

    #[test]
    fn picard_rejects_bad_tolerance() {
        let m = pair_model(c(0.4, 0.2));
        assert!(matches!(
            picard_solve(&m, SiteSet::EMPTY, m.lattice(), Selector::MinSite, 0.0, 10),
            Err(EvalError::InvalidParameter(_))
        ));
    }

    #[test]
    fn exact_correlations_are_a_fixed_point() {
        let m = pair_model(c(0.5, 0.3));
        let volume = m.lattice();
        let rho = CorrelationTable::from_fn(volume, |x| {
            exact::correlation(&m, x, volume, SiteSet::EMPTY).unwrap()
        });
        let image = ks_apply(&m, volume, &rho, Selector::MinSite).unwrap();
        assert!(image.max_abs_diff(&rho) < 1e-12);
    }

    #[test]
    fn mu_recovery_examples() {
        // ρ = 1_∅, Λ = {a}: μ(∅) = ρ(∅) − ρ({a}) = 1, μ({a}) = ρ({a}) = 0.
        let support = set(&[0, 1]);
        let rho = CorrelationTable::<f64>::empty_indicator(support);
        let mu = mu_recover(&rho, set(&[0])).unwrap();
        assert_eq!(mu.get(SiteSet::EMPTY), C64::one());
        assert_eq!(mu.get(set(&[0])), C64::zero());

        // At the solved fixed point: μ(X)/μ(∅) = z^X κ(X).
        let m = pair_model(c(0.4, 0.2));
        let volume = m.lattice();
        let sol = picard_solve(&m, volume, volume, Selector::MinSite, 1e-13, 200).unwrap();
        let mu = mu_recover(&sol.table, volume).unwrap();
        let mu0 = mu.get(SiteSet::EMPTY);
        assert!(mu0.norm() > 1e-12);
        for (x, v) in mu.iter() {
            let expect = m.monomial(x) * m.kappa(x);
            assert!((v / mu0 - expect).norm() < 1e-9, "mismatch at {x:?}");
        }
    }

    #[test]
    fn ansatz_examples() {
        let p = Params64::from_r(vec![0.5, 0.2]).unwrap();
        let volume = set(&[0]);
        // x inside Λ contributes α, outside contributes r.
        assert_eq!(ansatz_xi(&p, volume, SiteSet::EMPTY), 1.0);
        assert!((ansatz_xi(&p, volume, set(&[0])) - 1.0).abs() < 1e-15); // α(0) = 1
        assert!((ansatz_xi(&p, volume, set(&[1])) - 0.2).abs() < 1e-15); // r(1)
        assert!((ansatz_xi(&p, volume, set(&[0, 1])) - 0.2).abs() < 1e-15);
    }
}

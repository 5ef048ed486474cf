//! Bond interpolation and the recursive evaluation of effective activities.
//!
//! Fix a root site `x` and order the bonds through `x` canonically. For a
//! marker bond `X ∋ x` the interpolated interaction is
//!
//! ```text
//! W_X(Y) = W(Y) W({x} ∪ Y)   if x ∉ Y and {x} ∪ Y ≺ X,
//!        = 1                  if x ∈ Y and Y ≠ X,
//!        = W(Y)               otherwise,
//! ```
//!
//! which switches the bonds through `x` on one at a time: removing a single
//! bond from the interpolated model changes its partition function by a
//! correlation factor, and chaining those removals over all bonds drives
//!
//! ```text
//! ẑ(x, Λ) = z(x) ∏_{X ∋ x, X∖{x} ⊆ Λ} ( 1 + (W(X) − 1) ∏_{x' ∈ X∖{x}} q(X, x') ),
//! q(X, x') = ẑ_X(x', Λ∖{x'} | pred) / (1 + ẑ_X(x', Λ∖{x'} | pred)),
//! ```
//!
//! where `pred` collects the sites of `X∖{x}` preceding `x'` and each inner
//! effective activity is evaluated on the interpolated model conditioned on
//! `pred` — materialized here as a fresh [`InteractionModel`] so the whole
//! recursion stays within ordinary model evaluation.
//!
//! Products follow the `0 · undefined = 0` convention: every factor is
//! evaluated, an exact zero wins over any ill-defined sibling, and a
//! division by zero with no vanished factor is an error.

use crate::error::EvalError;
use crate::model::{CriterionParams, InteractionModel};
use crate::scalar::Scalar;
use crate::sites::{Site, SiteSet};
use num_complex::Complex;
use num_traits::{One, Zero};

/// A root site with its canonically ordered bond list, ready to materialize
/// interpolated models.
#[derive(Debug, Clone)]
pub struct InterpolationContext<'a, F: Scalar> {
    root: Site,
    bonds: Vec<SiteSet>,
    base: &'a InteractionModel<F>,
}

impl<'a, F: Scalar> InterpolationContext<'a, F> {
    pub fn new(base: &'a InteractionModel<F>, root: Site) -> Self {
        let bonds = base.entries_containing(root).map(|(k, _)| k).collect();
        InterpolationContext { root, bonds, base }
    }

    pub fn root(&self) -> Site {
        self.root
    }

    /// Stored bonds through the root, ascending in the canonical order.
    pub fn bonds(&self) -> &[SiteSet] {
        &self.bonds
    }

    /// The active bond set for a volume: stored bonds `X ∋ root` with
    /// `X∖{root} ⊆ volume`.
    pub fn active_bonds(&self, volume: SiteSet) -> Vec<SiteSet> {
        self.bonds
            .iter()
            .copied()
            .filter(|x| (*x - SiteSet::singleton(self.root)).is_subset_of(volume))
            .collect()
    }

    /// The interpolated weight `W_X(y)` for marker bond `marker`.
    pub fn interpolated_w(&self, marker: SiteSet, y: SiteSet) -> Complex<F> {
        debug_assert!(marker.contains(self.root));
        if !y.contains(self.root) {
            let lifted = y.insert(self.root);
            if lifted < marker {
                self.base.w(y) * self.base.w(lifted)
            } else {
                self.base.w(y)
            }
        } else if y == marker {
            self.base.w(y)
        } else {
            Complex::one()
        }
    }

    /// Materializes `W_marker` as a fresh model over the same activities.
    pub fn materialize(&self, marker: SiteSet) -> InteractionModel<F> {
        let root_single = SiteSet::singleton(self.root);
        let mut candidates: Vec<SiteSet> = self.base.w_entries().map(|(k, _)| k).collect();
        candidates.extend(
            self.bonds
                .iter()
                .map(|&k| k - root_single)
                .filter(|k| !k.is_empty()),
        );
        candidates.sort_unstable();
        candidates.dedup();

        let mut out = InteractionModel::new(self.base.activities().to_vec())
            .expect("base model is valid");
        for y in candidates {
            let w = self.interpolated_w(marker, y);
            if w != Complex::one() {
                out.set_interaction(y, w).expect("candidates are valid and distinct");
            }
        }
        out
    }
}

/// Two sides of an identity under test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentityCheck<F: Scalar> {
    pub lhs: Complex<F>,
    pub rhs: Complex<F>,
}

/// Interpolation step: compares the exact `ẑ(x, Λ)` against
/// `z(x) W({x}) ∏_{X active} Z_X(Λ | x) / Z_X(Λ)`.
///
/// Errors with [`EvalError::VanishingDenominator`] when some `Z_X(Λ)` (or
/// `Z(Λ)` itself) is numerically zero.
pub fn interpolation_identity_check<F: Scalar>(
    model: &InteractionModel<F>,
    root: Site,
    volume: SiteSet,
) -> Result<IdentityCheck<F>, EvalError> {
    if volume.contains(root) {
        return Err(EvalError::SiteInVolume(root));
    }
    let lhs = crate::exact::effective_activity(model, root, volume, SiteSet::EMPTY)?;

    let ctx = InterpolationContext::new(model, root);
    let root_single = SiteSet::singleton(root);
    let mut rhs = model.activity(root) * model.w(root_single);
    for bond in ctx.active_bonds(volume) {
        if bond == root_single {
            continue; // its ratio is exactly 1
        }
        let interp = ctx.materialize(bond);
        let denom = crate::exact::partition_function(
            &interp,
            crate::exact::PartitionQuery::plain(volume),
        );
        if denom.norm() <= crate::exact::denominator_floor(&interp, volume) {
            return Err(EvalError::VanishingDenominator(format!(
                "Z_X(Λ) ≈ 0 at bond {bond:?}, volume {volume:?}"
            )));
        }
        let numer = crate::exact::partition_function(
            &interp,
            crate::exact::PartitionQuery::plain(volume).with_boundary(root_single),
        );
        rhs = rhs * (numer / denom);
    }
    Ok(IdentityCheck { lhs, rhs })
}

/// Removal step for a non-singleton bond `X`: compares
/// `Z_X(Λ | x) / Z_X(Λ)` against `1 + (W(X) − 1) R_X(X∖{x}, Λ) · [X∖{x} ⊆ Λ]`.
pub fn removal_identity_check<F: Scalar>(
    model: &InteractionModel<F>,
    root: Site,
    bond: SiteSet,
    volume: SiteSet,
) -> Result<IdentityCheck<F>, EvalError> {
    let root_single = SiteSet::singleton(root);
    assert!(bond.contains(root) && bond != root_single, "bond must strictly contain the root");
    let ctx = InterpolationContext::new(model, root);
    let interp = ctx.materialize(bond);

    let denom = crate::exact::partition_function(
        &interp,
        crate::exact::PartitionQuery::plain(volume),
    );
    if denom.norm() <= crate::exact::denominator_floor(&interp, volume) {
        return Err(EvalError::VanishingDenominator(format!(
            "Z_X(Λ) ≈ 0 at bond {bond:?}, volume {volume:?}"
        )));
    }
    let numer = crate::exact::partition_function(
        &interp,
        crate::exact::PartitionQuery::plain(volume).with_boundary(root_single),
    );
    let lhs = numer / denom;

    let rest = bond - root_single;
    let rhs = if rest.is_subset_of(volume) {
        let r = crate::exact::correlation(&interp, rest, volume, SiteSet::EMPTY)?;
        Complex::<F>::one() + (model.w(bond) - Complex::one()) * r
    } else {
        Complex::one()
    };
    Ok(IdentityCheck { lhs, rhs })
}

/// One recorded subcall of the recursive evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceEntry<F: Scalar> {
    pub root: Site,
    pub volume: SiteSet,
    pub value: Complex<F>,
}

/// Recursive evaluation of `ẑ(x, Λ | B)` by bond factorization.
///
/// `depth_guard` bounds the recursion depth defensively; the volume loses a
/// site per level, so `|Λ| + 2` is always sufficient.
pub fn recursive_effective_activity<F: Scalar>(
    model: &InteractionModel<F>,
    root: Site,
    volume: SiteSet,
    boundary: SiteSet,
    depth_guard: usize,
) -> Result<Complex<F>, EvalError> {
    let mut trace = Vec::new();
    recursive_effective_activity_traced(model, root, volume, boundary, depth_guard, &mut trace)
}

/// As [`recursive_effective_activity`], recording every subcall's root,
/// volume and returned value (the top-level call included, pushed last).
pub fn recursive_effective_activity_traced<F: Scalar>(
    model: &InteractionModel<F>,
    root: Site,
    volume: SiteSet,
    boundary: SiteSet,
    depth_guard: usize,
    trace: &mut Vec<TraceEntry<F>>,
) -> Result<Complex<F>, EvalError> {
    if volume.contains(root) {
        return Err(EvalError::SiteInVolume(root));
    }
    if boundary.is_empty() {
        recurse(model, root, volume, depth_guard, trace)
    } else {
        let conditioned = model.conditioned(boundary);
        recurse(&conditioned, root, volume, depth_guard, trace)
    }
}

fn recurse<F: Scalar>(
    model: &InteractionModel<F>,
    root: Site,
    volume: SiteSet,
    depth: usize,
    trace: &mut Vec<TraceEntry<F>>,
) -> Result<Complex<F>, EvalError> {
    if depth == 0 {
        return Err(EvalError::DepthGuardExceeded);
    }
    let root_single = SiteSet::singleton(root);
    let head = model.activity(root) * model.w(root_single);

    let value = if head.is_zero() {
        Complex::zero()
    } else {
        let ctx = InterpolationContext::new(model, root);
        let mut factors: Vec<Result<Complex<F>, EvalError>> = Vec::new();
        for bond in ctx.active_bonds(volume) {
            if bond == root_single {
                continue; // already in `head`
            }
            factors.push(bond_factor_value(model, &ctx, bond, volume, depth, trace));
        }
        combine_factors(head, factors)?
    };
    trace.push(TraceEntry { root, volume, value });
    Ok(value)
}

/// `1 + (W(X) − 1) ∏_{x' ∈ X∖{x}} ẑ_X(..)/(1 + ẑ_X(..))` for one bond.
fn bond_factor_value<F: Scalar>(
    model: &InteractionModel<F>,
    ctx: &InterpolationContext<'_, F>,
    bond: SiteSet,
    volume: SiteSet,
    depth: usize,
    trace: &mut Vec<TraceEntry<F>>,
) -> Result<Complex<F>, EvalError> {
    let interp = ctx.materialize(bond);
    let rest = bond - SiteSet::singleton(ctx.root());
    let mut inner = Complex::<F>::one();
    for x_prime in rest.sites() {
        let pred = rest.sites_below(x_prime);
        let sub = interp.conditioned(pred);
        let zhat = recurse(&sub, x_prime, volume.remove(x_prime), depth - 1, trace)?;
        let denom = Complex::<F>::one() + zhat;
        if denom.is_zero() {
            return Err(EvalError::VanishingDenominator(format!(
                "1 + ẑ = 0 at site {x_prime}, bond {bond:?}, volume {volume:?}"
            )));
        }
        inner = inner * (zhat / denom);
    }
    Ok(Complex::<F>::one() + (model.w(bond) - Complex::one()) * inner)
}

/// Applies the zero-wins convention to eagerly evaluated factors.
fn combine_factors<F: Scalar>(
    head: Complex<F>,
    factors: Vec<Result<Complex<F>, EvalError>>,
) -> Result<Complex<F>, EvalError> {
    if factors.iter().any(|f| matches!(f, Ok(v) if v.is_zero())) {
        return Ok(Complex::zero());
    }
    let mut out = head;
    for f in factors {
        out = out * f?;
    }
    Ok(out)
}

/// Two sides of a stability inequality (`lhs ≤ rhs` when the criterion
/// machinery applies).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StabilityCheck<F: Scalar> {
    pub lhs: F,
    pub rhs: F,
}

/// Conditional-stability comparison for a root `x`, boundary `B ∌ x` and a
/// target set `Y ∋ x` disjoint from `B`:
///
/// ```text
/// lhs = max{ |W(Y|B)|, 1 + |W(Y|B) − 1| α^S  over ∅ ≠ S ⊆ Y∖{x} },
/// rhs = ∏_{X ∋ x, X∖B = Y} max{ |W(X)|, 1 + |W(X) − 1| α^S  over ∅ ≠ S ⊆ X∖({x} ∪ B) }.
/// ```
///
/// Only stored bonds contribute non-unit rhs factors.
pub fn stability_lhs_rhs<F: Scalar>(
    model: &InteractionModel<F>,
    params: &CriterionParams<F>,
    root: Site,
    boundary: SiteSet,
    target: SiteSet,
) -> StabilityCheck<F> {
    assert!(!boundary.contains(root), "boundary must not contain the root");
    assert!(target.contains(root), "target must contain the root");
    assert!(target.is_disjoint(boundary), "target must avoid the boundary");

    let w_cond = model.w_conditional(target, boundary);
    let dev = (w_cond - Complex::one()).norm();
    let mut lhs = w_cond.norm();
    for s in (target.remove(root)).subsets().skip(1) {
        lhs = lhs.max(F::one() + dev * params.alpha_pow(s));
    }

    let mut rhs = F::one();
    for (bond, w) in model.entries_containing(root) {
        if bond - boundary != target {
            continue;
        }
        let dev = (w - Complex::one()).norm();
        let mut factor = w.norm();
        for s in (bond - SiteSet::singleton(root) - boundary).subsets().skip(1) {
            factor = factor.max(F::one() + dev * params.alpha_pow(s));
        }
        rhs = rhs * factor;
    }
    StabilityCheck { lhs, rhs }
}

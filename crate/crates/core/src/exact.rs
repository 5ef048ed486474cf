//! Exact evaluation of grand partition functions by configuration
//! enumeration.
//!
//! The pinned, conditioned partition function is
//!
//! ```text
//! Z(X, Λ | B) = Σ_{Y ⊆ Λ∖X} z^{X∪Y} κ(X∪Y | B),
//! ```
//!
//! summed over all `2^|Λ∖X|` configurations. Terms are combined along a
//! binary tree fixed by the configuration index, so results are bit-for-bit
//! reproducible regardless of how callers schedule work around them.

use crate::error::EvalError;
use crate::model::InteractionModel;
use crate::scalar::{real, Scalar};
use crate::sites::{Site, SiteSet};
use num_complex::Complex;
use num_traits::Zero;

/// A query `Z(pinned, volume | boundary)`. The three sets may overlap
/// arbitrarily; overlaps are resolved by the weights themselves (a pinned or
/// summed site inside the boundary contributes Boltzmann factor 0).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionQuery {
    pub pinned: SiteSet,
    pub volume: SiteSet,
    pub boundary: SiteSet,
}

impl PartitionQuery {
    /// Plain `Z(Λ)`: nothing pinned, free boundary.
    pub fn plain(volume: SiteSet) -> Self {
        PartitionQuery { pinned: SiteSet::EMPTY, volume, boundary: SiteSet::EMPTY }
    }

    pub fn pinned(pinned: SiteSet, volume: SiteSet) -> Self {
        PartitionQuery { pinned, volume, boundary: SiteSet::EMPTY }
    }

    pub fn with_boundary(mut self, boundary: SiteSet) -> Self {
        self.boundary = boundary;
        self
    }
}

/// Sums `term(i)` for `i in 0..count` along a fixed binary tree.
pub(crate) fn pairwise_sum<F: Scalar>(
    count: u32,
    term: &mut impl FnMut(u32) -> Complex<F>,
) -> Complex<F> {
    fn go<F: Scalar>(lo: u32, hi: u32, term: &mut impl FnMut(u32) -> Complex<F>) -> Complex<F> {
        if hi - lo <= 8 {
            let mut acc = Complex::zero();
            for i in lo..hi {
                acc = acc + term(i);
            }
            acc
        } else {
            let mid = lo + (hi - lo) / 2;
            go(lo, mid, term) + go(mid, hi, term)
        }
    }
    go(0, count, term)
}

/// `Z(X, Λ | B)` by exhaustive enumeration of `Y ⊆ Λ∖X`.
pub fn partition_function<F: Scalar>(
    model: &InteractionModel<F>,
    query: PartitionQuery,
) -> Complex<F> {
    let free = query.volume - query.pinned;
    let count = 1u32 << free.len();
    pairwise_sum(count, &mut |i| {
        let config = query.pinned | free.nth_subset(i);
        let kappa = model.kappa_conditional(config, query.boundary);
        if kappa.is_zero() {
            return Complex::zero();
        }
        model.monomial(config) * kappa
    })
}

/// `Z(Λ | B)` for every `Λ ⊆` lattice, indexed by the volume's mask.
///
/// Intended for small lattices (the table has `2^n` entries).
pub fn partition_table<F: Scalar>(
    model: &InteractionModel<F>,
    boundary: SiteSet,
) -> Vec<Complex<F>> {
    let n = model.site_count();
    (0u32..1 << n)
        .map(|mask| {
            partition_function(
                model,
                PartitionQuery::plain(SiteSet::from_mask(mask)).with_boundary(boundary),
            )
        })
        .collect()
}

/// Guard below which `Z(Λ | B)` counts as numerically vanished:
/// `1e-14 · (1 + max_x |z(x)|)^{|Λ|}`.
pub fn denominator_floor<F: Scalar>(model: &InteractionModel<F>, volume: SiteSet) -> F {
    let base = F::one() + model.max_activity_norm();
    real::<F>(1e-14) * base.powi(volume.len() as i32)
}

/// The correlation function `R(X, Λ | B) = Z(X, Λ | B) / Z(Λ | B)`.
pub fn correlation<F: Scalar>(
    model: &InteractionModel<F>,
    pinned: SiteSet,
    volume: SiteSet,
    boundary: SiteSet,
) -> Result<Complex<F>, EvalError> {
    let denom = partition_function(model, PartitionQuery::plain(volume).with_boundary(boundary));
    if denom.norm() <= denominator_floor(model, volume) {
        return Err(EvalError::VanishingDenominator(format!(
            "|Z({volume:?} | {boundary:?})| = {:e} below the floor",
            denom.norm().to_f64().unwrap_or(f64::NAN)
        )));
    }
    let numer = partition_function(
        model,
        PartitionQuery { pinned, volume, boundary },
    );
    Ok(numer / denom)
}

/// The effective activity `ẑ(x, Λ | B) = R({x}, Λ | B)` for `x ∉ Λ`.
pub fn effective_activity<F: Scalar>(
    model: &InteractionModel<F>,
    site: Site,
    volume: SiteSet,
    boundary: SiteSet,
) -> Result<Complex<F>, EvalError> {
    if volume.contains(site) {
        return Err(EvalError::SiteInVolume(site));
    }
    correlation(model, SiteSet::singleton(site), volume, boundary)
}

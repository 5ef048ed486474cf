//! Lattice-gas models: activities, sparse multi-body interactions, and the
//! conditional weights built from them.
//!
//! An interaction assigns a complex weight `W(X)` to every non-empty subset
//! `X` of the lattice; all but finitely many weights are 1 and only the
//! non-unit ones are stored. The conditional extension used throughout is
//!
//! ```text
//! W(X | B) = ∏_{C ⊆ B} W(X ∪ C)   if X ∩ B = ∅,
//!          = 0                     if X = {x} with x ∈ B,
//!          = 1                     otherwise,
//! ```
//!
//! with the Boltzmann factor `κ(X | B) = ∏_{∅ ≠ S ⊆ X} W(S | B)` relative to
//! a pinned boundary `B` (and `κ = 0` as soon as `X` meets `B`).

use crate::error::ModelError;
use crate::scalar::{real, Scalar};
use crate::sites::{Site, SiteSet, MAX_SITES};
use num_complex::Complex;
use num_traits::{One, Zero};
use std::collections::BTreeMap;

/// Tolerance for `exp(-V(X)) = W(X)` when both tables are stored.
pub const POTENTIAL_CONSISTENCY_TOL: f64 = 1e-12;

/// A finite lattice gas: per-site complex activities plus a sparse table of
/// non-unit interaction weights, optionally backed by a potential `V` with
/// `W = exp(-V)`.
#[derive(Debug, Clone, PartialEq)]
pub struct InteractionModel<F: Scalar> {
    n: usize,
    activity: Vec<Complex<F>>,
    w_entries: BTreeMap<SiteSet, Complex<F>>,
    potential: Option<BTreeMap<SiteSet, Complex<F>>>,
}

impl<F: Scalar> InteractionModel<F> {
    /// A model with the given activities and no interactions (ideal gas).
    pub fn new(activity: Vec<Complex<F>>) -> Result<Self, ModelError> {
        let n = activity.len();
        if n > MAX_SITES {
            return Err(ModelError::TooManySites(n));
        }
        if activity.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(ModelError::NonFinite("activity"));
        }
        Ok(InteractionModel { n, activity, w_entries: BTreeMap::new(), potential: None })
    }

    /// Stores a non-unit interaction weight. Rejects the empty subset, exact
    /// units (those must stay implicit), duplicates and out-of-range sites.
    pub fn set_interaction(&mut self, subset: SiteSet, w: Complex<F>) -> Result<(), ModelError> {
        self.check_subset(subset)?;
        if !w.re.is_finite() || !w.im.is_finite() {
            return Err(ModelError::NonFinite("interaction weight"));
        }
        if w == Complex::one() {
            return Err(ModelError::UnitEntry(subset));
        }
        if self.w_entries.contains_key(&subset) {
            return Err(ModelError::DuplicateSubset(subset));
        }
        self.w_entries.insert(subset, w);
        Ok(())
    }

    /// Builder-style [`InteractionModel::set_interaction`].
    pub fn with_interaction(mut self, subset: SiteSet, w: Complex<F>) -> Result<Self, ModelError> {
        self.set_interaction(subset, w)?;
        Ok(self)
    }

    /// Stores a potential value `V(subset)` and keeps `W = exp(-V)` in sync.
    ///
    /// If the subset already carries an explicit weight the two must agree
    /// within [`POTENTIAL_CONSISTENCY_TOL`]; the stored weight wins. When
    /// `exp(-V)` is the unit weight exactly, only the potential is recorded.
    pub fn set_potential(&mut self, subset: SiteSet, v: Complex<F>) -> Result<(), ModelError> {
        self.check_subset(subset)?;
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(ModelError::NonFinite("potential value"));
        }
        let pot = self.potential.get_or_insert_with(BTreeMap::new);
        if pot.contains_key(&subset) {
            return Err(ModelError::DuplicateSubset(subset));
        }
        let w = (-v).exp();
        let existing = self.w_entries.get(&subset).copied();
        match existing {
            Some(stored) => {
                let dev = (stored - w).norm().to_f64().unwrap_or(f64::INFINITY);
                if dev > POTENTIAL_CONSISTENCY_TOL {
                    return Err(ModelError::PotentialMismatch { subset, deviation: dev });
                }
            }
            None => {
                // Only an exact unit stays implicit; nearly-unit weights are
                // stored like any other value.
                if w != Complex::one() {
                    self.w_entries.insert(subset, w);
                }
            }
        }
        pot.insert(subset, v);
        Ok(())
    }

    /// Builder-style [`InteractionModel::set_potential`].
    pub fn with_potential(mut self, subset: SiteSet, v: Complex<F>) -> Result<Self, ModelError> {
        self.set_potential(subset, v)?;
        Ok(self)
    }

    fn check_subset(&self, subset: SiteSet) -> Result<(), ModelError> {
        if subset.is_empty() {
            return Err(ModelError::EmptySubset);
        }
        if !subset.is_subset_of(self.lattice()) {
            return Err(ModelError::SiteOutOfRange {
                site: subset.max_site().unwrap(),
                n: self.n,
            });
        }
        Ok(())
    }

    pub fn site_count(&self) -> usize {
        self.n
    }

    /// The full lattice `{0, .., n-1}` as a set.
    pub fn lattice(&self) -> SiteSet {
        SiteSet::full(self.n)
    }

    pub fn activity(&self, site: Site) -> Complex<F> {
        self.activity[site]
    }

    pub fn activities(&self) -> &[Complex<F>] {
        &self.activity
    }

    /// Largest activity modulus over the lattice (0 for an empty lattice).
    pub fn max_activity_norm(&self) -> F {
        self.activity
            .iter()
            .map(|z| z.norm())
            .fold(F::zero(), F::max)
    }

    /// The interaction weight `W(subset)`; 1 unless explicitly stored.
    pub fn w(&self, subset: SiteSet) -> Complex<F> {
        debug_assert!(!subset.is_empty(), "W is only defined on non-empty subsets");
        self.w_entries
            .get(&subset)
            .copied()
            .unwrap_or_else(Complex::one)
    }

    /// Stored (non-unit) entries in ascending canonical subset order.
    pub fn w_entries(&self) -> impl Iterator<Item = (SiteSet, Complex<F>)> + '_ {
        self.w_entries.iter().map(|(&k, &v)| (k, v))
    }

    /// Stored entries whose subset contains `site`.
    pub fn entries_containing(&self, site: Site) -> impl Iterator<Item = (SiteSet, Complex<F>)> + '_ {
        self.w_entries().filter(move |(k, _)| k.contains(site))
    }

    /// The potential table, if the model carries one.
    pub fn potential(&self) -> Option<&BTreeMap<SiteSet, Complex<F>>> {
        self.potential.as_ref()
    }

    /// The conditional weight `W(subset | boundary)`.
    pub fn w_conditional(&self, subset: SiteSet, boundary: SiteSet) -> Complex<F> {
        assert!(!subset.is_empty(), "W(X|B) requires a non-empty X");
        if !subset.is_disjoint(boundary) {
            return if subset.len() == 1 { Complex::zero() } else { Complex::one() };
        }
        // ∏_{C ⊆ B} W(X ∪ C): a stored key K contributes exactly when
        // K ⊇ X and K ∖ X ⊆ B; everything else is an implicit 1.
        let mut out = Complex::one();
        for (k, w) in &self.w_entries {
            if subset.is_subset_of(*k) && (*k - subset).is_subset_of(boundary) {
                out = out * *w;
            }
        }
        out
    }

    /// The Boltzmann factor `κ(subset | boundary)` relative to the boundary.
    ///
    /// `κ(∅|B) = 1`, and `κ = 0` as soon as the subset meets the boundary.
    pub fn kappa_conditional(&self, subset: SiteSet, boundary: SiteSet) -> Complex<F> {
        if subset.is_empty() {
            return Complex::one();
        }
        if !subset.is_disjoint(boundary) {
            return Complex::zero();
        }
        // ∏_{∅≠S⊆X} W(S|B) collapses to one factor per stored key K with
        // K ⊆ X ∪ B and K ∩ X ≠ ∅ (via S = K ∩ X, C = K ∩ B).
        let pool = subset | boundary;
        let mut out = Complex::one();
        for (k, w) in &self.w_entries {
            if k.is_subset_of(pool) && !k.is_disjoint(subset) {
                out = out * *w;
            }
        }
        out
    }

    /// The free Boltzmann factor `κ(subset) = κ(subset | ∅)`.
    pub fn kappa(&self, subset: SiteSet) -> Complex<F> {
        self.kappa_conditional(subset, SiteSet::EMPTY)
    }

    /// The activity monomial `z^subset = ∏_{x ∈ subset} z(x)`.
    pub fn monomial(&self, subset: SiteSet) -> Complex<F> {
        subset
            .sites()
            .fold(Complex::one(), |acc, x| acc * self.activity[x])
    }

    /// Materializes the conditioned model `W' = W(· | boundary)` as a fresh
    /// interaction table over the same lattice and activities.
    ///
    /// Sites of the boundary get an explicit zero singleton weight, so every
    /// configuration meeting the boundary carries Boltzmann factor 0; for
    /// subsets disjoint from the boundary the stored key `K` lands its
    /// weight at `K ∖ boundary`. The potential table is not carried over.
    pub fn conditioned(&self, boundary: SiteSet) -> InteractionModel<F> {
        if boundary.is_empty() {
            let mut out = self.clone();
            out.potential = None;
            return out;
        }
        let mut out = InteractionModel {
            n: self.n,
            activity: self.activity.clone(),
            w_entries: BTreeMap::new(),
            potential: None,
        };
        let mut candidates: Vec<SiteSet> = self
            .w_entries
            .keys()
            .map(|&k| k - boundary)
            .filter(|k| !k.is_empty())
            .collect();
        candidates.extend(boundary.sites().map(SiteSet::singleton));
        candidates.sort_unstable();
        candidates.dedup();
        for y in candidates {
            let w = self.w_conditional(y, boundary);
            if w != Complex::one() {
                out.w_entries.insert(y, w);
            }
        }
        out
    }
}

/// Per-site weights `r(x) ∈ [0, 1)` and `α(x) = r(x) / (1 − r(x))` used by
/// the zero-freeness criteria. Both vectors are stored so either view is
/// available without rounding surprises.
#[derive(Debug, Clone, PartialEq)]
pub struct CriterionParams<F: Scalar> {
    r: Vec<F>,
    alpha: Vec<F>,
}

impl<F: Scalar> CriterionParams<F> {
    /// Builds from radii `r(x) ∈ [0, 1)`.
    pub fn from_r(r: Vec<F>) -> Result<Self, ModelError> {
        for (x, &v) in r.iter().enumerate() {
            if !v.is_finite() || v < F::zero() || v >= F::one() {
                return Err(ModelError::BadCriterionWeight(format!(
                    "r({x}) = {v} must lie in [0, 1)"
                )));
            }
        }
        let alpha = r.iter().map(|&v| v / (F::one() - v)).collect();
        Ok(CriterionParams { r, alpha })
    }

    /// Builds from weights `α(x) ≥ 0`; radii become `α / (1 + α)`.
    pub fn from_alpha(alpha: Vec<F>) -> Result<Self, ModelError> {
        for (x, &v) in alpha.iter().enumerate() {
            if !v.is_finite() || v < F::zero() {
                return Err(ModelError::BadCriterionWeight(format!(
                    "alpha({x}) = {v} must be finite and non-negative"
                )));
            }
        }
        let r = alpha.iter().map(|&v| v / (F::one() + v)).collect();
        Ok(CriterionParams { r, alpha })
    }

    /// Constant `α` across `n` sites.
    pub fn constant_alpha(n: usize, alpha: F) -> Result<Self, ModelError> {
        Self::from_alpha(vec![alpha; n])
    }

    /// Constant `r` across `n` sites.
    pub fn constant_r(n: usize, r: F) -> Result<Self, ModelError> {
        Self::from_r(vec![r; n])
    }

    pub fn len(&self) -> usize {
        self.r.len()
    }

    pub fn is_empty(&self) -> bool {
        self.r.is_empty()
    }

    pub fn r(&self, site: Site) -> F {
        self.r[site]
    }

    pub fn alpha(&self, site: Site) -> F {
        self.alpha[site]
    }

    pub fn r_slice(&self) -> &[F] {
        &self.r
    }

    pub fn alpha_slice(&self) -> &[F] {
        &self.alpha
    }

    /// `α^X = ∏_{x ∈ X} α(x)`.
    pub fn alpha_pow(&self, subset: SiteSet) -> F {
        subset.sites().fold(F::one(), |acc, x| acc * self.alpha[x])
    }

    /// `∏_{x ∈ X} (1 − r(x))`.
    pub fn one_minus_r_pow(&self, subset: SiteSet) -> F {
        subset
            .sites()
            .fold(F::one(), |acc, x| acc * (F::one() - self.r[x]))
    }

    /// `∏_{x ∈ X} (1 + r(x))`.
    pub fn one_plus_r_pow(&self, subset: SiteSet) -> F {
        subset
            .sites()
            .fold(F::one(), |acc, x| acc * (F::one() + self.r[x]))
    }
}

/// Round-trip slack `r = α/(1+α)` guaranteed by the paired storage.
pub fn params_round_trip_tol<F: Scalar>() -> F {
    real(1e-15)
}

//! Error types shared across the crate.

use crate::sites::{Site, SiteSet};
use thiserror::Error;

/// Rejections raised while building or ingesting a model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("lattice size {0} exceeds the supported maximum of 30 sites")]
    TooManySites(usize),

    #[error("activity vector has length {got}, lattice has {expected} sites")]
    ActivityLength { got: usize, expected: usize },

    #[error("site index {site} out of range for a lattice of {n} sites")]
    SiteOutOfRange { site: Site, n: usize },

    #[error("interaction entries on the empty subset are not allowed")]
    EmptySubset,

    #[error("interaction entry on {0:?} equals 1 exactly; unit weights must stay implicit")]
    UnitEntry(SiteSet),

    #[error("duplicate entry for subset {0:?}")]
    DuplicateSubset(SiteSet),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("potential/interaction mismatch on {subset:?}: |exp(-V) - W| = {deviation:.3e} exceeds 1e-12")]
    PotentialMismatch { subset: SiteSet, deviation: f64 },

    #[error("criterion weight out of range: {0}")]
    BadCriterionWeight(String),
}

/// Failures raised while evaluating queries on a valid model.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("vanishing denominator: {0}")]
    VanishingDenominator(String),

    #[error("query site {0} lies inside the volume")]
    SiteInVolume(Site),

    #[error("operation requires a potential table, but the model stores none")]
    MissingPotential,

    #[error("recursion depth guard exhausted")]
    DepthGuardExceeded,

    #[error("edge {edge:?} is not incident to site {site}")]
    EdgeNotIncident { edge: SiteSet, site: Site },

    #[error("site {site} has degree {degree}, above the allowed Delta = {max}")]
    DegreeExceeded { site: Site, degree: usize, max: f64 },

    #[error("table support {support:?} does not contain the volume {volume:?}")]
    SupportTooSmall { support: SiteSet, volume: SiteSet },

    #[error("no convergence after {iterations} sweeps; last residual {residual:.3e}")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

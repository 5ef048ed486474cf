//! Exact finite-volume machinery for classical lattice gases with complex
//! activities and complex multi-body interactions.
//!
//! The crate revolves around a sparse [`model::InteractionModel`]: a finite
//! lattice of at most 30 sites, one complex activity per site, and a table of
//! interaction weights on subsets (absent subsets carry weight exactly 1).
//! On top of it sit
//!
//! * [`exact`] — grand partition functions `Z(X, Λ | B)`, correlations and
//!   effective activities by direct configuration enumeration,
//! * [`criteria`] — per-site zero-freeness checks (Dobrushin-style product
//!   criterion, a Kotecký–Preiss-like variant with and without user supplied
//!   weights, and a potential-based improved bound),
//! * [`recursion`] — the bond-interpolation identities and the recursive
//!   evaluation of effective activities they induce,
//! * [`hypergraph`] — the hard-core specialization: independence polynomials,
//!   degree-based activity radii, and polydisc zero-freeness scans,
//! * [`ks`] — Kirkwood–Salsburg kernels, the associated fixed-point operator
//!   and its Picard/Jacobi solver.
//!
//! All numerics are generic over the floating scalar through [`Scalar`];
//! the aliases below pin the double-precision instantiation used by the CLI
//! and by every documented tolerance.

pub mod criteria;
pub mod error;
pub mod exact;
pub mod hypergraph;
pub mod ks;
pub mod model;
pub mod recursion;
pub mod scalar;
pub mod sites;

pub use error::{EvalError, ModelError};
pub use scalar::Scalar;
pub use sites::{Site, SiteSet, MAX_SITES};

pub use num_complex::Complex;

/// Double-precision real scalar used by the concrete aliases.
pub type Real = f64;
/// Double-precision complex scalar.
pub type C64 = Complex<f64>;
/// Interaction model over [`Real`].
pub type Model64 = model::InteractionModel<Real>;
/// Criterion weights over [`Real`].
pub type Params64 = model::CriterionParams<Real>;
/// Correlation-function table over [`C64`] entries.
pub type CorrelationTable64 = ks::CorrelationTable<Real>;

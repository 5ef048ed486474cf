//! Floating scalar abstraction.

use num_traits::{Float, FromPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar the whole crate is generic over.
///
/// `f32` and `f64` both qualify; the documented tolerances assume `f64`.
/// The blanket impl keeps the bound cheap to satisfy: anything that floats,
/// converts from `f64` constants and can cross thread boundaries works.
pub trait Scalar: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

impl<T> Scalar for T where T: Float + FromPrimitive + Debug + Display + Send + Sync + 'static {}

/// Injects an `f64` constant (tolerances, literals) into the scalar type.
pub fn real<F: Scalar>(x: f64) -> F {
    F::from_f64(x).expect("f64 constant must convert into the scalar type")
}

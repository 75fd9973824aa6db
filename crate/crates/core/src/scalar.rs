//! The floating-point abstraction every numerical routine is written against.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar usable throughout the crate: `f32` or `f64` (or any other
/// IEEE-like type providing the same operations).
pub trait Real: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {}

impl<T> Real for T where T: Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static {}

/// Converts an `f64` literal into `T`.
#[inline]
pub(crate) fn lit<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("literal not representable in scalar type")
}

#[inline]
pub(crate) fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

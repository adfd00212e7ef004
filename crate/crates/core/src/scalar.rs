use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar the numerical core is generic over.
///
/// Implemented for `f32` and `f64`. All tolerances quoted in the docs are for
/// `f64`; for `f32` they are clamped to a small multiple of machine epsilon
/// through [`tolerance`].
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into the working scalar.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal is representable")
}

#[inline]
pub fn from_usize<T: Scalar>(n: usize) -> T {
    T::from_usize(n).expect("usize is representable")
}

#[inline]
pub fn from_i64<T: Scalar>(n: i64) -> T {
    T::from_i64(n).expect("i64 is representable")
}

#[inline]
pub fn to_f64<T: Scalar>(x: T) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// `max(requested, 64 eps)`: the requested absolute tolerance, never tighter
/// than the precision of `T` allows.
#[inline]
pub fn tolerance<T: Scalar>(requested: f64) -> T {
    lit::<T>(requested).max(T::epsilon() * lit(64.0))
}

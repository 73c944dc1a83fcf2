use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Floating point scalar used for edge weights, probabilities and costs.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Converts an `f64` literal into `T`.
#[inline]
pub fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("f64 literal representable in scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn count<T: Scalar>(k: usize) -> T {
    T::from_usize(k).expect("count representable in scalar type")
}

/// `(1 - x)^n` evaluated as `exp(n * ln(1 - x))`, clamped to 0 once `x >= 1`.
#[inline]
pub fn one_minus_pow<T: Scalar>(x: T, n: usize) -> T {
    if x >= T::one() {
        T::zero()
    } else {
        (count::<T>(n) * (-x).ln_1p()).exp()
    }
}

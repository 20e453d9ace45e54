//! Scalar abstraction: the whole model is generic over `f32`/`f64`.

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar the model is generic over.
///
/// `of` is a convenience for lossy conversion of literal constants; it panics
/// only for NaN-free `f64` values outside the target range, which cannot occur
/// for the physical constants used here.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("constant not representable in scalar type")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over a generic scalar.
pub type C<T> = Complex<T>;

/// `0 + 0i`.
pub fn czero<T: Scalar>() -> C<T> {
    C::new(T::zero(), T::zero())
}

/// `1 + 0i`.
pub fn cone<T: Scalar>() -> C<T> {
    C::new(T::one(), T::zero())
}

/// `0 + 1i`.
pub fn ci<T: Scalar>() -> C<T> {
    C::new(T::zero(), T::one())
}

/// Real constant promoted to the complex plane.
pub fn cr<T: Scalar>(x: T) -> C<T> {
    C::new(x, T::zero())
}

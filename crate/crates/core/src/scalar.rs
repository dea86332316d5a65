//! Scalar abstraction: every solver in this crate is generic over the
//! floating-point type.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive};

/// Floating-point scalar (`f32` or `f64`).
pub trait Real:
    Float + FloatConst + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Conversion from an `f64` literal.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must convert to the scalar type")
    }

    /// Lossy view as `f64`, for error messages and reports.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    #[inline]
    fn coth(self) -> Self {
        self.cosh() / self.sinh()
    }

    /// Inverse of `coth` on (1, ∞): acoth(x) = ½ ln((x+1)/(x−1)).
    #[inline]
    fn acoth(self) -> Self {
        let one = Self::one();
        ((self + one) / (self - one)).ln() / Self::of(2.0)
    }
}

impl<T> Real for T where
    T: Float + FloatConst + FromPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
}

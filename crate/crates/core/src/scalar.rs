use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive};

/// Floating-point type the process and statistics are generic over.
///
/// Implemented for `f32` and `f64`. Sampling always draws its uniform
/// variates in `f64` and converts, so a given seed produces the same variate
/// stream regardless of the scalar type.
pub trait Scalar:
    Weight + Float + FromPrimitive + ToPrimitive + Sum + Debug + Display
{
    fn from_f64_lossy(x: f64) -> Self {
        <Self as FromPrimitive>::from_f64(x).expect("f64 converts to every Scalar")
    }

    fn from_u64_lossy(x: u64) -> Self {
        <Self as FromPrimitive>::from_u64(x).expect("u64 converts to every Scalar")
    }

    fn to_f64_lossy(self) -> f64 {
        ToPrimitive::to_f64(&self).expect("every Scalar converts to f64")
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Arithmetic the process weights are generic over.
///
/// Floats are the working types. [`BigRational`] gives exact arithmetic:
/// the sum law holds with equality and scaling every weight by a rational
/// constant leaves every sampling decision unchanged.
pub trait Weight: Num + Clone + PartialOrd + Debug + Send + Sync + 'static {
    fn from_count(x: u64) -> Self;

    /// Converts a uniform variate drawn in `f64`. Exact for rationals.
    fn from_variate(u: f64) -> Self;

    fn approx_f64(&self) -> f64;
}

/// Strictly greater than zero; false for NaN.
pub(crate) fn is_positive<T: Weight>(x: &T) -> bool {
    x.partial_cmp(&T::zero()) == Some(std::cmp::Ordering::Greater)
}

macro_rules! float_weight {
    ($($t:ty)*) => ($(
        impl Weight for $t {
            fn from_count(x: u64) -> Self {
                x as $t
            }

            fn from_variate(u: f64) -> Self {
                u as $t
            }

            fn approx_f64(&self) -> f64 {
                *self as f64
            }
        }
    )*)
}

float_weight!(f32 f64);

impl Weight for BigRational {
    fn from_count(x: u64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }

    fn from_variate(u: f64) -> Self {
        BigRational::from_float(u).expect("uniform variates are finite")
    }

    fn approx_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

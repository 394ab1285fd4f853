//! Scalar abstraction shared by the numeric modules.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar used for weights, probabilities and fitted exponents.
///
/// Implemented for `f32` and `f64`. Graph algorithms stay integral; only the
/// generator and the tail fitter are parameterised over this trait.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + FromStr + Default + Send + Sync + 'static
{
    /// Lossy conversion from `f64`, used for literals and RNG draws.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    #[inline]
    fn from_count(x: usize) -> Self {
        Self::from_usize(x).expect("count representable")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// Base-2 logarithm of a count, the logarithm used throughout the crate.
#[inline]
pub fn log2_count<R: Real>(n: usize) -> R {
    R::from_count(n).log2()
}

//! Floating-point scalar abstraction.
//!
//! The geometric and radio formulas are written once against [`Scalar`] and
//! instantiated for `f32` or `f64`. Random sampling always draws `f64`
//! variates and converts, so a seed produces the same scene at either
//! precision up to rounding.

use core::fmt::{Debug, Display};
use core::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used throughout the simulator: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + Debug
    + Display
    + Default
    + Sum
    + Send
    + Sync
    + 'static
{
    /// Converts an `f64` literal or sample into this type.
    #[inline]
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 is representable in every Scalar")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().expect("Scalar converts to f64")
    }

    /// `10^(db/10)`.
    #[inline]
    fn db_to_linear(db: Self) -> Self {
        (db * Self::LN_10() / Self::lit(10.0)).exp()
    }

    /// `10·log10(linear)`.
    #[inline]
    fn linear_to_db(linear: Self) -> Self {
        Self::lit(10.0) * linear.log10()
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

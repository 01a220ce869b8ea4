//! Scalar abstraction shared by every numeric routine in the crate.

use nalgebra::RealField;
use num_traits::ToPrimitive;

/// Floating-point scalar the kinematics and dynamics are generic over.
///
/// Implemented for `f32` and `f64`. Everything the engine needs beyond
/// `RealField` is a lossless way to lift `f64` literals and to read values
/// back out for reporting.
pub trait Real: RealField + Copy + ToPrimitive {
    /// Converts an `f64` literal into this scalar.
    #[inline]
    fn lit(x: f64) -> Self {
        nalgebra::convert(x)
    }

    /// Converts back to `f64` (used for reporting and CSV output).
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

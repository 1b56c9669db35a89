//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use nalgebra::RealField;
use num_traits::{FromPrimitive, ToPrimitive};

/// Real floating-point scalar the estimators are generic over.
///
/// Implemented for `f32` and `f64`. Validation tolerances are per-type so
/// that single precision inputs are not rejected for roundoff that double
/// precision would never produce.
pub trait Scalar:
    RealField + Copy + FromPrimitive + ToPrimitive + Display + LowerExp + Debug + Send + Sync + 'static
{
    /// Allowed deviation of the component weight sum from one.
    const WEIGHT_SUM_TOLERANCE: f64;
    /// Allowed covariance asymmetry, relative to the largest absolute entry.
    const SYMMETRY_TOLERANCE: f64;

    /// Converts an `f64` literal into this scalar type.
    #[inline]
    fn cast(value: f64) -> Self {
        Self::from_f64(value).expect("f64 is representable in every Scalar type")
    }

    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const WEIGHT_SUM_TOLERANCE: f64 = 1e-9;
    const SYMMETRY_TOLERANCE: f64 = 1e-12;
}

impl Scalar for f32 {
    const WEIGHT_SUM_TOLERANCE: f64 = 1e-5;
    const SYMMETRY_TOLERANCE: f64 = 1e-6;
}

/// Numerically stable `ln Σ exp(v)`. Returns `-inf` when every term is `-inf`.
pub fn log_sum_exp<T: Scalar>(values: &[T]) -> T {
    let max = values
        .iter()
        .copied()
        .fold(T::cast(f64::NEG_INFINITY), |m, v| if v > m { v } else { m });
    if !max.is_finite() {
        return max;
    }
    let sum = values.iter().fold(T::zero(), |acc, &v| acc + (v - max).exp());
    max + sum.ln()
}

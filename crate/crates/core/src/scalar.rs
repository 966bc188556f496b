//! Floating-point abstraction shared by the grid, interpolation and
//! refinement code.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar type the interpolation machinery is generic over.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute distance (on the reference interval `[-1, 1]`) below which a
    /// query coordinate is treated as sitting exactly on a node.
    fn node_hit_tolerance() -> Self;

    /// Lossy conversion from `f64`, used for literals and configuration values.
    fn lit(value: f64) -> Self {
        Self::from_f64(value).expect("f64 literal representable in scalar type")
    }

    /// Lossy conversion to `f64`, used for reporting.
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    fn node_hit_tolerance() -> Self {
        1e-14
    }
}

impl Scalar for f32 {
    fn node_hit_tolerance() -> Self {
        // ~8 ulp at 1.0
        1e-6
    }
}

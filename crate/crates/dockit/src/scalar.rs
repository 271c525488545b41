//! Scalar abstraction for all geometry, layout, reward, and metric math.
//!
//! Everything numeric in this crate is generic over [`Scalar`], so the same
//! layout and reward code runs at `f32` or `f64`. The crate root exports
//! concrete `f64` aliases ([`crate::Px`], [`crate::Rect`], ...) which the
//! parser, pipeline, and CLI use.

use std::fmt::{Debug, Display};

/// Floating-point scalar: `f32` or `f64`.
pub trait Scalar:
    num_traits::Float
    + num_traits::FromPrimitive
    + num_traits::ToPrimitive
    + Debug
    + Display
    + Default
    + Send
    + Sync
    + 'static
{
    /// Convert an `f64` constant into this scalar type.
    fn of(v: f64) -> Self {
        Self::from_f64(v).expect("finite f64 constant must be representable")
    }

    /// Widen to `f64` (exact for f32/f64).
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar must convert to f64")
    }

    fn from_usize_lossy(v: usize) -> Self {
        Self::of(v as f64)
    }

    fn half(self) -> Self {
        self / Self::of(2.0)
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

//! Scalar abstraction for the geometric core.
//!
//! Everything numeric in the ground and clustering stages is written
//! against [`Real`] so the same code runs at `f32` or `f64`. The crate
//! root pins the default pipeline to `f64`.

use num_traits::{Float, FromPrimitive, NumAssign, ToPrimitive};

/// Floating-point scalar usable throughout the geometric pipeline.
pub trait Real:
    Float
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Default
    + std::fmt::Debug
    + std::fmt::Display
    + Send
    + Sync
    + 'static
{
}

impl<T> Real for T where
    T: Float
        + FromPrimitive
        + ToPrimitive
        + NumAssign
        + Default
        + std::fmt::Debug
        + std::fmt::Display
        + Send
        + Sync
        + 'static
{
}

/// Converts an `f64` constant (config value, literal threshold) into `T`.
///
/// Panics only if `T` cannot represent ordinary finite values, which no
/// [`Real`] implementor exhibits.
#[inline]
pub fn cast<T: Real>(value: f64) -> T {
    T::from_f64(value).expect("finite f64 must convert to scalar type")
}

/// Converts a count into `T`.
#[inline]
pub fn cast_usize<T: Real>(value: usize) -> T {
    T::from_usize(value).expect("usize must convert to scalar type")
}

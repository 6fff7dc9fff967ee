//! Floating-point abstraction shared by every generic type in the crate.

use std::fmt::{Debug, Display};

use num_traits::{Float, FloatConst, FromPrimitive};

/// Real scalar the statistics are computed in: `f32` or `f64`.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Converts an `f64` literal into the scalar type.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }

    #[inline]
    fn half() -> Self {
        Self::lit(0.5)
    }

    #[inline]
    fn two() -> Self {
        Self::lit(2.0)
    }

    /// Smallest kernel denominator magnitude treated as invertible by default.
    ///
    /// `1e-9` for `f64`; `16ε` for coarser types, where `cos(π/2)` rounds to
    /// about `ε`.
    fn default_singular_eps() -> Self {
        Self::lit(1e-9).max(Self::epsilon() * Self::lit(16.0))
    }

    /// Absolute slack used by the normalization invariants.
    fn invariant_tol() -> Self {
        Self::lit(1e-12).max(Self::epsilon() * Self::lit(64.0))
    }
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Outcome label of a two-valued observable, `+1` or `-1`.
pub const SIGNS: [i8; 2] = [1, -1];

#[inline]
pub(crate) fn sign<T: Scalar>(s: i8) -> T {
    if s >= 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Index of a ±1 label in `[plus, minus]` storage order.
#[inline]
pub(crate) fn slot(s: i8) -> usize {
    if s >= 0 {
        0
    } else {
        1
    }
}

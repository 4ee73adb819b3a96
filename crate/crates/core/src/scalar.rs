//! Floating-point scalar abstraction for the walk engine.
//!
//! Everything numeric in the crate is generic over [`WalkFloat`], which
//! bundles the arithmetic traits the engine needs with the two tolerance
//! levels that govern validation: a strict tolerance for unitarity and
//! probability checks, and a looser rejection threshold for state
//! normalization at construction time. Both scale with the precision of the
//! scalar, so `f32` instantiations validate against realistic bounds
//! instead of the double-precision ones.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, NumAssign};

/// Scalar type usable as the real/imaginary component of walk amplitudes.
pub trait WalkFloat:
    Float + FloatConst + NumAssign + Sum + Debug + Display + Send + Sync + 'static
{
    /// Tolerance for strict numerical validation: unitarity of supplied
    /// matrices, norm preservation, probability totals.
    fn strict_tol() -> Self;

    /// Largest squared-norm deviation accepted when constructing a state;
    /// inputs within this bound are renormalized, larger ones are rejected.
    fn norm_reject_tol() -> Self;

    /// Convert an `f64` literal into this scalar. Panics only if the value
    /// is not representable, which cannot happen for the finite constants
    /// the engine feeds it.
    fn lit(value: f64) -> Self {
        num_traits::cast(value).expect("finite literal must convert")
    }

    /// Widen to `f64` for reporting and serialization.
    fn to_f64(self) -> f64 {
        num_traits::cast(self).expect("scalar must widen to f64")
    }
}

impl WalkFloat for f64 {
    fn strict_tol() -> Self {
        1e-12
    }

    fn norm_reject_tol() -> Self {
        1e-9
    }
}

impl WalkFloat for f32 {
    fn strict_tol() -> Self {
        1e-5
    }

    fn norm_reject_tol() -> Self {
        1e-4
    }
}

//! Floating-point abstraction shared by the numeric modules.

use std::fmt::{Debug, Display};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, ToPrimitive};

/// Real scalar used by the spectral, statistical and projection code.
///
/// Implemented for `f32` and `f64`. Iterative routines take their default
/// stopping tolerance from [`Scalar::SOLVER_TOL`], so single precision
/// gets a looser target than double precision.
pub trait Scalar:
    Float + FloatConst + FromPrimitive + ToPrimitive + Sum + Debug + Display + Send + Sync + 'static
{
    /// Default absolute tolerance for bisection and eigen-residual checks.
    const SOLVER_TOL: f64;

    /// Converts an `f64` literal. Never fails for finite input.
    #[inline]
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("finite literal")
    }

    #[inline]
    fn of_usize(n: usize) -> Self {
        Self::from_usize(n).expect("usize fits in float")
    }

    #[inline]
    fn of_u64(n: u64) -> Self {
        Self::from_u64(n).expect("u64 fits in float")
    }

    #[inline]
    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Scalar for f32 {
    const SOLVER_TOL: f64 = 1e-5;
}

impl Scalar for f64 {
    const SOLVER_TOL: f64 = 1e-8;
}

//! Scalar abstraction shared by every numerical module.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign, ToPrimitive};

/// Real floating-point scalar the library is generic over (`f32` or `f64`).
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + ToPrimitive
    + NumAssign
    + Sum
    + Default
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable")
    }

    fn from_usize_lossy(n: usize) -> Self {
        Self::from_usize(n).expect("usize representable")
    }

    fn from_i64_lossy(n: i64) -> Self {
        Self::from_i64(n).expect("i64 representable")
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }

    /// `max(floor, scale * epsilon)`: a tolerance that stays meaningful in `f32`.
    fn tol(floor: f64, scale: f64) -> Self {
        let floor = Self::lit(floor);
        let rel = Self::lit(scale) * Self::epsilon();
        if floor > rel {
            floor
        } else {
            rel
        }
    }
}

impl Real for f32 {}
impl Real for f64 {}

//! Scalar abstraction for scores and payoffs.
//!
//! The engine and the group-payoff analytics are generic over the numeric
//! type used for payoffs, so the same code runs on integer points, floats,
//! or exact rationals. Concrete aliases live at the crate root.

use std::fmt::{Debug, Display};

use num_traits::{FromPrimitive, Num, ToPrimitive};

/// Numeric type usable as a payoff/score value.
///
/// Implemented for anything with ring arithmetic, ordering, and primitive
/// conversions — in practice `i64`, `f32`/`f64`, and `Ratio<i64>`.
pub trait Scalar:
    Num + FromPrimitive + ToPrimitive + Copy + PartialOrd + Display + Debug + Send + Sync + 'static
{
    /// Converts a player/turn count into the scalar domain.
    ///
    /// Counts in this crate are small (roster sizes, turn counts), so the
    /// conversion is lossless for every supported scalar.
    fn from_count(n: u64) -> Self {
        Self::from_u64(n).expect("count representable in scalar type")
    }

    /// Lossy view as `f64`, used only for report output.
    fn as_f64(self) -> f64 {
        self.to_f64().expect("scalar convertible to f64")
    }
}

impl<T> Scalar for T where
    T: Num
        + FromPrimitive
        + ToPrimitive
        + Copy
        + PartialOrd
        + Display
        + Debug
        + Send
        + Sync
        + 'static
{
}

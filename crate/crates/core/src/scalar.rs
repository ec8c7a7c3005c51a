//! Scalar abstraction for the interval algebra.
//!
//! Erosion and the set operations only need a totally ordered ring with
//! integer offsets, so they are written against this trait. Floating point
//! types are deliberately not covered: they are not `Ord`, and the truth sets
//! built on top of the algebra must be exact.

use std::fmt::Debug;

use num_traits::{FromPrimitive, Num};

/// A totally ordered exact number type usable as an interval endpoint.
pub trait Scalar: Clone + Ord + Num + FromPrimitive + Debug {
    /// Lift a natural offset (the `m`, `n` of an interval spec).
    fn from_offset(k: u32) -> Self {
        Self::from_u32(k).expect("offset fits in scalar")
    }
}

impl<T> Scalar for T where T: Clone + Ord + Num + FromPrimitive + Debug {}

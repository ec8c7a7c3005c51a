//! Proof search, proof checking and exact model checking for a
//! two-dimensional metric temporal logic over the nonnegative rationals.

mod interval;
mod scalar;

pub mod calculus;
pub mod cli;
pub mod engine;
pub mod semantics;
pub mod syntax;

pub use interval::{interval_of, Interval, IntervalSet, Upper};
pub use scalar::Scalar;
pub use syntax::{
    parse_formula, parse_sequent, parse_term, Base, Body, Formula, IntervalSpec, Level, Rel, Sequent, SyntaxError,
    Temporal, Term,
};

/// Exact rationals used by the canonical model.
pub type Rational = num_rational::Ratio<i64>;
pub type RationalInterval = Interval<Rational>;
pub type RationalIntervalSet = IntervalSet<Rational>;

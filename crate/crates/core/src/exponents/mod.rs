//! Exact exponent arithmetic: derived exponents, the condition sets of the
//! existence and nonexistence theorems, and exact feasible regions.
//!
//! Everything here is exact rational arithmetic with `+inf` for bounded
//! data; there is no floating-point evaluation on any decision path.

pub mod comments;
pub mod expr;
pub mod poly;
pub mod rational;
pub mod region;
pub mod sets;

use thiserror::Error;

pub use expr::{Env, Val, Var};
pub use rational::{fmt_rational, int, parse_rational, rat, ExtRational, Rational};
pub use region::{feasible_region, Bound, Interval, Region};
pub use sets::{
    check_existence, check_existence_pq1, check_nonexistence_data,
    check_nonexistence_thresholds, derive, ConditionReport, DerivedExponents, ExponentProfile,
    Outcome, SetId,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExponentError {
    #[error("cannot parse `{0}` as a rational")]
    Parse(String),
    #[error("division by zero in a rational literal")]
    DivisionByZero,
    #[error("invalid profile: {0}")]
    Profile(String),
    #[error("{0}")]
    FreeVariable(String),
}

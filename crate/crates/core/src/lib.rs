//! Checks concavity inclusions for set-valued maps under harmonic m-combinations.
//!
//! The crate is organised bottom-up:
//!
//! - [`set_algebra`]: compact intervals, finite unions of intervals and
//!   boxes, with Minkowski operations and signed inclusion margins.
//! - [`harmonic`]: harmonic m-combinations, dyadic weights, domains and grids.
//! - [`expr`]: a small expression language for closed-form endpoint functions.
//! - [`svf`]: set-valued functions and their combinators.
//! - [`verifier`]: grid sweeps and random search for the concavity properties.
//! - [`report`]: check reports and their canonical JSON encoding.
//! - [`cli`]: the `hmsvf` command-line front end.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod expr;
pub mod harmonic;
pub mod report;
pub mod set_algebra;
pub mod svf;
pub mod verifier;

pub use report::{CheckReport, Verdict};
pub use set_algebra::{Interval, IntervalBox, IntervalUnion, SetValue};
pub use svf::SetValuedFunction;
pub use verifier::{CheckConfig, Property};

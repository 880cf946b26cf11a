//! Exact enumeration of k-flaw preference sets: brute-force counts, closed-form counting
//! formulas, the forest bijection and its lead surgeries, and exponential generating
//! functions over exact rationals.

// Bounds such as `h + 1 <= k` are kept in the form the ranges are stated in.
#![allow(clippy::int_plus_one)]

pub mod certify;
pub mod class;
mod decimal;
pub mod enumerate;
pub mod error;
pub mod forest;
pub mod formulas;
pub mod gf;
pub mod gf_check;
pub mod identities;
pub mod parking;
pub mod series;
pub mod sets;
pub mod surgery;
pub mod tables;

pub use class::ClassSpec;
pub use error::{Error, Result};
pub use parking::PreferenceSet;

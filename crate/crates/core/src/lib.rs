//! Exact intersection-theoretic ultrametrics on sets of curve branches.
//!
//! All arithmetic is over arbitrary-precision rationals. Floating point only
//! appears in display helpers.

pub mod branch_ultrametrics;
pub mod error;
pub mod export;
pub mod graph;
pub mod linalg;
pub mod mumford;
pub mod puiseux;
pub mod rational;
pub mod schema;
pub mod tree;
pub mod ultrametric;

pub use error::{Error, Result};

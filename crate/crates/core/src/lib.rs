//! Non-archimedean computer algebra engine: Novikov-field arithmetic,
//! multivariate Laurent series, gapped A-infinity and Hochschild calculus,
//! superpotential critical points, wall-crossing transforms and quantum
//! cohomology eigenvalues, with desk-scale verification suites.

pub mod ainf;
pub mod floer;
pub mod config;
pub mod critical;
pub mod quantum;
pub mod wallcross;
pub mod error;
pub mod expr;
pub mod fibration;
pub mod novikov;
pub mod selftest;
pub mod series;
pub mod textfmt;

pub use error::{Error, Result};

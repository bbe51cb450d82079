//! Gapped operator systems on finite graded bases: composition, braces,
//! label grading, Hochschild calculus on the reduced complex, relation
//! checkers, and homological perturbation to minimal models.

mod basis;
mod check;
mod hpl;
pub mod models;
mod ops;
mod scalar;
mod system;
mod tensor;

pub use basis::{GradedBasis, LabelClass};
pub use check::{check_ainf, AinfReport, DivisorPairing, Violation};
pub use hpl::{hpl_minimal_model, Contraction};
pub use ops::{act, bracket, braces, compose, cup, hochschild_delta, sharp_sign, unit_cochain};
pub use scalar::Scalar;
pub use system::OperatorSystem;
pub use tensor::Tensor;

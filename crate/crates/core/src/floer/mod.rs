//! Superpotential pipeline over a fixed fiber: m_k series, self Floer
//! cohomology (global and at a point), the Jacobian-division algorithm, and
//! the closed-open composite through the reduced Hochschild complex.

mod co;
mod hf;
mod jacobian;
mod mk;
pub(crate) mod model;

pub use co::{co_c1, pproj, qhat_c1, theta, theta_preserves_label_degree};
pub use hf::{hf_dimension, m1_matrix_at, novikov_rank, novikov_solve, rank_at, FloerComplex};
pub use jacobian::{jacobian_divide, verify_division};
pub use mk::{
    build_mk, cochain_approx_eq, cochain_insert_unit_multiple, superpotential, MkOperator,
    SeriesCochain,
};
pub use model::{deformed_chain_model, DiskClass, PotentialModel, PotentialModelSpec};

//! Multivariate Laurent series over the Novikov field: elements of
//! `Lambda[[Y_1^pm, ..., Y_n^pm]]` with a global energy cutoff, evaluation at
//! points of `(Lambda^*)^n`, logarithmic derivatives, exponentials,
//! tropicalization and affinoid-domain membership.

mod domain;
mod laurent;

pub use domain::PolyhedralDomain;
pub use laurent::{LaurentSeries, MonomialExponent, TorusPoint, DEFAULT_ENERGY_CUTOFF};

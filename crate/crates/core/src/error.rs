//! Structured errors shared by every module.

use thiserror::Error;

/// Errors raised by the algebra kernel.
///
/// Operations that can fail return `Result<T, Error>`; the variants carry
/// enough context to locate the offending entry or coefficient.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    /// All terms lie below the truncation order, so the leading structure
    /// (valuation, inverse, pivot decision, ...) is unknown.
    #[error("truncated zero: {0}")]
    TruncatedZero(String),

    /// exp requires an argument in the valuation ring (val >= 0).
    #[error("negative valuation: {0}")]
    NegativeValuation(String),

    /// Newton-polygon recursion exceeded the configured ramification depth.
    #[error("ramification depth {depth} exceeded while separating roots")]
    RamificationDepthExceeded { depth: u32 },

    /// The slope polynomial has a zero root where a nonzero one is required.
    #[error("leading degeneracy: {0}")]
    LeadingDegeneracy(String),

    /// Mixed ranks in a multivariate operation.
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },

    /// exp of a Laurent series needs every term of positive scalar valuation.
    #[error("term with non-positive valuation: {0}")]
    NonPositiveValuationTerm(String),

    /// Evaluation at a point whose valuation contribution is unbounded below.
    #[error("divergent evaluation: {0}")]
    DivergentEvaluation(String),

    /// Right factor of a composition has a (0, zero-label) entry.
    #[error("curved right factor: composition with a (0,0)-entry is an infinite sum")]
    CurvedRightFactor,

    /// Operator systems over different bases.
    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    /// Brace arguments must be homogeneous in label degree.
    #[error("inhomogeneous label degree: {0}")]
    InhomogeneousLabelDegree(String),

    /// A structure failed the A-infinity relation check.
    #[error("not an A-infinity structure: {0}")]
    NotAInfinity(String),

    /// Contraction data violates a side condition.
    #[error("contraction side condition violated: {0}")]
    ContractionSideConditionViolated(String),

    /// A Maslov-0 curvature term is present where the pipeline requires none.
    #[error("nonzero obstruction: {0}")]
    NonzeroObstruction(String),

    /// A pivot decision cannot be resolved at the current truncation.
    #[error("precision loss: {0}")]
    PrecisionLoss(String),

    /// Vector not expressible through degree-1 products.
    #[error("not generated by degree-1 classes: {0}")]
    NotGenerated(String),

    /// Composition admissibility for Theta failed.
    #[error("curved composition: {0}")]
    CurvedComposition(String),

    /// A coordinate change left the convergence margin at the cutoff.
    #[error("divergence at cutoff: {0}")]
    DivergenceAtCutoff(String),

    /// Fixed-point inversion did not stabilize below the cutoff.
    #[error("no convergence at cutoff: {0}")]
    NonConvergence(String),

    /// Leading complex Jacobian of a critical seed is singular.
    #[error("singular leading Jacobian")]
    SingularLeadingJacobian,

    /// Newton lifting of a critical point did not reach the requested order.
    #[error("no convergence at order: {0}")]
    NoConvergenceAtOrder(String),

    /// A point failed the critical-residual test.
    #[error("not a critical point: {0}")]
    NotCritical(String),

    /// Unknown builtin name.
    #[error("unknown name: {0}")]
    UnknownName(String),

    /// A mirror point maps outside the image of the embedding j.
    #[error("not in image of j: {0}")]
    NotInImage(String),

    /// Expression parse error with byte position.
    #[error("parse error at {pos}: {msg}")]
    ParseError { pos: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, Error>;

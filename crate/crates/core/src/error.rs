use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid layout: {0}")]
    InvalidLayout(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix has eigenvalue {eigenvalue:.3e} below the positivity tolerance")]
    NegativeEigenvalue { eigenvalue: f64 },

    #[error("invalid density operator: {0}")]
    InvalidState(String),

    #[error("invalid partition: {0}")]
    BadPartition(String),

    #[error(
        "marginals disagree on their overlap (trace distance {distance:.3e} > {tolerance:.1e})"
    )]
    OverlapMismatch { distance: f64, tolerance: f64 },

    #[error("invalid quantum Markov chain specification: {0}")]
    InvalidSpec(String),

    #[error("invalid constraint set: {0}")]
    InvalidConstraints(String),

    #[error("conflicting targets for a shared observable ({first} vs {second})")]
    ConstraintConflict { first: f64, second: f64 },

    #[error(
        "dual solver did not converge after {iterations} iterations (residual {residual:.3e})"
    )]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("constraints look infeasible: multiplier norm {norm:.3e} exceeded cap {cap:.1e}")]
    Infeasible { norm: f64, cap: f64 },

    #[error("prior is rank deficient (smallest eigenvalue {min_eigenvalue:.3e})")]
    RankDeficientPrior { min_eigenvalue: f64 },

    #[error("estimator is not compatible with the marginals (trace distance {distance:.3e})")]
    IncompatibleEstimator { distance: f64 },

    #[error("pair {pair} is not compatible with a quantum Markov chain")]
    HypothesisViolated { pair: String },

    #[error("no valid estimator supplied")]
    NoEstimator,

    #[error("invalid tree: {0}")]
    InvalidTree(String),

    #[error("recovery step attaching `{leaf}` through `{anchor}` failed the compatibility check ({report})")]
    RecoveryStep {
        leaf: String,
        anchor: String,
        report: Box<crate::recovery::CompatReport>,
    },

    #[error("incomplete weight list: {0}")]
    IncompleteWeights(String),
}

//! Maximum von Neumann entropy estimation under expectation constraints.
//!
//! The estimator has the exponential-family form `exp(Σ λᵢ Θᵢ)/Z`; the
//! multipliers minimise the smooth convex dual
//! `F(λ) = log Tr exp(H₀ + Σ λᵢ Θᵢ) − Σ λᵢ ⟨Θᵢ⟩`, where `H₀` is zero for plain
//! entropy maximisation and `log ϱ` for a Bayesian update from prior `ϱ`.

mod basis;
mod bayes;
mod constraints;
mod solver;

pub use basis::OperatorBasis;
pub use bayes::{bayesian_update, diagram_commutes, DiagramReport};
pub use constraints::{
    constraints_from_marginals, marginal_constraints, ConstraintSet, DEDUP_TOLERANCE,
};
pub use solver::{
    solve_dual, solve_maxent, DualMethod, DualObjective, DualPoint, MaxEntConfig, MaxEntSolution,
};

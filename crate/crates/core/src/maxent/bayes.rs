use super::{
    constraints_from_marginals, marginal_constraints, solve_dual, solve_maxent, ConstraintSet,
    MaxEntConfig, MaxEntSolution,
};
use crate::error::{Error, Result};
use crate::states::{DensityOperator, MarginalSet};
use crate::tensor::MatrixFunction;

/// Minimum-relative-entropy update of `prior` onto the constraint set: the
/// minimiser of `S(ρ‖prior)` has the form `exp(log prior + Σ λᵢ Θᵢ)/Z`.
pub fn bayesian_update(
    prior: &DensityOperator,
    constraints: &ConstraintSet,
    config: &MaxEntConfig,
) -> Result<MaxEntSolution> {
    let eig = prior.eig();
    let min = eig.min_eigenvalue();
    if min <= eig.cutoff() {
        return Err(Error::RankDeficientPrior {
            min_eigenvalue: min,
        });
    }
    let log_prior = eig.apply(MatrixFunction::Log)?;
    solve_dual(constraints, Some(&log_prior), prior.layout(), config)
}

/// The two sequential update orders and the joint estimator for a pair of
/// overlapping marginals, with their pairwise trace distances.
#[derive(Clone, Debug)]
pub struct DiagramReport {
    /// Uniform prior updated by the first marginal.
    pub sigma_prime: DensityOperator,
    /// `sigma_prime` updated by the second marginal.
    pub sigma: DensityOperator,
    /// Uniform prior updated by the second marginal.
    pub varrho_prime: DensityOperator,
    /// `varrho_prime` updated by the first marginal.
    pub varrho: DensityOperator,
    /// Maximum-entropy estimator from both marginals at once.
    pub joint: DensityOperator,
    pub sigma_varrho: f64,
    pub sigma_joint: f64,
    pub varrho_joint: f64,
    pub commutes: bool,
}

impl DiagramReport {
    pub fn max_distance(&self) -> f64 {
        self.sigma_varrho
            .max(self.sigma_joint)
            .max(self.varrho_joint)
    }
}

/// Runs both update orders from the uniform prior on the joint layout
/// (labels of `rho_ab`, then the new labels of `rho_bc`) and compares them
/// with the joint estimator. The diagram commutes when all three distances
/// are at most `tol`.
pub fn diagram_commutes(
    rho_ab: &DensityOperator,
    rho_bc: &DensityOperator,
    tol: f64,
    config: &MaxEntConfig,
) -> Result<DiagramReport> {
    let parent = rho_ab.layout().union(rho_bc.layout())?;
    let set = MarginalSet::new(parent.clone(), vec![rho_ab.clone(), rho_bc.clone()])?;
    let uniform = DensityOperator::maximally_mixed(parent.clone());
    let c_ab = constraints_from_marginals(&parent, &[rho_ab])?;
    let c_bc = constraints_from_marginals(&parent, &[rho_bc])?;

    let sigma_prime = bayesian_update(&uniform, &c_ab, config)?.state;
    let sigma = bayesian_update(&sigma_prime, &c_bc, config)?.state;
    let varrho_prime = bayesian_update(&uniform, &c_bc, config)?.state;
    let varrho = bayesian_update(&varrho_prime, &c_ab, config)?.state;
    let joint = solve_maxent(&marginal_constraints(&set)?, &parent, config)?.state;

    let sigma_varrho = sigma.trace_distance(&varrho)?;
    let sigma_joint = sigma.trace_distance(&joint)?;
    let varrho_joint = varrho.trace_distance(&joint)?;
    let commutes = sigma_varrho <= tol && sigma_joint <= tol && varrho_joint <= tol;
    Ok(DiagramReport {
        sigma_prime,
        sigma,
        varrho_prime,
        varrho,
        joint,
        sigma_varrho,
        sigma_joint,
        varrho_joint,
        commutes,
    })
}

use super::{shared_marginal, split, Tolerances};
use crate::error::Result;
use crate::states::DensityOperator;
use crate::tensor::{embed, ComplexMatrix, HermitianEig, MatrixFunction};

/// Outcome of the compatibility test for a pair `ρ_AB`, `ρ_BC`.
#[derive(Clone, Debug, PartialEq)]
pub struct CompatReport {
    /// Trace distance between `Tr_A ρ_AB` and `Tr_C ρ_BC`.
    pub marginal_consistency_residual: f64,
    /// `‖ΘΘ† − Θ†Θ‖_F / ‖Θ‖_F²` for `Θ = ρ_BC^{1/2} ρ_B^{−1/2} ρ_AB^{1/2}`.
    pub normality_residual: f64,
    /// `‖Θ − Θ†‖_F / ‖Θ‖_F`, diagnostic only.
    pub self_adjoint_residual: f64,
    /// Some input marginal is singular, so inverse powers were taken on
    /// the support.
    pub rank_deficient: bool,
    pub verdict: bool,
}

impl std::fmt::Display for CompatReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "verdict={} marginal_residual={:.3e} normality_residual={:.3e} self_adjoint_residual={:.3e} rank_deficient={}",
            self.verdict,
            self.marginal_consistency_residual,
            self.normality_residual,
            self.self_adjoint_residual,
            self.rank_deficient
        )
    }
}

const NORM_FLOOR: f64 = 1e-12;

fn sqrt_of(eig: &HermitianEig) -> Result<ComplexMatrix> {
    eig.apply(MatrixFunction::Sqrt)
}

/// Tests whether `ρ_AB`, `ρ_BC` are the marginals of a quantum Markov chain
/// `A − B − C`: the reductions onto `B` must agree and `Θ` must be normal.
pub fn check_qmc_compatibility(
    rho_ab: &DensityOperator,
    rho_bc: &DensityOperator,
    tol: &Tolerances,
) -> Result<CompatReport> {
    let s = split(rho_ab.layout(), rho_bc.layout())?;
    let (rho_b, marginal) = shared_marginal(rho_ab, rho_bc, &s.b)?;
    let e_ab = rho_ab.eig();
    let e_bc = rho_bc.eig();
    let e_b = rho_b.eig();
    let rank_deficient =
        e_ab.rank() < rho_ab.dim() || e_bc.rank() < rho_bc.dim() || e_b.rank() < rho_b.dim();
    let left =
        sqrt_of(&e_bc)? * embed(&e_b.apply(MatrixFunction::InvSqrt)?, &s.b, rho_bc.layout())?;
    let theta = embed(&left, rho_bc.layout(), &s.parent)?
        * embed(&sqrt_of(&e_ab)?, rho_ab.layout(), &s.parent)?;
    let theta_dag = theta.adjoint();
    let norm = theta.norm();
    let commutator = &theta * &theta_dag - &theta_dag * &theta;
    let normality_residual = commutator.norm() / (norm * norm).max(NORM_FLOOR);
    let self_adjoint_residual = (&theta - &theta_dag).norm() / norm.max(NORM_FLOOR);
    let verdict = marginal <= tol.marginal && normality_residual <= tol.normality;
    Ok(CompatReport {
        marginal_consistency_residual: marginal,
        normality_residual,
        self_adjoint_residual,
        rank_deficient,
        verdict,
    })
}

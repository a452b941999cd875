use super::Candidate;
use crate::error::{Error, Result};
use crate::states::{
    conditional_mutual_information, entropy_of, mutual_information, relative_entropy,
    von_neumann_entropy, DensityOperator,
};

const COMPATIBILITY: f64 = 1e-6;

/// `S(ρ‖ρ̃)` split as `−[I(X:Y) + I(Y:Z)] − I_ρ̃(X:Z|Y) + Σ_W S(ρ_W) − S(ρ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GapDecomposition {
    /// `I_ρ(X:Y) + I_ρ(Y:Z)` over the kept pairs.
    pub mutual_information_sum: f64,
    /// `I_ρ̃(X:Z|Y)`.
    pub estimator_cmi: f64,
    pub marginal_entropy_sum: f64,
    pub joint_entropy: f64,
    /// Sum of the four terms with their signs.
    pub total: f64,
    /// `S(ρ‖ρ̃)` evaluated directly.
    pub direct: f64,
}

/// Decomposes the relative entropy between a tripartite `rho_true` and an
/// estimator built from the kept pair of `candidate`.
pub fn relative_entropy_gap(
    rho_true: &DensityOperator,
    estimator: &DensityOperator,
    candidate: Candidate,
) -> Result<GapDecomposition> {
    let labels = rho_true.labels();
    if labels.len() != 3 {
        return Err(Error::InvalidLayout(format!(
            "{} is not tripartite",
            rho_true.layout()
        )));
    }
    let estimator = estimator.reordered(rho_true.layout())?;
    let (x, y, z) = candidate.roles();
    let (x, y, z) = (&labels[x], &labels[y], &labels[z]);
    let mut distance: f64 = 0.0;
    for pair in [[x, y], [y, z]] {
        distance = distance.max(
            estimator
                .reduce(&pair)?
                .trace_distance(&rho_true.reduce(&pair)?)?,
        );
    }
    if distance > COMPATIBILITY {
        return Err(Error::IncompatibleEstimator { distance });
    }
    let mi = |p: &String, q: &String| -> Result<f64> {
        mutual_information(&rho_true.reduce(&[p, q])?, &[p], &[q])
    };
    let mutual_information_sum = mi(x, y)? + mi(y, z)?;
    let estimator_cmi = conditional_mutual_information(&estimator, &[x], &[y], &[z])?;
    let marginal_entropy_sum =
        entropy_of(rho_true, &[x])? + entropy_of(rho_true, &[y])? + entropy_of(rho_true, &[z])?;
    let joint_entropy = von_neumann_entropy(rho_true);
    let total = -mutual_information_sum - estimator_cmi + marginal_entropy_sum - joint_entropy;
    let direct = relative_entropy(rho_true, &estimator)?;
    Ok(GapDecomposition {
        mutual_information_sum,
        estimator_cmi,
        marginal_entropy_sum,
        joint_entropy,
        total,
        direct,
    })
}

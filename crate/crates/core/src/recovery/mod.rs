//! Petz recovery of tripartite states from two overlapping marginals, the
//! normality test for quantum Markov chain compatibility, and choosing the
//! best two of three bipartite marginals.

mod compat;
mod gap;
mod petz;
mod selection;

pub use compat::{check_qmc_compatibility, CompatReport};
pub use gap::{relative_entropy_gap, GapDecomposition};
pub use petz::{petz_recover, PetzRecovery, Tolerances};
pub use selection::{
    best_pair_min_entropy, best_pair_mutual_info, pair_estimate, select_best_pair, Candidate,
    EstimatorKind, PairEstimate, PairSelection, SelectionCriterion, TriangleMarginals,
    SCORE_TIE_TOLERANCE,
};

use crate::error::{Error, Result};
use crate::states::DensityOperator;
use crate::tensor::SubsystemLayout;

/// Factor bookkeeping for a pair `ρ_{AB}` (layout `l1`) and `ρ_{BC}` (layout
/// `l2`): `B` is the shared factors, `C` the factors new in `l2`.
pub(crate) struct Split {
    pub parent: SubsystemLayout,
    pub b: SubsystemLayout,
}

pub(crate) fn split(l1: &SubsystemLayout, l2: &SubsystemLayout) -> Result<Split> {
    let shared = l1.intersection(l2);
    if shared.is_empty() {
        return Err(Error::BadPartition(format!(
            "{l1} and {l2} share no factor"
        )));
    }
    if shared.len() == l2.len() {
        return Err(Error::BadPartition(format!("{l2} adds no factor to {l1}")));
    }
    let parent = l1.union(l2)?;
    let b = l2.sub_layout(&shared)?;
    Ok(Split { parent, b })
}

/// Reduction of `rho_bc` onto the shared factors, and its trace distance
/// to the same reduction of `rho_ab`.
pub(crate) fn shared_marginal(
    rho_ab: &DensityOperator,
    rho_bc: &DensityOperator,
    b: &SubsystemLayout,
) -> Result<(DensityOperator, f64)> {
    let from_bc = rho_bc.reduce(b.labels())?;
    let from_ab = rho_ab.reduce(b.labels())?.reordered(b)?;
    let d = from_bc.trace_distance(&from_ab)?;
    Ok((from_bc, d))
}

use super::{
    chow_liu_tree, delta_s, tree_maxent, tree_recover, DeltaS, QuantumTree, TreeRecovery,
    WeightedEdgeList,
};
use crate::error::{Error, Result};
use crate::maxent::MaxEntConfig;
use crate::recovery::{EstimatorKind, Tolerances};
use crate::states::{relative_entropy, von_neumann_entropy, DensityOperator, MarginalSet};
use crate::tensor::SubsystemLayout;

/// Input to [`learn_tree`].
#[derive(Clone, Debug)]
pub enum TreeSource {
    Joint(DensityOperator),
    /// One bipartite marginal for every pair of factors of the layout.
    Pairs {
        layout: SubsystemLayout,
        pairs: Vec<DensityOperator>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeEstimator {
    /// Iterated Petz recovery; a failed step is an error.
    Petz,
    MaxEnt,
    /// Petz recovery, falling back to maximum entropy when a step fails.
    Auto,
}

#[derive(Clone, Debug)]
pub struct TreeEstimate {
    pub state: DensityOperator,
    pub kind: EstimatorKind,
    /// Present when the Petz route succeeded.
    pub recovery: Option<TreeRecovery>,
    /// The failed step when `Auto` fell back to maximum entropy.
    pub petz_failure: Option<String>,
}

pub fn estimate_on_tree(
    tree: &QuantumTree,
    method: TreeEstimator,
    tol: &Tolerances,
    config: &MaxEntConfig,
) -> Result<TreeEstimate> {
    let maxent = |petz_failure| -> Result<TreeEstimate> {
        let s = tree_maxent(tree, config)?;
        Ok(TreeEstimate {
            state: s.state,
            kind: EstimatorKind::MaxEnt,
            recovery: None,
            petz_failure,
        })
    };
    match method {
        TreeEstimator::MaxEnt => maxent(None),
        TreeEstimator::Petz | TreeEstimator::Auto => match tree_recover(tree, tol) {
            Ok(r) => Ok(TreeEstimate {
                state: r.state.clone(),
                kind: EstimatorKind::Petz,
                recovery: Some(r),
                petz_failure: None,
            }),
            Err(e @ Error::RecoveryStep { .. }) if method == TreeEstimator::Auto => {
                maxent(Some(e.to_string()))
            }
            Err(e) => Err(e),
        },
    }
}

/// `S(ρ‖ρ̃) = −Σ_edges I(e) − ΔS + Σ_v S(ρ_v) − S(ρ)`.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeGap {
    pub relative_entropy: f64,
    pub mutual_information_sum: f64,
    pub delta_s: f64,
    pub vertex_entropy_sum: f64,
    pub joint_entropy: f64,
    /// Signed sum of the four terms.
    pub total: f64,
}

#[derive(Clone, Debug)]
pub struct LearnedTree {
    pub weights: WeightedEdgeList,
    pub tree: QuantumTree,
    pub estimate: TreeEstimate,
    pub delta_s: DeltaS,
    /// Only when the source joint is known.
    pub gap: Option<TreeGap>,
}

/// Quantum Chow-Liu: weights every pair by its mutual information, keeps the
/// maximum-weight spanning tree and estimates the joint on it.
pub fn learn_tree(
    source: &TreeSource,
    method: TreeEstimator,
    tol: &Tolerances,
    config: &MaxEntConfig,
) -> Result<LearnedTree> {
    let (layout, weights) = match source {
        TreeSource::Joint(rho) => (rho.layout().clone(), WeightedEdgeList::from_joint(rho)?),
        TreeSource::Pairs { layout, pairs } => {
            MarginalSet::with_tolerance(layout.clone(), pairs.clone(), tol.marginal)?;
            (
                layout.clone(),
                WeightedEdgeList::from_pairs(layout.clone(), pairs)?,
            )
        }
    };
    let edges = chow_liu_tree(&weights);
    let labels = layout.labels();
    let mut marginals = Vec::with_capacity(edges.len());
    for &(i, j) in &edges {
        let m = match source {
            TreeSource::Joint(rho) => rho.reduce(&[&labels[i], &labels[j]])?,
            TreeSource::Pairs { pairs, .. } => pairs
                .iter()
                .find(|p| p.layout().contains(&labels[i]) && p.layout().contains(&labels[j]))
                .cloned()
                .expect("complete pair list"),
        };
        marginals.push(m);
    }
    let tree = QuantumTree::new(layout.clone(), marginals)?;
    let estimate = estimate_on_tree(&tree, method, tol, config)?;
    let ds = delta_s(&tree, &estimate.state)?;
    let gap = match source {
        TreeSource::Joint(rho) => {
            let mutual_information_sum = weights.total(&edges);
            let mut vertex_entropy_sum = 0.0;
            for v in 0..layout.len() {
                vertex_entropy_sum += von_neumann_entropy(&tree.vertex_marginal(v)?);
            }
            let joint_entropy = von_neumann_entropy(rho);
            Some(TreeGap {
                relative_entropy: relative_entropy(rho, &estimate.state)?,
                mutual_information_sum,
                delta_s: ds.total,
                vertex_entropy_sum,
                joint_entropy,
                total: -mutual_information_sum - ds.total + vertex_entropy_sum - joint_entropy,
            })
        }
        TreeSource::Pairs { .. } => None,
    };
    Ok(LearnedTree {
        weights,
        tree,
        estimate,
        delta_s: ds,
        gap,
    })
}

use super::QuantumTree;
use crate::error::{Error, Result};
use crate::maxent::{constraints_from_marginals, solve_maxent, MaxEntConfig, MaxEntSolution};
use crate::recovery::{check_qmc_compatibility, petz_recover, CompatReport, Tolerances};
use crate::states::{conditional_mutual_information, von_neumann_entropy, DensityOperator};

const ESTIMATOR_COMPATIBILITY: f64 = 1e-6;

/// One Petz extension: `leaf` attached to the partial state through `anchor`.
#[derive(Clone, Debug)]
pub struct TreeStep {
    pub leaf: String,
    pub anchor: String,
    pub report: CompatReport,
    pub raw_trace: f64,
}

#[derive(Clone, Debug)]
pub struct TreeRecovery {
    /// On the tree's layout.
    pub state: DensityOperator,
    /// In the order they were applied (reverse of the peeling order).
    pub steps: Vec<TreeStep>,
    pub rank_deficient: bool,
}

/// Rebuilds the joint by undoing the leaf peeling: starting from the last
/// edge, each peeled leaf is re-attached with the Petz map from its anchor.
/// Every step must pass the compatibility test between the partial state
/// and the edge marginal.
pub fn tree_recover(tree: &QuantumTree, tol: &Tolerances) -> Result<TreeRecovery> {
    let labels = tree.layout().labels();
    let order = tree.peeling_order();
    let (l0, a0) = *order.last().expect("at least one edge");
    let mut state = tree.edge_marginal(l0, a0).expect("tree edge").clone();
    let mut steps = Vec::with_capacity(order.len().saturating_sub(1));
    for &(leaf, anchor) in order.iter().rev().skip(1) {
        let edge = tree.edge_marginal(leaf, anchor).expect("tree edge");
        let report = check_qmc_compatibility(&state, edge, tol)?;
        if !report.verdict {
            return Err(Error::RecoveryStep {
                leaf: labels[leaf].clone(),
                anchor: labels[anchor].clone(),
                report: Box::new(report),
            });
        }
        let petz = petz_recover(&state, edge, 0.0, tol)?;
        state = petz.state;
        steps.push(TreeStep {
            leaf: labels[leaf].clone(),
            anchor: labels[anchor].clone(),
            report,
            raw_trace: petz.raw_trace,
        });
    }
    let rank_deficient = steps.iter().any(|s| s.report.rank_deficient);
    Ok(TreeRecovery {
        state: state.reordered(tree.layout())?,
        steps,
        rank_deficient,
    })
}

/// Maximum-entropy estimator reproducing every edge marginal.
pub fn tree_maxent(tree: &QuantumTree, config: &MaxEntConfig) -> Result<MaxEntSolution> {
    let refs: Vec<&DensityOperator> = tree.marginals().iter().collect();
    let constraints = constraints_from_marginals(tree.layout(), &refs)?;
    solve_maxent(&constraints, tree.layout(), config)
}

/// `I(leaf : rest | anchor)` on the vertices still present when `leaf` is
/// peeled.
#[derive(Clone, Debug)]
pub struct DeltaTerm {
    pub leaf: String,
    pub anchor: String,
    pub rest: Vec<String>,
    pub cmi: f64,
}

#[derive(Clone, Debug)]
pub struct DeltaS {
    /// `Σ_edges S(ρ_e) − Σ_v (deg v − 1) S(ρ_v) − S(ρ̃)`.
    pub total: f64,
    pub terms: Vec<DeltaTerm>,
    pub term_sum: f64,
}

/// Entropy deficit of `estimator` relative to the tree bound, with its
/// chain-rule split along the peeling order.
pub fn delta_s(tree: &QuantumTree, estimator: &DensityOperator) -> Result<DeltaS> {
    let layout = tree.layout();
    let est = estimator.reordered(layout)?;
    let mut bound = 0.0;
    for m in tree.marginals() {
        let distance = est.reduce(m.labels())?.trace_distance(m)?;
        if distance > ESTIMATOR_COMPATIBILITY {
            return Err(Error::IncompatibleEstimator { distance });
        }
        bound += von_neumann_entropy(m);
    }
    for v in 0..layout.len() {
        let deg = tree.degree(v);
        if deg > 1 {
            bound -= (deg - 1) as f64 * von_neumann_entropy(&tree.vertex_marginal(v)?);
        }
    }
    let total = bound - von_neumann_entropy(&est);

    let labels = layout.labels();
    let mut alive = vec![true; layout.len()];
    let mut terms = Vec::new();
    for (leaf, anchor) in tree.peeling_order() {
        let rest: Vec<String> = (0..layout.len())
            .filter(|&v| alive[v] && v != leaf && v != anchor)
            .map(|v| labels[v].clone())
            .collect();
        if !rest.is_empty() {
            let present: Vec<&String> = (0..layout.len())
                .filter(|&v| alive[v])
                .map(|v| &labels[v])
                .collect();
            let reduced = if present.len() == labels.len() {
                est.clone()
            } else {
                est.reduce(&present)?
            };
            let cmi = conditional_mutual_information(
                &reduced,
                &[labels[leaf].clone()],
                &[labels[anchor].clone()],
                &rest,
            )?;
            terms.push(DeltaTerm {
                leaf: labels[leaf].clone(),
                anchor: labels[anchor].clone(),
                rest,
                cmi,
            });
        }
        alive[leaf] = false;
    }
    let term_sum = terms.iter().map(|t| t.cmi).sum();
    Ok(DeltaS {
        total,
        terms,
        term_sum,
    })
}

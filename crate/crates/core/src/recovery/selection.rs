use super::{check_qmc_compatibility, petz_recover, CompatReport, Tolerances};
use crate::error::{Error, Result};
use crate::maxent::{constraints_from_marginals, solve_maxent, MaxEntConfig};
use crate::states::{mutual_information, von_neumann_entropy, DensityOperator};
use crate::tensor::SubsystemLayout;

/// Scores within this distance of the optimum count as tied; ties go to the
/// earliest candidate in [`Candidate::ALL`].
pub const SCORE_TIE_TOLERANCE: f64 = 1e-9;
const ESTIMATOR_COMPATIBILITY: f64 = 1e-6;

/// Which of the three bipartite marginals is discarded. Declaration order
/// is the tie-break order: keeping `(AB, BC)` first, then `(BC, AC)`, then
/// `(AB, AC)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Candidate {
    DropAC,
    DropAB,
    DropBC,
}

impl Candidate {
    pub const ALL: [Candidate; 3] = [Candidate::DropAC, Candidate::DropAB, Candidate::DropBC];

    pub fn index(self) -> usize {
        self as usize
    }

    /// Positions `(x, y, z)` in the `A, B, C` label triple such that the
    /// kept marginals are `XY` and `YZ`.
    pub fn roles(self) -> (usize, usize, usize) {
        match self {
            Candidate::DropAC => (0, 1, 2),
            Candidate::DropAB => (1, 2, 0),
            Candidate::DropBC => (1, 0, 2),
        }
    }

    /// The discarded pair, e.g. `A-C`.
    pub fn discarded_pair(self, labels: &[String; 3]) -> String {
        let (x, _, z) = self.roles();
        let (i, j) = if x < z { (x, z) } else { (z, x) };
        format!("{}-{}", labels[i], labels[j])
    }

    pub fn kept_pairs(self, labels: &[String; 3]) -> [String; 2] {
        let (x, y, z) = self.roles();
        let name = |p: usize, q: usize| {
            let (i, j) = if p < q { (p, q) } else { (q, p) };
            format!("{}-{}", labels[i], labels[j])
        };
        [name(x, y), name(y, z)]
    }
}

/// The three bipartite marginals of a tripartite system, with each pair's
/// factors in `A, B, C` order.
#[derive(Clone, Debug)]
pub struct TriangleMarginals {
    labels: [String; 3],
    parent: SubsystemLayout,
    ab: DensityOperator,
    bc: DensityOperator,
    ac: DensityOperator,
}

impl TriangleMarginals {
    /// `A` and `B` are the factors of `ab` in order; `C` is the other factor
    /// of `bc`.
    pub fn new(ab: DensityOperator, bc: DensityOperator, ac: DensityOperator) -> Result<Self> {
        for m in [&ab, &bc, &ac] {
            if m.layout().len() != 2 {
                return Err(Error::InvalidLayout(format!(
                    "{} is not bipartite",
                    m.layout()
                )));
            }
        }
        let a = ab.labels()[0].clone();
        let b = ab.labels()[1].clone();
        if !bc.layout().contains(&b) || bc.layout().contains(&a) {
            return Err(Error::InvalidLayout(format!(
                "{} must pair {b} with a third factor",
                bc.layout()
            )));
        }
        let c = bc
            .labels()
            .iter()
            .find(|l| **l != b)
            .cloned()
            .expect("bipartite");
        let parent = ab.layout().union(bc.layout())?;
        let bc = bc.reordered(&parent.sub_layout(&[&b, &c])?)?;
        let ac_layout = parent.sub_layout(&[&a, &c])?;
        if !ac.layout().same_factors(&ac_layout) {
            return Err(Error::InvalidLayout(format!(
                "{} must cover {a} and {c}",
                ac.layout()
            )));
        }
        let ac = ac.reordered(&ac_layout)?;
        Ok(Self {
            labels: [a, b, c],
            parent,
            ab,
            bc,
            ac,
        })
    }

    pub fn from_joint(rho: &DensityOperator) -> Result<Self> {
        let l = rho.labels();
        if l.len() != 3 {
            return Err(Error::InvalidLayout(format!(
                "{} is not tripartite",
                rho.layout()
            )));
        }
        Self::new(
            rho.reduce(&[&l[0], &l[1]])?,
            rho.reduce(&[&l[1], &l[2]])?,
            rho.reduce(&[&l[0], &l[2]])?,
        )
    }

    pub fn labels(&self) -> &[String; 3] {
        &self.labels
    }

    /// Layout `A, B, C`.
    pub fn parent(&self) -> &SubsystemLayout {
        &self.parent
    }

    pub fn ab(&self) -> &DensityOperator {
        &self.ab
    }

    pub fn bc(&self) -> &DensityOperator {
        &self.bc
    }

    pub fn ac(&self) -> &DensityOperator {
        &self.ac
    }

    /// The kept marginals `(ρ_XY, ρ_YZ)` for a candidate.
    pub fn kept(&self, c: Candidate) -> (&DensityOperator, &DensityOperator) {
        match c {
            Candidate::DropAC => (&self.ab, &self.bc),
            Candidate::DropAB => (&self.bc, &self.ac),
            Candidate::DropBC => (&self.ab, &self.ac),
        }
    }

    /// Largest trace distance between the kept marginals of `c` and the
    /// corresponding reductions of `state`.
    pub fn kept_deviation(&self, c: Candidate, state: &DensityOperator) -> Result<f64> {
        let (p, q) = self.kept(c);
        let mut worst: f64 = 0.0;
        for m in [p, q] {
            worst = worst.max(state.reduce(m.labels())?.trace_distance(m)?);
        }
        Ok(worst)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimatorKind {
    Petz,
    MaxEnt,
}

/// Estimator built from the kept pair of one candidate.
#[derive(Clone, Debug)]
pub struct PairEstimate {
    pub candidate: Candidate,
    /// On the `A, B, C` layout.
    pub estimator: DensityOperator,
    pub kind: EstimatorKind,
    pub report: CompatReport,
}

/// Petz recovery when the kept pair passes the compatibility test, the
/// maximum-entropy estimator from both kept marginals otherwise.
pub fn pair_estimate(
    tri: &TriangleMarginals,
    c: Candidate,
    tol: &Tolerances,
    config: &MaxEntConfig,
) -> Result<PairEstimate> {
    let (p, q) = tri.kept(c);
    let report = check_qmc_compatibility(p, q, tol)?;
    let (estimator, kind) = if report.verdict {
        (
            petz_recover(p, q, 0.0, tol)?
                .state
                .reordered(tri.parent())?,
            EstimatorKind::Petz,
        )
    } else {
        let cons = constraints_from_marginals(tri.parent(), &[p, q])?;
        (
            solve_maxent(&cons, tri.parent(), config)?.state,
            EstimatorKind::MaxEnt,
        )
    };
    Ok(PairEstimate {
        candidate: c,
        estimator,
        kind,
        report,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SelectionCriterion {
    MutualInformation,
    MinEntropy,
}

#[derive(Clone, Debug)]
pub struct PairSelection {
    pub discarded: Candidate,
    /// Discarded pair label, e.g. `A-C`.
    pub discarded_pair: String,
    /// Shared factor of the two kept marginals.
    pub center: String,
    /// Per-candidate score in [`Candidate::ALL`] order; `None` when that
    /// candidate had no valid estimator.
    pub scores: [Option<f64>; 3],
    pub estimator: DensityOperator,
    pub criterion: SelectionCriterion,
}

fn pick(scores: &[Option<f64>; 3], minimise: bool) -> Option<Candidate> {
    let best = scores
        .iter()
        .flatten()
        .copied()
        .fold(None, |acc: Option<f64>, s| {
            Some(match acc {
                None => s,
                Some(a) if minimise => a.min(s),
                Some(a) => a.max(s),
            })
        })?;
    Candidate::ALL
        .into_iter()
        .find(|c| match scores[c.index()] {
            Some(s) if minimise => s <= best + SCORE_TIE_TOLERANCE,
            Some(s) => s >= best - SCORE_TIE_TOLERANCE,
            None => false,
        })
}

fn selection(
    tri: &TriangleMarginals,
    c: Candidate,
    scores: [Option<f64>; 3],
    estimator: DensityOperator,
    criterion: SelectionCriterion,
) -> PairSelection {
    PairSelection {
        discarded: c,
        discarded_pair: c.discarded_pair(tri.labels()),
        center: tri.labels()[c.roles().1].clone(),
        scores,
        estimator,
        criterion,
    }
}

/// Chooses the candidate whose estimator has minimum von Neumann entropy.
/// `estimators` are indexed as [`Candidate::ALL`]; entries that are absent
/// or do not reproduce their kept marginals within 1e-6 are skipped.
pub fn best_pair_min_entropy(
    tri: &TriangleMarginals,
    estimators: [Option<&DensityOperator>; 3],
) -> Result<PairSelection> {
    let mut scores = [None; 3];
    for c in Candidate::ALL {
        if let Some(e) = estimators[c.index()] {
            if tri.kept_deviation(c, e)? <= ESTIMATOR_COMPATIBILITY {
                scores[c.index()] = Some(von_neumann_entropy(e));
            }
        }
    }
    let c = pick(&scores, true).ok_or(Error::NoEstimator)?;
    let e = estimators[c.index()]
        .expect("scored")
        .reordered(tri.parent())?;
    Ok(selection(tri, c, scores, e, SelectionCriterion::MinEntropy))
}

/// Keeps the pair maximising `I(X:Y) + I(Y:Z)`, i.e. discards the
/// least-correlated marginal, and recovers with the Petz map. Requires every
/// candidate pair to pass the compatibility test.
pub fn best_pair_mutual_info(tri: &TriangleMarginals, tol: &Tolerances) -> Result<PairSelection> {
    for c in Candidate::ALL {
        let (p, q) = tri.kept(c);
        if !check_qmc_compatibility(p, q, tol)?.verdict {
            return Err(Error::HypothesisViolated {
                pair: tri_pair_name(tri, c),
            });
        }
    }
    let l = tri.labels();
    let mi = |m: &DensityOperator| mutual_information(m, &[&m.labels()[0]], &[&m.labels()[1]]);
    let (i_ab, i_bc, i_ac) = (mi(tri.ab())?, mi(tri.bc())?, mi(tri.ac())?);
    let scores = [Some(i_ab + i_bc), Some(i_bc + i_ac), Some(i_ab + i_ac)];
    let c = pick(&scores, false).expect("all scored");
    let (p, q) = tri.kept(c);
    let e = petz_recover(p, q, 0.0, tol)?
        .state
        .reordered(tri.parent())?;
    debug_assert_eq!(l.len(), 3);
    Ok(selection(
        tri,
        c,
        scores,
        e,
        SelectionCriterion::MutualInformation,
    ))
}

fn tri_pair_name(tri: &TriangleMarginals, c: Candidate) -> String {
    c.kept_pairs(tri.labels()).join(",")
}

/// Mutual-information selection when its hypothesis holds, otherwise the
/// minimum-entropy rule over the three pair estimators.
pub fn select_best_pair(
    tri: &TriangleMarginals,
    tol: &Tolerances,
    config: &MaxEntConfig,
) -> Result<PairSelection> {
    match best_pair_mutual_info(tri, tol) {
        Err(Error::HypothesisViolated { .. }) => {}
        other => return other,
    }
    let mut estimates = Vec::with_capacity(3);
    for c in Candidate::ALL {
        estimates.push(pair_estimate(tri, c, tol, config).ok());
    }
    let refs = [0, 1, 2].map(|i| estimates[i].as_ref().map(|e| &e.estimator));
    best_pair_min_entropy(tri, refs)
}

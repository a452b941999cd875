use super::DensityOperator;
use crate::error::{Error, Result};
use crate::tensor::SubsystemLayout;

pub const DEFAULT_OVERLAP_TOLERANCE: f64 = 1e-8;

/// Marginals on sub-layouts of one parent layout. Construction checks the
/// cover condition and that overlapping marginals agree on their intersection.
#[derive(Clone, Debug)]
pub struct MarginalSet {
    parent: SubsystemLayout,
    marginals: Vec<DensityOperator>,
}

impl MarginalSet {
    pub fn new(parent: SubsystemLayout, marginals: Vec<DensityOperator>) -> Result<Self> {
        Self::with_tolerance(parent, marginals, DEFAULT_OVERLAP_TOLERANCE)
    }

    pub fn with_tolerance(
        parent: SubsystemLayout,
        marginals: Vec<DensityOperator>,
        tolerance: f64,
    ) -> Result<Self> {
        for m in &marginals {
            for (l, d) in m.labels().iter().zip(m.layout().dims()) {
                if parent.dim_of(l)? != *d {
                    return Err(Error::DimensionMismatch(format!(
                        "marginal factor `{l}` has dimension {d}"
                    )));
                }
            }
        }
        let uncovered: Vec<&String> = parent
            .labels()
            .iter()
            .filter(|l| !marginals.iter().any(|m| m.layout().contains(l)))
            .collect();
        if !uncovered.is_empty() {
            return Err(Error::InvalidLayout(format!(
                "marginals do not cover {uncovered:?}"
            )));
        }
        for (i, m1) in marginals.iter().enumerate() {
            for m2 in &marginals[i + 1..] {
                let shared = m1.layout().intersection(m2.layout());
                if shared.is_empty() {
                    continue;
                }
                let distance = m1.reduce(&shared)?.trace_distance(&m2.reduce(&shared)?)?;
                if distance > tolerance {
                    return Err(Error::OverlapMismatch {
                        distance,
                        tolerance,
                    });
                }
            }
        }
        Ok(Self { parent, marginals })
    }

    /// Reductions of `joint` onto each label group.
    pub fn from_joint<S: AsRef<str>>(joint: &DensityOperator, groups: &[&[S]]) -> Result<Self> {
        let marginals = groups
            .iter()
            .map(|g| joint.reduce(g))
            .collect::<Result<Vec<_>>>()?;
        Self::new(joint.layout().clone(), marginals)
    }

    pub fn parent(&self) -> &SubsystemLayout {
        &self.parent
    }

    pub fn marginals(&self) -> &[DensityOperator] {
        &self.marginals
    }

    /// Largest trace distance between a marginal and the matching reduction of `state`.
    pub fn max_deviation(&self, state: &DensityOperator) -> Result<f64> {
        let mut worst = 0.0f64;
        for m in &self.marginals {
            worst = worst.max(state.reduce(m.labels())?.trace_distance(m)?);
        }
        Ok(worst)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{sample_density, seeded_rng};

    #[test]
    fn cover_and_overlap() {
        let l = SubsystemLayout::qubits(["A", "B", "C"]).unwrap();
        let mut rng = seeded_rng(2);
        let rho = sample_density(&l, None, &mut rng).unwrap();
        let set = MarginalSet::from_joint(&rho, &[&["A", "B"][..], &["B", "C"][..]]).unwrap();
        assert_eq!(set.marginals().len(), 2);
        assert!(set.max_deviation(&rho).unwrap() < 1e-14);
        assert!(MarginalSet::from_joint(&rho, &[&["A", "B"][..]]).is_err());
        let other = sample_density(&l, None, &mut rng).unwrap();
        let bad = vec![
            rho.reduce(&["A", "B"]).unwrap(),
            other.reduce(&["B", "C"]).unwrap(),
        ];
        assert!(matches!(
            MarginalSet::new(l, bad),
            Err(Error::OverlapMismatch { .. })
        ));
    }
}

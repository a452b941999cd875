use super::OperatorBasis;
use crate::error::{Error, Result};
use crate::states::{DensityOperator, MarginalSet};
use crate::tensor::{
    embed, hermiticity_residual, hs_inner, kron_all, ComplexMatrix, SubsystemLayout,
};

/// Relative tolerance for recognising two observables as the same operator.
pub const DEDUP_TOLERANCE: f64 = 1e-10;
const TARGET_CONFLICT: f64 = 1e-8;

/// Observables `Θᵢ` on a joint layout with their prescribed expectations.
#[derive(Clone, Debug, Default)]
pub struct ConstraintSet {
    observables: Vec<ComplexMatrix>,
    targets: Vec<f64>,
    names: Vec<String>,
}

impl ConstraintSet {
    pub fn new(observables: Vec<ComplexMatrix>, targets: Vec<f64>) -> Result<Self> {
        if observables.len() != targets.len() {
            return Err(Error::InvalidConstraints(format!(
                "{} observables but {} targets",
                observables.len(),
                targets.len()
            )));
        }
        let names = (0..observables.len())
            .map(|i| format!("theta{i}"))
            .collect();
        let set = Self {
            observables,
            targets,
            names,
        };
        set.validate()?;
        Ok(set)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    fn validate(&self) -> Result<()> {
        let dim = self.observables.first().map(|o| o.nrows());
        for (o, t) in self.observables.iter().zip(&self.targets) {
            if Some(o.nrows()) != dim || o.nrows() != o.ncols() {
                return Err(Error::InvalidConstraints(
                    "observables must be square and of equal size".into(),
                ));
            }
            let residual = hermiticity_residual(o);
            if residual > 1e-10 {
                return Err(Error::NotHermitian { residual });
            }
            if !t.is_finite() {
                return Err(Error::InvalidConstraints("non-finite target".into()));
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.observables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.observables.is_empty()
    }

    pub fn observables(&self) -> &[ComplexMatrix] {
        &self.observables
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Operator dimension, if any constraint is present.
    pub fn dim(&self) -> Option<usize> {
        self.observables.first().map(|o| o.nrows())
    }

    /// Adds a constraint unless an equal (up to scale) observable is already
    /// present, in which case the scaled targets must agree. Returns whether
    /// the constraint was new.
    pub fn push_dedup(
        &mut self,
        observable: ComplexMatrix,
        target: f64,
        name: impl Into<String>,
    ) -> Result<bool> {
        let on = observable.norm();
        for (existing, t) in self.observables.iter().zip(&self.targets) {
            let en2 = existing.norm_squared();
            let overlap = hs_inner(existing, &observable)?;
            let r = overlap.re / en2;
            if overlap.norm() < (1.0 - DEDUP_TOLERANCE) * on * en2.sqrt() {
                continue;
            }
            if (&observable - existing * crate::tensor::C64::new(r, 0.0)).norm()
                <= DEDUP_TOLERANCE * on
            {
                if (target - r * t).abs() > TARGET_CONFLICT {
                    return Err(Error::ConstraintConflict {
                        first: r * t,
                        second: target,
                    });
                }
                return Ok(false);
            }
        }
        self.observables.push(observable);
        self.targets.push(target);
        self.names.push(name.into());
        Ok(true)
    }

    /// Merges `other` in, deduplicating shared observables.
    pub fn extend(&mut self, other: &ConstraintSet) -> Result<()> {
        for ((o, t), n) in other
            .observables
            .iter()
            .zip(&other.targets)
            .zip(&other.names)
        {
            self.push_dedup(o.clone(), *t, n.clone())?;
        }
        Ok(())
    }
}

/// Product-basis constraints on `parent` reproducing each marginal: one
/// observable `Λ_k ⊗ Λ_l ⊗ …` per non-identity multi-index of the
/// marginal's factors, with target `Tr[ρ_m Λ_k ⊗ Λ_l ⊗ …]`. Observables
/// shared between overlapping marginals are kept once.
pub fn constraints_from_marginals(
    parent: &SubsystemLayout,
    marginals: &[&DensityOperator],
) -> Result<ConstraintSet> {
    let mut set = ConstraintSet::empty();
    for m in marginals {
        let layout = m.layout();
        let bases: Vec<OperatorBasis> = layout
            .dims()
            .iter()
            .map(|&d| OperatorBasis::gell_mann(d))
            .collect();
        let sizes: Vec<usize> = bases.iter().map(|b| b.len()).collect();
        let total: usize = sizes.iter().product();
        for flat in 1..total {
            // big-endian multi-index over the marginal's factors
            let mut idx = vec![0; sizes.len()];
            let mut rem = flat;
            for f in (0..sizes.len()).rev() {
                idx[f] = rem % sizes[f];
                rem /= sizes[f];
            }
            let product = kron_all(idx.iter().zip(&bases).map(|(&k, b)| &b.elements()[k]));
            let target = hs_inner(&product, m.matrix())?.re;
            let name: Vec<String> = layout
                .labels()
                .iter()
                .zip(&idx)
                .filter(|(_, &k)| k != 0)
                .map(|(l, k)| format!("{l}{k}"))
                .collect();
            let observable = embed(&product, layout, parent)?;
            set.push_dedup(observable, target, name.join("."))?;
        }
    }
    Ok(set)
}

pub fn marginal_constraints(marginals: &MarginalSet) -> Result<ConstraintSet> {
    let refs: Vec<&DensityOperator> = marginals.marginals().iter().collect();
    constraints_from_marginals(marginals.parent(), &refs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{sample_density, seeded_rng};
    use crate::tensor::SubsystemLayout;

    #[test]
    fn single_qubit_maximally_mixed() {
        let l = SubsystemLayout::qubits(["A"]).unwrap();
        let set = MarginalSet::new(l.clone(), vec![DensityOperator::maximally_mixed(l)]).unwrap();
        let c = marginal_constraints(&set).unwrap();
        assert_eq!(c.len(), 3);
        assert!(c.targets().iter().all(|t| t.abs() < 1e-15));
    }

    #[test]
    fn counts_with_deduplication() {
        let l = SubsystemLayout::qubits(["A", "B", "C"]).unwrap();
        let rho = sample_density(&l, None, &mut seeded_rng(4)).unwrap();
        let ab = MarginalSet::from_joint(&rho, &[&["A", "B"][..], &["C"][..]]).unwrap();
        assert_eq!(marginal_constraints(&ab).unwrap().len(), 15 + 3);
        let chain = MarginalSet::from_joint(&rho, &[&["A", "B"][..], &["B", "C"][..]]).unwrap();
        let c = marginal_constraints(&chain).unwrap();
        assert_eq!(c.len(), 27);
        // brute-force oracle: enumerate symbolic index tuples and dedupe
        let mut keys = std::collections::BTreeSet::new();
        for (x, y) in [(0usize, 1usize), (1, 2)] {
            for k in 0..4 {
                for l in 0..4 {
                    if k == 0 && l == 0 {
                        continue;
                    }
                    let mut key = [0usize; 3];
                    key[x] = k;
                    key[y] = l;
                    keys.insert(key);
                }
            }
        }
        assert_eq!(keys.len(), 27);
    }

    #[test]
    fn conflicting_overlap_rejected() {
        let l = SubsystemLayout::qubits(["A", "B", "C"]).unwrap();
        let mut rng = seeded_rng(9);
        let r1 = sample_density(&l, None, &mut rng).unwrap();
        let r2 = sample_density(&l, None, &mut rng).unwrap();
        let ab = r1.reduce(&["A", "B"]).unwrap();
        let bc = r2.reduce(&["B", "C"]).unwrap();
        assert!(matches!(
            constraints_from_marginals(&l, &[&ab, &bc]),
            Err(Error::ConstraintConflict { .. })
        ));
    }

    #[test]
    fn scaled_duplicate_is_detected() {
        let mut set = ConstraintSet::empty();
        let z = crate::tensor::pauli_z();
        assert!(set.push_dedup(z.clone(), 0.4, "z").unwrap());
        assert!(!set
            .push_dedup(&z * crate::tensor::C64::new(-2.0, 0.0), -0.8, "-2z")
            .unwrap());
        assert!(set
            .push_dedup(&z * crate::tensor::C64::new(-2.0, 0.0), 0.8, "bad")
            .is_err());
        assert!(ConstraintSet::new(vec![z], vec![]).is_err());
    }
}

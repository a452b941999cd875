//! Random states. Every sampler takes an explicit generator; [`seeded_rng`]
//! fixes the algorithm (ChaCha8) so seeded fixtures regenerate identically.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use super::DensityOperator;
use crate::error::{Error, Result};
use crate::tensor::{self, ComplexMatrix, SubsystemLayout, C64};

pub type Rng64 = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> Rng64 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `rows × cols` matrix of independent standard complex Gaussians
/// (`E|z|² = 1`).
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        C64::new(re * s, im * s)
    })
}

/// Haar-random unitary: QR of a Ginibre matrix with the phases of `diag(R)`
/// fixed to one.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> ComplexMatrix {
    let qr = ginibre(dim, dim, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / C64::new(d.norm(), 0.0)
        } else {
            C64::new(1.0, 0.0)
        };
        for i in 0..dim {
            u[(i, j)] *= phase;
        }
    }
    u
}

/// Uniform point on the probability simplex with `n` vertices.
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<f64> {
    let x: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let s: f64 = x.iter().sum();
    x.into_iter().map(|v| v / s).collect()
}

/// Hilbert-Schmidt ensemble sample `GG†/Tr(GG†)` with `G` of shape
/// `dim × rank` (full rank when `rank` is `None`).
pub fn sample_density<R: Rng + ?Sized>(
    layout: &SubsystemLayout,
    rank: Option<usize>,
    rng: &mut R,
) -> Result<DensityOperator> {
    let d = layout.total_dim();
    let k = rank.unwrap_or(d);
    if k == 0 || k > d {
        return Err(Error::InvalidState(format!("rank {k} outside 1..={d}")));
    }
    let g = ginibre(d, k, rng);
    DensityOperator::normalized(layout.clone(), &g * g.adjoint())
}

fn sample_factor<R: Rng + ?Sized>(dim: usize, kind: FactorKind, rng: &mut R) -> ComplexMatrix {
    match kind {
        FactorKind::Generic => {
            let g = ginibre(dim, dim, rng);
            let m = &g * g.adjoint();
            let tr = m.trace();
            m / tr
        }
        FactorKind::Diagonal => tensor::diagonal(&random_simplex(dim, rng)),
    }
}

/// One summand `p_j ρ_{A B_jᴸ} ⊗ ρ_{B_jᴿ C}` of the block decomposition of B.
#[derive(Clone, Debug, PartialEq)]
pub struct QmcBlock {
    pub weight: f64,
    pub left_dim: usize,
    pub right_dim: usize,
}

impl QmcBlock {
    pub fn new(weight: f64, left_dim: usize, right_dim: usize) -> Self {
        Self {
            weight,
            left_dim,
            right_dim,
        }
    }
}

#[derive(Clone, Debug)]
pub enum BasisRotation {
    Identity,
    /// Fresh Haar-random unitary on B per sample.
    Haar,
    Fixed(ComplexMatrix),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FactorKind {
    /// Full-rank Hilbert-Schmidt factors.
    Generic,
    /// Random diagonal (classical) factors.
    Diagonal,
}

/// Block structure of a quantum Markov chain A − B − C with
/// `H_B = ⊕_j H_{B_jᴸ} ⊗ H_{B_jᴿ}`.
#[derive(Clone, Debug)]
pub struct QmcSpec {
    pub dim_a: usize,
    pub dim_c: usize,
    pub blocks: Vec<QmcBlock>,
    pub basis_rotation: BasisRotation,
    pub factors: FactorKind,
}

impl QmcSpec {
    /// Generic factors and a Haar-random rotation on B.
    pub fn new(dim_a: usize, dim_c: usize, blocks: Vec<QmcBlock>) -> Result<Self> {
        let spec = Self {
            dim_a,
            dim_c,
            blocks,
            basis_rotation: BasisRotation::Haar,
            factors: FactorKind::Generic,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_rotation(mut self, rotation: BasisRotation) -> Self {
        self.basis_rotation = rotation;
        self
    }

    pub fn with_factors(mut self, factors: FactorKind) -> Self {
        self.factors = factors;
        self
    }

    pub fn dim_b(&self) -> usize {
        self.blocks.iter().map(|b| b.left_dim * b.right_dim).sum()
    }

    pub fn layout(&self) -> Result<SubsystemLayout> {
        SubsystemLayout::new(["A", "B", "C"], [self.dim_a, self.dim_b(), self.dim_c])
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim_a == 0 || self.dim_c == 0 {
            return Err(Error::InvalidSpec(
                "dim_A and dim_C must be positive".into(),
            ));
        }
        if self.blocks.is_empty() {
            return Err(Error::InvalidSpec("at least one block is required".into()));
        }
        if self
            .blocks
            .iter()
            .any(|b| b.left_dim == 0 || b.right_dim == 0)
        {
            return Err(Error::InvalidSpec(
                "block dimensions must be positive".into(),
            ));
        }
        if self
            .blocks
            .iter()
            .any(|b| !(b.weight >= 0.0) || !b.weight.is_finite())
        {
            return Err(Error::InvalidSpec(
                "block weights must be non-negative".into(),
            ));
        }
        let total: f64 = self.blocks.iter().map(|b| b.weight).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidSpec(format!("block weights sum to {total}")));
        }
        if let BasisRotation::Fixed(u) = &self.basis_rotation {
            let d = self.dim_b();
            if u.nrows() != d || u.ncols() != d {
                return Err(Error::InvalidSpec(format!("rotation must be {d}x{d}")));
            }
            if (u * u.adjoint() - tensor::identity(d)).norm() > 1e-10 {
                return Err(Error::InvalidSpec("rotation is not unitary".into()));
            }
        }
        self.layout()?;
        Ok(())
    }
}

/// Samples `⊕_j p_j ρ_{A B_jᴸ} ⊗ ρ_{B_jᴿ C}` on layout `A, B, C`, then
/// conjugates by the basis rotation on B.
pub fn sample_qmc<R: Rng + ?Sized>(spec: &QmcSpec, rng: &mut R) -> Result<DensityOperator> {
    spec.validate()?;
    let (da, dc, db) = (spec.dim_a, spec.dim_c, spec.dim_b());
    let d = da * db * dc;
    let mut m = ComplexMatrix::zeros(d, d);
    let idx = |a: usize, b: usize, c: usize| (a * db + b) * dc + c;
    let mut offset = 0;
    for block in &spec.blocks {
        let (dl, dr) = (block.left_dim, block.right_dim);
        let left = sample_factor(da * dl, spec.factors, rng);
        let right = sample_factor(dr * dc, spec.factors, rng);
        let p = C64::new(block.weight, 0.0);
        for a in 0..da {
            for l in 0..dl {
                for a2 in 0..da {
                    for l2 in 0..dl {
                        let x = left[(a * dl + l, a2 * dl + l2)];
                        if x == C64::new(0.0, 0.0) {
                            continue;
                        }
                        for r in 0..dr {
                            for c in 0..dc {
                                for r2 in 0..dr {
                                    for c2 in 0..dc {
                                        let y = right[(r * dc + c, r2 * dc + c2)];
                                        let row = idx(a, offset + l * dr + r, c);
                                        let col = idx(a2, offset + l2 * dr + r2, c2);
                                        m[(row, col)] = p * x * y;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
        offset += dl * dr;
    }
    let rotation = match &spec.basis_rotation {
        BasisRotation::Identity => None,
        BasisRotation::Haar => Some(haar_unitary(db, rng)),
        BasisRotation::Fixed(u) => Some(u.clone()),
    };
    if let Some(u) = rotation {
        let full = tensor::kron_all([&tensor::identity(da), &u, &tensor::identity(dc)]);
        m = &full * m * full.adjoint();
    }
    DensityOperator::normalized(spec.layout()?, m)
}

/// Random block structure for a chain with the given dimensions: between one
/// and `max_blocks` blocks whose sizes sum to `dim_b`, each split into a
/// random `left × right` factorisation, with uniform simplex weights.
pub fn random_qmc_spec<R: Rng + ?Sized>(
    dim_a: usize,
    dim_b: usize,
    dim_c: usize,
    max_blocks: usize,
    rng: &mut R,
) -> Result<QmcSpec> {
    if dim_b == 0 || max_blocks == 0 {
        return Err(Error::InvalidSpec(
            "dim_B and max_blocks must be positive".into(),
        ));
    }
    let k = rng.random_range(1..=max_blocks.min(dim_b));
    // random composition of dim_b into k positive parts
    let mut cuts: Vec<usize> = (1..dim_b).collect();
    for i in 0..k - 1 {
        let j = rng.random_range(i..cuts.len());
        cuts.swap(i, j);
    }
    let mut cuts: Vec<usize> = cuts[..k - 1].to_vec();
    cuts.sort_unstable();
    let mut sizes = Vec::with_capacity(k);
    let mut prev = 0;
    for c in cuts.iter().copied().chain(std::iter::once(dim_b)) {
        sizes.push(c - prev);
        prev = c;
    }
    let weights = random_simplex(k, rng);
    let blocks = sizes
        .iter()
        .zip(weights)
        .map(|(&s, w)| {
            let divisors: Vec<usize> = (1..=s).filter(|d| s % d == 0).collect();
            let left = divisors[rng.random_range(0..divisors.len())];
            QmcBlock::new(w, left, s / left)
        })
        .collect();
    QmcSpec::new(dim_a, dim_c, blocks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{conditional_mutual_information, von_neumann_entropy};

    #[test]
    fn rank_one_sample_is_pure() {
        let l = SubsystemLayout::qubits(["A", "B"]).unwrap();
        let mut rng = seeded_rng(3);
        let rho = sample_density(&l, Some(1), &mut rng).unwrap();
        assert!(von_neumann_entropy(&rho).abs() < 1e-10);
        assert!(sample_density(&l, Some(5), &mut rng).is_err());
    }

    #[test]
    fn seeded_samples_repeat() {
        let l = SubsystemLayout::qubits(["A", "B", "C"]).unwrap();
        let a = sample_density(&l, None, &mut seeded_rng(11)).unwrap();
        let b = sample_density(&l, None, &mut seeded_rng(11)).unwrap();
        assert_eq!(a.matrix(), b.matrix());
    }

    #[test]
    fn haar_is_unitary() {
        let u = haar_unitary(5, &mut seeded_rng(1));
        assert!((&u * u.adjoint() - tensor::identity(5)).norm() < 1e-12);
    }

    #[test]
    fn degenerate_decomposition_gives_product() {
        let spec = QmcSpec::new(2, 2, vec![QmcBlock::new(1.0, 1, 2)]).unwrap();
        let rho = sample_qmc(&spec, &mut seeded_rng(5)).unwrap();
        let a = rho.reduce(&["A"]).unwrap();
        let bc = rho.reduce(&["B", "C"]).unwrap();
        assert!(rho.trace_distance(&a.tensor(&bc).unwrap()).unwrap() < 1e-12);
        assert!(
            conditional_mutual_information(&rho, &["A"], &["B"], &["C"])
                .unwrap()
                .abs()
                < 1e-10
        );
    }

    #[test]
    fn two_qubit_blocks_are_markov() {
        let spec = QmcSpec::new(
            2,
            2,
            vec![QmcBlock::new(0.5, 1, 1), QmcBlock::new(0.5, 1, 1)],
        )
        .unwrap();
        let rho = sample_qmc(&spec, &mut seeded_rng(8)).unwrap();
        assert!(conditional_mutual_information(&rho, &["A"], &["B"], &["C"]).unwrap() <= 1e-9);
    }

    #[test]
    fn classical_spec_matches_chain_joint() {
        // blocks of size 1 label the value of B; factors are conditionals on A and C
        let spec = QmcSpec::new(
            2,
            3,
            vec![QmcBlock::new(0.3, 1, 1), QmcBlock::new(0.7, 1, 1)],
        )
        .unwrap()
        .with_rotation(BasisRotation::Identity)
        .with_factors(FactorKind::Diagonal);
        let mut rng = seeded_rng(21);
        let rho = sample_qmc(&spec, &mut rng).unwrap();
        // replay the generator to obtain the conditionals
        let mut replay = seeded_rng(21);
        let mut joint = vec![0.0; 12];
        for (b, block) in spec.blocks.iter().enumerate() {
            let pa = random_simplex(2, &mut replay);
            let pc = random_simplex(3, &mut replay);
            for a in 0..2 {
                for c in 0..3 {
                    joint[(a * 2 + b) * 3 + c] = block.weight * pa[a] * pc[c];
                }
            }
        }
        for i in 0..12 {
            for j in 0..12 {
                let expect = if i == j { joint[i] } else { 0.0 };
                assert!((rho.matrix()[(i, j)] - C64::new(expect, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn invalid_specs() {
        assert!(QmcSpec::new(2, 2, vec![]).is_err());
        assert!(QmcSpec::new(2, 2, vec![QmcBlock::new(0.4, 1, 1)]).is_err());
        assert!(QmcSpec::new(0, 2, vec![QmcBlock::new(1.0, 1, 1)]).is_err());
        let bad = QmcSpec::new(2, 2, vec![QmcBlock::new(1.0, 1, 2)])
            .unwrap()
            .with_rotation(BasisRotation::Fixed(tensor::diagonal(&[1.0, 2.0])));
        assert!(bad.validate().is_err());
    }

    #[test]
    fn random_specs_cover_dim_b() {
        let mut rng = seeded_rng(0);
        for _ in 0..50 {
            let s = random_qmc_spec(2, 4, 2, 2, &mut rng).unwrap();
            assert_eq!(s.dim_b(), 4);
            assert!(s.blocks.len() <= 2);
        }
    }
}

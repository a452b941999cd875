use rand::Rng;

use super::prufer_tree;
use crate::error::{Error, Result};
use crate::states::{haar_unitary, sample_density, DensityOperator};
use crate::tensor::{self, kron_all, ComplexMatrix, SubsystemLayout};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeKind {
    /// Diagonal in the computational basis.
    Classical,
    /// Leaves carry generic qubit states conditioned on their neighbour and
    /// every factor is rotated by an independent Haar unitary.
    Quantum,
}

#[derive(Clone, Debug)]
pub struct MarkovTreeSample {
    pub state: DensityOperator,
    /// Generating tree as sorted layout-index pairs.
    pub edges: Vec<(usize, usize)>,
}

/// Uniformly random labelled tree on `n` vertices.
pub fn random_tree<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<(usize, usize)> {
    let seq: Vec<usize> = (0..n.saturating_sub(2))
        .map(|_| rng.random_range(0..n))
        .collect();
    prufer_tree(&seq, n)
}

fn binary_row<R: Rng + ?Sized>(rng: &mut R) -> [f64; 2] {
    let q = rng.random_range(0.05..0.95);
    [q, 1.0 - q]
}

/// Full-rank, globally Markov state of `labels.len()` qubits on a random
/// tree. Vertices of degree at least two are classical variables forming a
/// tree-structured distribution with strictly positive conditionals; each
/// leaf is conditioned on its neighbour only.
pub fn sample_markov_tree<R: Rng + ?Sized>(
    labels: &[&str],
    kind: TreeKind,
    rng: &mut R,
) -> Result<MarkovTreeSample> {
    let n = labels.len();
    if n < 2 {
        return Err(Error::InvalidTree(
            "a tree needs at least two vertices".into(),
        ));
    }
    let layout = SubsystemLayout::qubits(labels.iter().copied())?;
    let edges = random_tree(n, rng);
    if n == 2 {
        let state = match kind {
            TreeKind::Quantum => sample_density(&layout, None, rng)?,
            TreeKind::Classical => {
                let p: Vec<f64> = (0..4).map(|_| rng.random_range(0.05..1.0)).collect();
                let z: f64 = p.iter().sum();
                DensityOperator::from_diagonal(
                    layout,
                    &p.iter().map(|x| x / z).collect::<Vec<_>>(),
                )?
            }
        };
        return Ok(MarkovTreeSample { state, edges });
    }
    let degree = |v: usize| edges.iter().filter(|(i, j)| *i == v || *j == v).count();
    let internal: Vec<usize> = (0..n).filter(|&v| degree(v) >= 2).collect();
    let root = internal[0];
    let mut parent = vec![usize::MAX; n];
    let mut visit = vec![root];
    let mut seen = vec![false; n];
    seen[root] = true;
    let mut order = Vec::with_capacity(n);
    while let Some(u) = visit.pop() {
        order.push(u);
        for &(i, j) in &edges {
            for (a, b) in [(i, j), (j, i)] {
                if a == u && !seen[b] {
                    seen[b] = true;
                    parent[b] = u;
                    visit.push(b);
                }
            }
        }
    }
    let root_p = binary_row(rng);
    let transition: Vec<[[f64; 2]; 2]> =
        (0..n).map(|_| [binary_row(rng), binary_row(rng)]).collect();
    // leaf states conditioned on the parent's value
    let mut leaf_state: Vec<[ComplexMatrix; 2]> = Vec::with_capacity(n);
    let qubit = SubsystemLayout::qubits(["q"])?;
    for v in 0..n {
        let pair = match kind {
            TreeKind::Quantum if degree(v) == 1 => [
                sample_density(&qubit, None, rng)?.into_matrix(),
                sample_density(&qubit, None, rng)?.into_matrix(),
            ],
            _ => [
                tensor::diagonal(&transition[v][0]),
                tensor::diagonal(&transition[v][1]),
            ],
        };
        leaf_state.push(pair);
    }
    let projector = |b: usize| tensor::diagonal(if b == 0 { &[1.0, 0.0] } else { &[0.0, 1.0] });
    let dim = 1 << n;
    let mut joint = ComplexMatrix::zeros(dim, dim);
    let m = internal.len();
    for assignment in 0..1usize << m {
        let mut value = vec![0usize; n];
        for (k, &v) in internal.iter().enumerate() {
            value[v] = (assignment >> k) & 1;
        }
        let mut weight = root_p[value[root]];
        for &v in &order {
            if v != root && degree(v) >= 2 {
                weight *= transition[v][value[parent[v]]][value[v]];
            }
        }
        let factors: Vec<ComplexMatrix> = (0..n)
            .map(|v| {
                if degree(v) >= 2 {
                    projector(value[v])
                } else {
                    leaf_state[v][value[parent[v]]].clone()
                }
            })
            .collect();
        joint += kron_all(factors.iter()) * tensor::C64::new(weight, 0.0);
    }
    if kind == TreeKind::Quantum {
        let rotations: Vec<ComplexMatrix> = (0..n).map(|_| haar_unitary(2, rng)).collect();
        let u = kron_all(rotations.iter());
        joint = &u * joint * u.adjoint();
    }
    Ok(MarkovTreeSample {
        state: DensityOperator::normalized(layout, joint)?,
        edges,
    })
}

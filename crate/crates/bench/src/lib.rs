//! Shared fixtures for the criterion benchmarks.

use markovrec::states::{random_qmc_spec, sample_density, sample_qmc, seeded_rng};
use markovrec::tensor::SubsystemLayout;
use markovrec::tree::{sample_markov_tree, TreeKind};
use markovrec::{DensityOperator, QuantumTree, WeightedEdgeList};

pub fn letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| ((b'A' + i as u8) as char).to_string())
        .collect()
}

/// `(ρ_AB, ρ_BC)` of a sampled quantum Markov chain with the given `dim_B`.
pub fn qmc_pair(dim_b: usize, seed: u64) -> (DensityOperator, DensityOperator) {
    let mut rng = seeded_rng(seed);
    let spec = random_qmc_spec(2, dim_b, 2, 2, &mut rng).expect("valid spec");
    let rho = sample_qmc(&spec, &mut rng).expect("valid sample");
    (
        rho.reduce(&["A", "B"]).unwrap(),
        rho.reduce(&["B", "C"]).unwrap(),
    )
}

/// `(ρ_AB, ρ_BC)` of a generic three-qubit state.
pub fn generic_pair(seed: u64) -> (DensityOperator, DensityOperator) {
    let layout = SubsystemLayout::qubits(["A", "B", "C"]).unwrap();
    let rho = sample_density(&layout, None, &mut seeded_rng(seed)).unwrap();
    (
        rho.reduce(&["A", "B"]).unwrap(),
        rho.reduce(&["B", "C"]).unwrap(),
    )
}

/// Markov quantum tree on `n` qubits and its generating tree.
pub fn markov_tree(n: usize, seed: u64) -> (DensityOperator, QuantumTree) {
    let l = letters(n);
    let refs: Vec<&str> = l.iter().map(String::as_str).collect();
    let s = sample_markov_tree(&refs, TreeKind::Quantum, &mut seeded_rng(seed)).unwrap();
    let edges: Vec<(String, String)> = s
        .edges
        .iter()
        .map(|&(i, j)| (l[i].clone(), l[j].clone()))
        .collect();
    let tree = QuantumTree::from_joint(&s.state, &edges).unwrap();
    (s.state, tree)
}

pub fn mutual_information_weights(rho: &DensityOperator) -> WeightedEdgeList {
    WeightedEdgeList::from_joint(rho).unwrap()
}

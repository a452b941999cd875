use markovrec::states::{ginibre, sample_density, seeded_rng};
use markovrec::tensor::{
    embed, hs_inner, matrix_function, partial_trace, HermitianEig, MatrixFunction, SubsystemLayout,
};
use markovrec::ComplexMatrix;
use proptest::prelude::*;
use rand::Rng;

fn random_layout(seed: u64) -> SubsystemLayout {
    let mut rng = seeded_rng(seed);
    let n = rng.random_range(2..=4);
    let dims: Vec<usize> = (0..n).map(|_| rng.random_range(1..=3)).collect();
    SubsystemLayout::new((0..n).map(|i| format!("X{i}")), dims).unwrap()
}

fn random_subset(layout: &SubsystemLayout, seed: u64) -> Vec<String> {
    let mut rng = seeded_rng(seed);
    let mut keep: Vec<String> = layout
        .labels()
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .cloned()
        .collect();
    if keep.is_empty() {
        keep.push(layout.labels()[0].clone());
    }
    keep
}

proptest! {
    #![proptest_config(ProptestConfig { failure_persistence: None, ..ProptestConfig::with_cases(64) })]

    #[test]
    fn trace_of_embedding_scales_by_complement(seed in any::<u64>()) {
        let layout = random_layout(seed);
        let keep = random_subset(&layout, seed ^ 1);
        let sub = layout.sub_layout(&keep).unwrap();
        let op = ginibre(sub.total_dim(), sub.total_dim(), &mut seeded_rng(seed ^ 2));
        let e = embed(&op, &sub, &layout).unwrap();
        let (back, _) = partial_trace(&e, &layout, &keep).unwrap();
        let scale = (layout.total_dim() / sub.total_dim()) as f64;
        prop_assert!((back - &op * markovrec::C64::new(scale, 0.0)).norm() <= 1e-10 * scale.max(1.0));
        prop_assert!((e.trace() - op.trace() * scale).norm() < 1e-10 * scale);
    }

    #[test]
    fn partial_trace_and_embedding_are_adjoint(seed in any::<u64>()) {
        // ⟨Y, Tr_{S^c} X⟩ = ⟨Y ⊗ id, X⟩
        let layout = random_layout(seed);
        let keep = random_subset(&layout, seed ^ 3);
        let sub = layout.sub_layout(&keep).unwrap();
        let mut rng = seeded_rng(seed ^ 4);
        let x = ginibre(layout.total_dim(), layout.total_dim(), &mut rng);
        let y = ginibre(sub.total_dim(), sub.total_dim(), &mut rng);
        let (tx, _) = partial_trace(&x, &layout, &keep).unwrap();
        let lhs = hs_inner(&y, &tx).unwrap();
        let rhs = hs_inner(&embed(&y, &sub, &layout).unwrap(), &x).unwrap();
        prop_assert!((lhs - rhs).norm() <= 1e-10 * lhs.norm().max(1.0));
    }

    #[test]
    fn disjoint_partial_traces_commute(seed in any::<u64>()) {
        let layout = SubsystemLayout::new(["A", "B", "C"], [2, 3, 2]).unwrap();
        let x = ginibre(12, 12, &mut seeded_rng(seed));
        let (no_c, l_ab) = partial_trace(&x, &layout, &["A", "B"]).unwrap();
        let (then_a, _) = partial_trace(&no_c, &l_ab, &["B"]).unwrap();
        let (no_a, l_bc) = partial_trace(&x, &layout, &["B", "C"]).unwrap();
        let (then_c, _) = partial_trace(&no_a, &l_bc, &["B"]).unwrap();
        let (direct, _) = partial_trace(&x, &layout, &["B"]).unwrap();
        prop_assert!((&then_a - &direct).norm() < 1e-12);
        prop_assert!((&then_c - &direct).norm() < 1e-12);
    }

    #[test]
    fn exp_log_round_trip(seed in any::<u64>(), dim in 1usize..=8) {
        let layout = SubsystemLayout::new(["A"], [dim]).unwrap();
        let rho = sample_density(&layout, None, &mut seeded_rng(seed)).unwrap();
        let log = matrix_function(rho.matrix(), MatrixFunction::Log).unwrap();
        let back = matrix_function(&log, MatrixFunction::Exp).unwrap();
        prop_assert!((back - rho.matrix()).norm() <= 1e-8 * rho.matrix().norm());
    }

    #[test]
    fn eigendecomposition_reconstructs(seed in any::<u64>(), dim in 1usize..=10) {
        let g = ginibre(dim, dim, &mut seeded_rng(seed));
        let h: ComplexMatrix = &g + g.adjoint();
        let e = HermitianEig::new(&h).unwrap();
        prop_assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        prop_assert!((e.reconstruct() - &h).norm() <= 1e-10 * h.norm().max(1.0));
        let v = &e.eigenvectors;
        prop_assert!((v.adjoint() * v - ComplexMatrix::identity(dim, dim)).norm() < 1e-10);
    }

    #[test]
    fn square_root_squares_back(seed in any::<u64>(), rank in 1usize..=6) {
        let layout = SubsystemLayout::new(["A"], [6]).unwrap();
        let rho = sample_density(&layout, Some(rank), &mut seeded_rng(seed)).unwrap();
        let s = matrix_function(rho.matrix(), MatrixFunction::Sqrt).unwrap();
        prop_assert!((&s * &s - rho.matrix()).norm() <= 1e-9 * rho.matrix().norm());
    }
}

use markovrec::maxent::{
    bayesian_update, constraints_from_marginals, diagram_commutes, marginal_constraints,
    solve_maxent, DualMethod, DualObjective, MaxEntConfig,
};
use markovrec::recovery::{check_qmc_compatibility, Tolerances};
use markovrec::states::{
    random_qmc_spec, relative_entropy, sample_density, sample_qmc, seeded_rng, von_neumann_entropy,
};
use markovrec::tensor::SubsystemLayout;
use markovrec::{DensityOperator, MarginalSet};
use proptest::prelude::*;
use rand::Rng;

fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        failure_persistence: None,
        ..ProptestConfig::with_cases(cases)
    }
}

fn chain_marginals(seed: u64) -> (DensityOperator, MarginalSet) {
    let layout = SubsystemLayout::qubits(["A", "B", "C"]).unwrap();
    let rho = sample_density(&layout, None, &mut seeded_rng(seed)).unwrap();
    let set = MarginalSet::from_joint(&rho, &[&["A", "B"][..], &["B", "C"][..]]).unwrap();
    (rho, set)
}

proptest! {
    #![proptest_config(config(24))]

    #[test]
    fn dual_is_convex_along_segments(seed in any::<u64>()) {
        let (_, set) = chain_marginals(seed);
        let c = marginal_constraints(&set).unwrap();
        let obj = DualObjective::new(&c, None, 8).unwrap();
        let mut rng = seeded_rng(seed ^ 1);
        let a: Vec<f64> = (0..c.len()).map(|_| rng.random_range(-2.0..2.0)).collect();
        let b: Vec<f64> = (0..c.len()).map(|_| rng.random_range(-2.0..2.0)).collect();
        let mid: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 0.5 * (x + y)).collect();
        let chord = 0.5 * (obj.value(&a).unwrap() + obj.value(&b).unwrap());
        prop_assert!(obj.value(&mid).unwrap() <= chord + 1e-9);
    }

    #[test]
    fn solution_satisfies_constraints_and_dominates_entropy(seed in any::<u64>()) {
        let (rho, set) = chain_marginals(seed);
        let c = marginal_constraints(&set).unwrap();
        let s = solve_maxent(&c, set.parent(), &MaxEntConfig::default()).unwrap();
        prop_assert!(s.residual <= 1e-6);
        prop_assert!(set.max_deviation(&s.state).unwrap() <= 1e-6);
        prop_assert!(von_neumann_entropy(&s.state) >= von_neumann_entropy(&rho) - 1e-7);
        // F(λ) − S(ρ_λ) = Σ λ_i (⟨Θ_i⟩ − t_i), exactly zero at a finite optimum
        let obj = DualObjective::new(&c, None, 8).unwrap();
        let g = obj.gradient(&s.multipliers).unwrap();
        let slack: f64 = s.multipliers.iter().zip(&g).map(|(l, gi)| l * gi).sum();
        let gap = obj.value(&s.multipliers).unwrap() - von_neumann_entropy(&s.state);
        prop_assert!((gap - slack).abs() < 1e-8, "{gap} vs {slack}");
    }

    #[test]
    fn solution_is_independent_of_the_descent_path(seed in any::<u64>()) {
        let layout = SubsystemLayout::qubits(["A", "B"]).unwrap();
        let rho = sample_density(&layout, None, &mut seeded_rng(seed)).unwrap();
        let a = rho.reduce(&["A"]).unwrap();
        let b = rho.reduce(&["B"]).unwrap();
        let c = constraints_from_marginals(&layout, &[&a, &b]).unwrap();
        let newton = solve_maxent(&c, &layout, &MaxEntConfig::default()).unwrap();
        let gd = solve_maxent(&c, &layout, &MaxEntConfig { method: DualMethod::GradientDescent, ..Default::default() }).unwrap();
        prop_assert!(newton.state.trace_distance(&gd.state).unwrap() < 1e-6);
        prop_assert!(newton.state.trace_distance(&a.tensor(&b).unwrap()).unwrap() < 1e-7);
    }

    #[test]
    fn uniform_prior_update_is_maxent(seed in any::<u64>()) {
        let (_, set) = chain_marginals(seed);
        let c = marginal_constraints(&set).unwrap();
        let cfg = MaxEntConfig::default();
        let direct = solve_maxent(&c, set.parent(), &cfg).unwrap();
        let update = bayesian_update(&DensityOperator::maximally_mixed(set.parent().clone()), &c, &cfg).unwrap();
        prop_assert!(direct.state.trace_distance(&update.state).unwrap() < 1e-7);
        prop_assert!(update.residual <= 1e-6);
    }
}

/// Low-rank joints can put the optimum on the boundary of the state space;
/// those must end in a reported error, never in a silently wrong state.
#[test]
fn boundary_optima_are_accepted_or_reported() {
    let layout = SubsystemLayout::qubits(["A", "B", "C"]).unwrap();
    let mut rng = seeded_rng(31);
    let (mut solved, mut reported) = (0, 0);
    for _ in 0..30 {
        let rank = rng.random_range(1..=4);
        let rho = sample_density(&layout, Some(rank), &mut rng).unwrap();
        let set = MarginalSet::from_joint(&rho, &[&["A", "B"][..], &["B", "C"][..]]).unwrap();
        let c = marginal_constraints(&set).unwrap();
        match solve_maxent(&c, &layout, &MaxEntConfig::default()) {
            Ok(s) => {
                solved += 1;
                assert!(s.residual <= 1e-6);
                assert!(set.max_deviation(&s.state).unwrap() <= 1e-6);
            }
            Err(markovrec::Error::Infeasible { .. } | markovrec::Error::NonConvergence { .. }) => {
                reported += 1
            }
            Err(e) => panic!("unexpected error {e}"),
        }
    }
    assert_eq!(solved + reported, 30);
}

/// Analytic gradient against central differences at 20 random points.
#[test]
fn gradient_matches_central_differences() {
    let mut rng = seeded_rng(99);
    let layout = SubsystemLayout::new(["A", "B"], [2, 4]).unwrap();
    for _ in 0..20 {
        let rho = sample_density(&layout, None, &mut rng).unwrap();
        let c = constraints_from_marginals(&layout, &[&rho]).unwrap();
        let obj = DualObjective::new(&c, None, 8).unwrap();
        let lambda: Vec<f64> = (0..c.len()).map(|_| rng.random_range(-0.7..0.7)).collect();
        let g = obj.gradient(&lambda).unwrap();
        let h = 1e-5;
        for i in 0..c.len() {
            let (mut p, mut m) = (lambda.clone(), lambda.clone());
            p[i] += h;
            m[i] -= h;
            let fd = (obj.value(&p).unwrap() - obj.value(&m).unwrap()) / (2.0 * h);
            assert!(
                (fd - g[i]).abs() <= 1e-5 * g[i].abs().max(1e-3),
                "{fd} vs {}",
                g[i]
            );
        }
    }
}

/// Relative entropy to the intermediate state never decreases along the
/// second update: S(ρ̃‖σ̃′) ≥ S(σ̃‖σ̃′).
#[test]
fn updates_are_monotone_in_relative_entropy() {
    let mut rng = seeded_rng(123);
    let cfg = MaxEntConfig::default();
    let layout = SubsystemLayout::qubits(["A", "B", "C"]).unwrap();
    for k in 0..8 {
        let rho = if k % 2 == 0 {
            sample_density(&layout, None, &mut rng).unwrap()
        } else {
            sample_qmc(&random_qmc_spec(2, 2, 2, 2, &mut rng).unwrap(), &mut rng).unwrap()
        };
        let (ab, bc) = (
            rho.reduce(&["A", "B"]).unwrap(),
            rho.reduce(&["B", "C"]).unwrap(),
        );
        let Ok(r) = diagram_commutes(&ab, &bc, 1e-5, &cfg) else {
            continue;
        };
        let joint_side = relative_entropy(&r.joint, &r.sigma_prime).unwrap();
        let sequential = relative_entropy(&r.sigma, &r.sigma_prime).unwrap();
        assert!(
            joint_side >= sequential - 1e-7,
            "{joint_side} < {sequential}"
        );
        let joint_side = relative_entropy(&r.joint, &r.varrho_prime).unwrap();
        let sequential = relative_entropy(&r.varrho, &r.varrho_prime).unwrap();
        assert!(
            joint_side >= sequential - 1e-7,
            "{joint_side} < {sequential}"
        );
        let verdict = check_qmc_compatibility(&ab, &bc, &Tolerances::default())
            .unwrap()
            .verdict;
        assert_eq!(r.commutes, verdict);
    }
}

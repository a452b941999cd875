use nalgebra::{DMatrix, DVector};

use super::ConstraintSet;
use crate::error::{Error, Result};
use crate::states::DensityOperator;
use crate::tensor::{hs_inner, ComplexMatrix, HermitianEig, SplitMatrix, SubsystemLayout};

/// Descent direction used by [`solve_dual`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DualMethod {
    /// Damped Newton steps, falling back to the gradient when the Hessian
    /// step is not a descent direction.
    Newton,
    GradientDescent,
}

#[derive(Clone, Debug)]
pub struct MaxEntConfig {
    /// Stop when `max |∇F| ≤ tolerance`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// A solution whose residual is at most this is returned even if the
    /// iteration cap or a line-search stall stops the solver early.
    pub accept_residual: f64,
    /// Euclidean norm of λ beyond which the targets are declared infeasible.
    pub multiplier_cap: f64,
    pub armijo: f64,
    pub backtrack: f64,
    pub method: DualMethod,
}

impl Default for MaxEntConfig {
    fn default() -> Self {
        Self {
            tolerance: 1e-8,
            max_iterations: 10_000,
            accept_residual: 1e-6,
            multiplier_cap: 1e3,
            armijo: 1e-4,
            backtrack: 0.5,
            method: DualMethod::Newton,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MaxEntSolution {
    pub multipliers: Vec<f64>,
    pub state: DensityOperator,
    /// `log Tr exp(H₀ + Σ λᵢ Θᵢ)`.
    pub log_partition: f64,
    /// Largest absolute constraint violation `|Tr ρΘᵢ − tᵢ|`.
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
}

/// Everything the solver needs at one multiplier vector.
#[derive(Clone, Debug)]
pub struct DualPoint {
    pub value: f64,
    pub log_partition: f64,
    pub gradient: Vec<f64>,
    /// Expectations `Tr ρ(λ) Θᵢ`.
    pub expectations: Vec<f64>,
    eig: HermitianEig,
    weights: Vec<f64>,
}

impl DualPoint {
    pub fn residual(&self) -> f64 {
        self.gradient.iter().fold(0.0, |m, g| m.max(g.abs()))
    }

    /// The Gibbs state `exp(H)/Z` as a raw matrix.
    pub fn gibbs_matrix(&self) -> ComplexMatrix {
        self.eig.reconstruct_weights(&self.weights)
    }
}

/// The convex dual `F(λ) = log Tr exp(H₀ + Σ λᵢ Θᵢ) − Σ λᵢ tᵢ`.
pub struct DualObjective<'a> {
    base: Option<&'a ComplexMatrix>,
    constraints: &'a ConstraintSet,
    dim: usize,
}

impl<'a> DualObjective<'a> {
    pub fn new(
        constraints: &'a ConstraintSet,
        base: Option<&'a ComplexMatrix>,
        dim: usize,
    ) -> Result<Self> {
        if let Some(d) = constraints.dim() {
            if d != dim {
                return Err(Error::DimensionMismatch(format!(
                    "observables have dimension {d}, layout {dim}"
                )));
            }
        }
        if let Some(b) = base {
            if b.nrows() != dim || b.ncols() != dim {
                return Err(Error::DimensionMismatch(
                    "base Hamiltonian does not match layout".into(),
                ));
            }
        }
        Ok(Self {
            base,
            constraints,
            dim,
        })
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    pub fn hamiltonian(&self, lambda: &[f64]) -> ComplexMatrix {
        let mut h = match self.base {
            Some(b) => b.clone(),
            None => ComplexMatrix::zeros(self.dim, self.dim),
        };
        for (l, o) in lambda.iter().zip(self.constraints.observables()) {
            if *l != 0.0 {
                h.zip_apply(o, |x, y| *x += y * *l);
            }
        }
        h
    }

    pub fn evaluate(&self, lambda: &[f64]) -> Result<DualPoint> {
        let eig = HermitianEig::new(&self.hamiltonian(lambda))?;
        let emax = eig.max_eigenvalue();
        let mut weights: Vec<f64> = eig.eigenvalues.iter().map(|e| (e - emax).exp()).collect();
        let z: f64 = weights.iter().sum();
        weights.iter_mut().for_each(|w| *w /= z);
        let log_partition = emax + z.ln();
        let mut point = DualPoint {
            value: 0.0,
            log_partition,
            gradient: Vec::new(),
            expectations: Vec::new(),
            eig,
            weights,
        };
        let rho = point.gibbs_matrix();
        let mut value = log_partition;
        for ((o, t), l) in self
            .constraints
            .observables()
            .iter()
            .zip(self.constraints.targets())
            .zip(lambda)
        {
            let e = hs_inner(&rho, o)?.re;
            point.expectations.push(e);
            point.gradient.push(e - t);
            value -= l * t;
        }
        point.value = value;
        Ok(point)
    }

    pub fn value(&self, lambda: &[f64]) -> Result<f64> {
        Ok(self.evaluate(lambda)?.value)
    }

    pub fn gradient(&self, lambda: &[f64]) -> Result<Vec<f64>> {
        Ok(self.evaluate(lambda)?.gradient)
    }

    /// Hessian of `F`: the Kubo-Mori covariance of the observables, computed
    /// from divided differences of `exp` in the eigenbasis of `H`.
    pub fn hessian_at(&self, point: &DualPoint) -> DMatrix<f64> {
        let n = self.len();
        let e = &point.eig.eigenvalues;
        let emax = point.eig.max_eigenvalue();
        let d = self.dim;
        let z: f64 = e.iter().map(|x| (x - emax).exp()).sum();
        let mut kernel = DMatrix::<f64>::zeros(d, d);
        for a in 0..d {
            for b in 0..d {
                let (x, y) = (e[a] - emax, e[b] - emax);
                let (hi, lo) = if x >= y { (x, y) } else { (y, x) };
                let gap = hi - lo;
                let g = if gap < 1e-300 {
                    hi.exp()
                } else {
                    hi.exp() * -(-gap).exp_m1() / gap
                };
                kernel[(a, b)] = g / z;
            }
        }
        // divided differences of exp are positive, so H = R Rᵀ with rows of R
        // holding √K-weighted parts of the centred observables V†(Θ − m)V
        let v = SplitMatrix::new(&point.eig.eigenvectors);
        let vt = SplitMatrix::new(&point.eig.eigenvectors.adjoint());
        let sqrt_kernel = kernel.map(f64::sqrt);
        let mut r = DMatrix::<f64>::zeros(n, 2 * d * d);
        for (i, o) in self.constraints.observables().iter().enumerate() {
            let rotated = vt.mul(&SplitMatrix::new(o).mul(&v));
            let mut re = rotated.re.unwrap_or_else(|| DMatrix::zeros(d, d));
            for k in 0..d {
                re[(k, k)] -= point.expectations[i];
            }
            for (part, offset) in [(Some(re), 0), (rotated.im, d * d)] {
                if let Some(m) = part {
                    let weighted = m.component_mul(&sqrt_kernel);
                    for (k, x) in weighted.iter().enumerate() {
                        r[(i, offset + k)] = *x;
                    }
                }
            }
        }
        &r * r.transpose()
    }

    pub fn hessian(&self, lambda: &[f64]) -> Result<DMatrix<f64>> {
        let p = self.evaluate(lambda)?;
        Ok(self.hessian_at(&p))
    }
}

fn newton_direction(h: &DMatrix<f64>, g: &[f64], damping: f64) -> Option<Vec<f64>> {
    let n = g.len();
    let rhs = DVector::from_iterator(n, g.iter().map(|x| -x));
    let scale = (0..n)
        .fold(0.0f64, |m, i| m.max(h[(i, i)].abs()))
        .max(1e-300);
    let mut shift = damping * scale;
    for _ in 0..12 {
        let mut m = h.clone();
        for i in 0..n {
            m[(i, i)] += shift;
        }
        if let Some(chol) = m.cholesky() {
            let x = chol.solve(&rhs);
            if x.iter().all(|v| v.is_finite()) {
                return Some(x.iter().copied().collect());
            }
        }
        shift = if shift == 0.0 {
            1e-12 * scale
        } else {
            shift * 100.0
        };
    }
    None
}

struct LineSearch<'a> {
    objective: &'a DualObjective<'a>,
    config: &'a MaxEntConfig,
}

impl LineSearch<'_> {
    /// Backtracks from `step` along `dir`; returns the accepted point and step.
    fn run(
        &self,
        lambda: &[f64],
        point: &DualPoint,
        dir: &[f64],
        mut step: f64,
        tries: usize,
    ) -> Result<Option<(Vec<f64>, DualPoint, f64)>> {
        let slope: f64 = dir.iter().zip(&point.gradient).map(|(a, b)| a * b).sum();
        if !(slope < 0.0) {
            return Ok(None);
        }
        // near the optimum F is flat to rounding, so accept any step that
        // reduces the gradient without increasing F beyond noise
        let noise = 1e-14 * point.value.abs().max(1.0);
        for _ in 0..tries {
            let trial: Vec<f64> = lambda.iter().zip(dir).map(|(l, d)| l + step * d).collect();
            let p = self.objective.evaluate(&trial)?;
            let gain = p.value - point.value;
            if gain <= self.config.armijo * step * slope
                || (gain <= noise && p.residual() < point.residual())
            {
                return Ok(Some((trial, p, step)));
            }
            step *= self.config.backtrack;
        }
        Ok(None)
    }
}

/// Minimises the dual from `λ = 0` and returns the Gibbs state as a raw
/// solution. `base` is the fixed part `H₀` of the exponent.
pub fn solve_dual(
    constraints: &ConstraintSet,
    base: Option<&ComplexMatrix>,
    layout: &SubsystemLayout,
    config: &MaxEntConfig,
) -> Result<MaxEntSolution> {
    let objective = DualObjective::new(constraints, base, layout.total_dim())?;
    let search = LineSearch {
        objective: &objective,
        config,
    };
    let n = objective.len();
    let mut lambda = vec![0.0; n];
    let mut point = objective.evaluate(&lambda)?;
    let mut iterations = 0;
    let mut gd_step = 1.0;
    let mut damping = 0.0;
    while point.residual() > config.tolerance && iterations < config.max_iterations {
        iterations += 1;
        let mut accepted = None;
        if config.method == DualMethod::Newton {
            let h = objective.hessian_at(&point);
            for attempt in 0..8 {
                if let Some(dir) = newton_direction(&h, &point.gradient, damping) {
                    if let Some((trial, p, step)) = search.run(&lambda, &point, &dir, 1.0, 30)? {
                        if attempt == 0 && step == 1.0 {
                            damping = if damping < 1e-10 { 0.0 } else { damping * 0.1 };
                        }
                        accepted = Some((trial, p));
                        break;
                    }
                }
                damping = (damping * 10.0).clamp(1e-8, 1e6);
            }
        }
        if accepted.is_none() {
            let dir: Vec<f64> = point.gradient.iter().map(|x| -x).collect();
            if let Some((trial, p, step)) = search.run(&lambda, &point, &dir, gd_step, 60)? {
                gd_step = (step * 2.0).min(1e6);
                accepted = Some((trial, p));
            }
        }
        let Some((trial, p)) = accepted else {
            break;
        };
        lambda = trial;
        point = p;
        let norm = lambda.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > config.multiplier_cap {
            return Err(Error::Infeasible {
                norm,
                cap: config.multiplier_cap,
            });
        }
    }
    let residual = point.residual();
    let converged = residual <= config.tolerance;
    if !converged && residual > config.accept_residual {
        return Err(Error::NonConvergence {
            iterations,
            residual,
        });
    }
    let state = DensityOperator::new(layout.clone(), point.gibbs_matrix())?;
    Ok(MaxEntSolution {
        multipliers: lambda,
        state,
        log_partition: point.log_partition,
        residual,
        iterations,
        converged,
    })
}

/// Maximum-entropy state on `layout` satisfying `constraints`.
pub fn solve_maxent(
    constraints: &ConstraintSet,
    layout: &SubsystemLayout,
    config: &MaxEntConfig,
) -> Result<MaxEntSolution> {
    solve_dual(constraints, None, layout, config)
}

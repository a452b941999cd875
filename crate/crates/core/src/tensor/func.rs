use nalgebra::SymmetricEigen;

use super::{hermiticity_residual, ComplexMatrix, C64};
use crate::error::{Error, Result};

/// Eigenvalues below `CUTOFF_RELATIVE × λ_max` are treated as exact zeros.
pub const CUTOFF_RELATIVE: f64 = 1e-12;
/// Most negative eigenvalue accepted as "positive semidefinite".
pub const PSD_TOLERANCE: f64 = 1e-10;
const HERMITIAN_TOLERANCE: f64 = 1e-10;

/// Spectral decomposition `V · diag(λ) · V†` of a Hermitian matrix, with the
/// eigenvalues ascending.
#[derive(Clone, Debug)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn new(op: &ComplexMatrix) -> Result<Self> {
        if op.nrows() != op.ncols() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} is not square",
                op.nrows(),
                op.ncols()
            )));
        }
        let residual = hermiticity_residual(op);
        if residual > HERMITIAN_TOLERANCE {
            return Err(Error::NotHermitian { residual });
        }
        let sym = (op + op.adjoint()) * C64::new(0.5, 0.0);
        let n = sym.nrows();
        let eig = SymmetricEigen::try_new(sym, f64::EPSILON, 0)
            .expect("symmetric eigensolver without iteration limit always converges");
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
        let eigenvalues = order.iter().map(|&i| eig.eigenvalues[i]).collect();
        let eigenvectors = ComplexMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
        Ok(Self {
            eigenvalues,
            eigenvectors,
        })
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }

    /// Absolute cutoff below which eigenvalues count as zero.
    pub fn cutoff(&self) -> f64 {
        CUTOFF_RELATIVE * self.eigenvalue_scale()
    }

    fn eigenvalue_scale(&self) -> f64 {
        self.eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    /// Number of eigenvalues above the cutoff.
    pub fn rank(&self) -> usize {
        let cut = self.cutoff();
        self.eigenvalues.iter().filter(|v| **v > cut).count()
    }

    pub fn check_psd(&self) -> Result<()> {
        let min = self.min_eigenvalue();
        if min < -PSD_TOLERANCE * self.eigenvalue_scale().max(1.0) {
            return Err(Error::NegativeEigenvalue { eigenvalue: min });
        }
        Ok(())
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> C64) -> ComplexMatrix {
        let n = self.eigenvalues.len();
        let mut scaled = self.eigenvectors.clone();
        for (j, lambda) in self.eigenvalues.iter().enumerate() {
            let w = f(*lambda);
            for i in 0..n {
                scaled[(i, j)] *= w;
            }
        }
        scaled * self.eigenvectors.adjoint()
    }

    /// `V · diag(w) · V†` for explicit real weights, one per eigenvalue.
    pub fn reconstruct_weights(&self, w: &[f64]) -> ComplexMatrix {
        assert_eq!(w.len(), self.eigenvalues.len());
        let n = w.len();
        let mut scaled = self.eigenvectors.clone();
        for (j, wj) in w.iter().enumerate() {
            for i in 0..n {
                scaled[(i, j)] *= *wj;
            }
        }
        scaled * self.eigenvectors.adjoint()
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| C64::new(l, 0.0))
    }

    /// Applies `f` to the spectrum; see [`MatrixFunction`] for kernel handling.
    pub fn apply(&self, f: MatrixFunction) -> Result<ComplexMatrix> {
        if f.needs_psd() {
            self.check_psd()?;
        }
        let cut = self.cutoff();
        let zero = C64::new(0.0, 0.0);
        let on_support = |l: f64, g: &dyn Fn(f64) -> C64| if l > cut { g(l) } else { zero };
        Ok(match f {
            MatrixFunction::Sqrt => {
                self.reconstruct_with(|l| on_support(l, &|l| C64::new(l.sqrt(), 0.0)))
            }
            MatrixFunction::InvSqrt => {
                self.reconstruct_with(|l| on_support(l, &|l| C64::new(1.0 / l.sqrt(), 0.0)))
            }
            MatrixFunction::Log => {
                self.reconstruct_with(|l| on_support(l, &|l| C64::new(l.ln(), 0.0)))
            }
            MatrixFunction::Exp => self.reconstruct_with(|l| C64::new(l.exp(), 0.0)),
            MatrixFunction::Power(z) => {
                self.reconstruct_with(|l| on_support(l, &|l| (z * l.ln()).exp()))
            }
        })
    }
}

/// Spectral functions of Hermitian matrices.
///
/// Everything except `Exp` is support-restricted: eigenvalues at or below the
/// cutoff map to zero, so `InvSqrt` and `Log` act as pseudo-functions that
/// vanish on the kernel.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatrixFunction {
    Sqrt,
    InvSqrt,
    Log,
    Exp,
    /// `λ^z` for complex `z`, evaluated as `exp(z ln λ)`.
    Power(C64),
}

impl MatrixFunction {
    fn needs_psd(self) -> bool {
        !matches!(self, MatrixFunction::Exp)
    }
}

pub fn matrix_function(op: &ComplexMatrix, f: MatrixFunction) -> Result<ComplexMatrix> {
    HermitianEig::new(op)?.apply(f)
}

/// Ascending eigenvalues of a Hermitian matrix.
pub fn eigvalsh(op: &ComplexMatrix) -> Result<Vec<f64>> {
    // TODO: skip the eigenvector accumulation here once nalgebra exposes a
    // complex eigenvalues-only path with the same accuracy.
    Ok(HermitianEig::new(op)?.eigenvalues)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::{diagonal, identity};

    #[test]
    fn sqrt_of_identity() {
        let s = matrix_function(&identity(3), MatrixFunction::Sqrt).unwrap();
        assert!((s - identity(3)).norm() < 1e-14);
    }

    #[test]
    fn inv_sqrt_is_pseudo_inverse_on_support() {
        let r = matrix_function(&diagonal(&[4.0, 0.0]), MatrixFunction::InvSqrt).unwrap();
        assert!((r - diagonal(&[0.5, 0.0])).norm() < 1e-14);
    }

    #[test]
    fn natural_log() {
        let e = std::f64::consts::E;
        let r = matrix_function(&diagonal(&[e, e * e]), MatrixFunction::Log).unwrap();
        assert!((r - diagonal(&[1.0, 2.0])).norm() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian_and_negative() {
        let mut m = identity(2);
        m[(0, 1)] = C64::new(1.0, 0.0);
        assert!(matches!(
            matrix_function(&m, MatrixFunction::Exp),
            Err(Error::NotHermitian { .. })
        ));
        let neg = diagonal(&[1.0, -0.1]);
        assert!(matches!(
            matrix_function(&neg, MatrixFunction::Sqrt),
            Err(Error::NegativeEigenvalue { .. })
        ));
        assert!(matrix_function(&neg, MatrixFunction::Exp).is_ok());
        // within tolerance is accepted and clipped
        let tiny = diagonal(&[1.0, -1e-13]);
        let s = matrix_function(&tiny, MatrixFunction::Sqrt).unwrap();
        assert!((s - diagonal(&[1.0, 0.0])).norm() < 1e-14);
    }

    #[test]
    fn complex_power_matches_real_powers() {
        let d = diagonal(&[0.25, 0.5]);
        let half = matrix_function(&d, MatrixFunction::Power(C64::new(0.5, 0.0))).unwrap();
        let sqrt = matrix_function(&d, MatrixFunction::Sqrt).unwrap();
        assert!((half - sqrt).norm() < 1e-14);
        let rot = matrix_function(&d, MatrixFunction::Power(C64::new(0.0, 1.0))).unwrap();
        // λ^{i} is unitary on the support
        assert!((&rot * rot.adjoint() - identity(2)).norm() < 1e-14);
    }

    #[test]
    fn eigen_sorted_ascending() {
        let v = eigvalsh(&diagonal(&[3.0, -1.0, 2.0])).unwrap();
        assert_eq!(v, vec![-1.0, 2.0, 3.0]);
    }
}

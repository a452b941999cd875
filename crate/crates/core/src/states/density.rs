use crate::error::{Error, Result};
use crate::tensor::{
    self, partial_trace, reorder, ComplexMatrix, HermitianEig, SubsystemLayout, C64,
};

const HERMITIAN_TOLERANCE: f64 = 1e-10;
const PSD_TOLERANCE: f64 = 1e-10;
const TRACE_TOLERANCE: f64 = 1e-9;

/// A Hermitian, positive-semidefinite, unit-trace operator bound to a layout.
#[derive(Clone, Debug)]
pub struct DensityOperator {
    layout: SubsystemLayout,
    matrix: ComplexMatrix,
}

impl DensityOperator {
    /// Validates `matrix` as a state on `layout`. The stored matrix is the
    /// Hermitian part of the input.
    pub fn new(layout: SubsystemLayout, matrix: ComplexMatrix) -> Result<Self> {
        let dim = layout.total_dim();
        if matrix.nrows() != dim || matrix.ncols() != dim {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} matrix on layout {layout} of dimension {dim}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        let norm = matrix.norm();
        let herm = (&matrix - matrix.adjoint()).norm();
        if herm > HERMITIAN_TOLERANCE * norm.max(f64::MIN_POSITIVE) {
            return Err(Error::NotHermitian {
                residual: herm / norm,
            });
        }
        let tr = matrix.trace();
        if (tr - C64::new(1.0, 0.0)).norm() > TRACE_TOLERANCE {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let matrix = (&matrix + matrix.adjoint()) * C64::new(0.5, 0.0);
        let min = tensor::eigvalsh(&matrix)?[0];
        if min < -PSD_TOLERANCE {
            return Err(Error::NegativeEigenvalue { eigenvalue: min });
        }
        Ok(Self { layout, matrix })
    }

    /// Scales a positive-semidefinite matrix to unit trace, then validates it.
    pub fn normalized(layout: SubsystemLayout, matrix: ComplexMatrix) -> Result<Self> {
        let tr = matrix.trace().re;
        if !(tr > 0.0) || !tr.is_finite() {
            return Err(Error::InvalidState(format!(
                "cannot normalise a matrix of trace {tr}"
            )));
        }
        Self::new(layout, matrix / C64::new(tr, 0.0))
    }

    pub fn maximally_mixed(layout: SubsystemLayout) -> Self {
        let d = layout.total_dim();
        let matrix = tensor::identity(d) / C64::new(d as f64, 0.0);
        Self { layout, matrix }
    }

    /// Diagonal state with the given probabilities in the computational basis.
    pub fn from_diagonal(layout: SubsystemLayout, probabilities: &[f64]) -> Result<Self> {
        if probabilities.iter().any(|p| *p < 0.0 || !p.is_finite()) {
            return Err(Error::InvalidState(
                "probabilities must be finite and non-negative".into(),
            ));
        }
        Self::new(layout, tensor::diagonal(probabilities))
    }

    /// `|ψ⟩⟨ψ|` for a vector normalised on the fly.
    pub fn pure(layout: SubsystemLayout, amplitudes: &[C64]) -> Result<Self> {
        let v = nalgebra::DVector::from_column_slice(amplitudes);
        let n = v.norm();
        if n == 0.0 {
            return Err(Error::InvalidState("zero state vector".into()));
        }
        let v = v / C64::new(n, 0.0);
        Self::new(layout, &v * v.adjoint())
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn labels(&self) -> &[String] {
        self.layout.labels()
    }

    pub fn eig(&self) -> HermitianEig {
        HermitianEig::new(&self.matrix).expect("density operators are Hermitian")
    }

    pub fn is_full_rank(&self) -> bool {
        self.eig().rank() == self.dim()
    }

    /// Tensor product with a state on disjoint factors.
    pub fn tensor(&self, other: &Self) -> Result<Self> {
        if !self.layout.intersection(&other.layout).is_empty() {
            return Err(Error::InvalidLayout("tensor factors overlap".into()));
        }
        let layout = self.layout.union(&other.layout)?;
        Ok(Self {
            layout,
            matrix: self.matrix.kronecker(&other.matrix),
        })
    }

    /// Reduced state on `keep`, ordered as in this layout.
    pub fn reduce<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        let (m, sub) = partial_trace(&self.matrix, &self.layout, keep)?;
        Ok(Self {
            layout: sub,
            matrix: m,
        })
    }

    /// The same state expressed with the factor order of `to`.
    pub fn reordered(&self, to: &SubsystemLayout) -> Result<Self> {
        let m = reorder(&self.matrix, &self.layout, to)?;
        Ok(Self {
            layout: to.clone(),
            matrix: m,
        })
    }

    /// Trace distance `½‖ρ − σ‖₁`. Layouts must hold the same factors; the
    /// order may differ.
    pub fn trace_distance(&self, other: &Self) -> Result<f64> {
        let other = if other.layout == self.layout {
            other.clone()
        } else {
            other.reordered(&self.layout)?
        };
        Ok(tensor::trace_distance(&self.matrix, &other.matrix))
    }
}

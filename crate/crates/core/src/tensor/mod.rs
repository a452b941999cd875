//! Tensor-product index bookkeeping and Hermitian matrix calculus.

mod func;
mod layout;
mod ops;

pub use func::{
    eigvalsh, matrix_function, HermitianEig, MatrixFunction, CUTOFF_RELATIVE, PSD_TOLERANCE,
};
pub use layout::{SubsystemLayout, DEFAULT_DIM_CAP};
pub use ops::{
    embed, hermiticity_residual, hs_inner, kron_all, partial_trace, reorder, SplitMatrix,
};

use nalgebra::DMatrix;

pub type C64 = num_complex::Complex64;

/// Dense complex matrix. Operators on a layout are indexed big-endian: the
/// first label of the layout is the most significant digit.
pub type ComplexMatrix = DMatrix<C64>;

pub fn identity(dim: usize) -> ComplexMatrix {
    ComplexMatrix::identity(dim, dim)
}

pub fn diagonal(values: &[f64]) -> ComplexMatrix {
    let n = values.len();
    let mut m = ComplexMatrix::zeros(n, n);
    for (i, v) in values.iter().enumerate() {
        m[(i, i)] = C64::new(*v, 0.0);
    }
    m
}

/// Builds a matrix from row-major entries.
pub fn from_row_major(rows: usize, cols: usize, entries: &[C64]) -> ComplexMatrix {
    ComplexMatrix::from_row_slice(rows, cols, entries)
}

pub fn to_row_major(m: &ComplexMatrix) -> Vec<C64> {
    let mut out = Vec::with_capacity(m.nrows() * m.ncols());
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out.push(m[(i, j)]);
        }
    }
    out
}

pub fn pauli_x() -> ComplexMatrix {
    from_row_major(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(1.0, 0.0),
            C64::new(0.0, 0.0),
        ],
    )
}

pub fn pauli_y() -> ComplexMatrix {
    from_row_major(
        2,
        2,
        &[
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ],
    )
}

pub fn pauli_z() -> ComplexMatrix {
    diagonal(&[1.0, -1.0])
}

/// Half the trace norm of `a - b`. Both inputs must be Hermitian.
pub fn trace_distance(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let diff = a - b;
    let diff = (&diff + diff.adjoint()) * C64::new(0.5, 0.0);
    0.5 * diff
        .symmetric_eigenvalues()
        .iter()
        .map(|x| x.abs())
        .sum::<f64>()
}

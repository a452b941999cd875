use nalgebra::DMatrix;

use super::{ComplexMatrix, SubsystemLayout, C64};
use crate::error::{Error, Result};

/// Flattened offsets, in `layout`, of every multi-index over `factors`.
/// The first listed factor is the most significant digit of the enumeration.
fn offsets(layout: &SubsystemLayout, factors: &[usize]) -> Vec<usize> {
    let strides = layout.strides();
    let dims = layout.dims();
    let mut out = vec![0usize];
    for &f in factors {
        let mut next = Vec::with_capacity(out.len() * dims[f]);
        for base in &out {
            for d in 0..dims[f] {
                next.push(base + d * strides[f]);
            }
        }
        out = next;
    }
    out
}

fn check_square(op: &ComplexMatrix, dim: usize) -> Result<()> {
    if op.nrows() != dim || op.ncols() != dim {
        return Err(Error::DimensionMismatch(format!(
            "operator is {}x{}, layout dimension is {dim}",
            op.nrows(),
            op.ncols()
        )));
    }
    Ok(())
}

/// Traces out every factor of `layout` not listed in `keep`. The result acts
/// on the kept factors in their `layout` order.
pub fn partial_trace<S: AsRef<str>>(
    op: &ComplexMatrix,
    layout: &SubsystemLayout,
    keep: &[S],
) -> Result<(ComplexMatrix, SubsystemLayout)> {
    check_square(op, layout.total_dim())?;
    let sub = layout.sub_layout(keep)?;
    let kept: Vec<usize> = sub
        .labels()
        .iter()
        .map(|l| layout.index_of(l))
        .collect::<Result<_>>()?;
    let traced: Vec<usize> = (0..layout.len()).filter(|i| !kept.contains(i)).collect();
    let k = offsets(layout, &kept);
    let t = offsets(layout, &traced);
    let n = k.len();
    let mut out = ComplexMatrix::zeros(n, n);
    for (i, ki) in k.iter().enumerate() {
        for (j, kj) in k.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for tt in &t {
                acc += op[(ki + tt, kj + tt)];
            }
            out[(i, j)] = acc;
        }
    }
    Ok((out, sub))
}

/// Extends `op`, acting on the factors of `sub`, to `target` by tensoring with
/// the identity on the remaining factors. The factors of `sub` may appear in
/// any order and need not be contiguous in `target`.
pub fn embed(
    op: &ComplexMatrix,
    sub: &SubsystemLayout,
    target: &SubsystemLayout,
) -> Result<ComplexMatrix> {
    check_square(op, sub.total_dim())?;
    let mut factors = Vec::with_capacity(sub.len());
    for (l, d) in sub.labels().iter().zip(sub.dims()) {
        let i = target.index_of(l)?;
        if target.dims()[i] != *d {
            return Err(Error::DimensionMismatch(format!(
                "label `{l}` has dimension {d}, target has {}",
                target.dims()[i]
            )));
        }
        factors.push(i);
    }
    let rest: Vec<usize> = (0..target.len()).filter(|i| !factors.contains(i)).collect();
    let k = offsets(target, &factors);
    let t = offsets(target, &rest);
    let n = target.total_dim();
    let mut out = ComplexMatrix::zeros(n, n);
    for (i, ki) in k.iter().enumerate() {
        for (j, kj) in k.iter().enumerate() {
            let v = op[(i, j)];
            if v == C64::new(0.0, 0.0) {
                continue;
            }
            for tt in &t {
                out[(ki + tt, kj + tt)] = v;
            }
        }
    }
    Ok(out)
}

/// Re-expresses `op` on `from` in the factor order of `to`, which must hold
/// exactly the same factors.
pub fn reorder(
    op: &ComplexMatrix,
    from: &SubsystemLayout,
    to: &SubsystemLayout,
) -> Result<ComplexMatrix> {
    if !from.same_factors(to) {
        return Err(Error::DimensionMismatch(format!(
            "cannot reorder {from} into {to}"
        )));
    }
    if from == to {
        return Ok(op.clone());
    }
    embed(op, from, to)
}

/// Hilbert-Schmidt inner product `Tr(a† b)`.
pub fn hs_inner(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<C64> {
    if a.shape() != b.shape() || a.nrows() != a.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "hs_inner of {:?} and {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum())
}

/// Kronecker product of the given factors, first factor most significant.
pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> ComplexMatrix {
    let mut acc = ComplexMatrix::identity(1, 1);
    for f in factors {
        acc = acc.kronecker(f);
    }
    acc
}

/// Real and imaginary parts of a complex matrix; a part that is exactly
/// zero is returned as `None`.
pub struct SplitMatrix {
    pub re: Option<DMatrix<f64>>,
    pub im: Option<DMatrix<f64>>,
    rows: usize,
    cols: usize,
}

impl SplitMatrix {
    pub fn new(m: &ComplexMatrix) -> Self {
        let re = m.map(|z| z.re);
        let im = m.map(|z| z.im);
        let keep = |x: DMatrix<f64>| {
            if x.iter().all(|v| *v == 0.0) {
                None
            } else {
                Some(x)
            }
        };
        Self {
            re: keep(re),
            im: keep(im),
            rows: m.nrows(),
            cols: m.ncols(),
        }
    }

    /// Product through real matrix multiplications, which are much faster
    /// than the generic complex kernel.
    pub fn mul(&self, other: &SplitMatrix) -> SplitMatrix {
        assert_eq!(self.cols, other.rows);
        let prod = |a: &Option<DMatrix<f64>>, b: &Option<DMatrix<f64>>| match (a, b) {
            (Some(a), Some(b)) => Some(a * b),
            _ => None,
        };
        let combine = |x: Option<DMatrix<f64>>, y: Option<DMatrix<f64>>, sign: f64| match (x, y) {
            (Some(x), Some(y)) => Some(x + y * sign),
            (Some(x), None) => Some(x),
            (None, Some(y)) => Some(y * sign),
            (None, None) => None,
        };
        let re = combine(prod(&self.re, &other.re), prod(&self.im, &other.im), -1.0);
        let im = combine(prod(&self.re, &other.im), prod(&self.im, &other.re), 1.0);
        SplitMatrix {
            re,
            im,
            rows: self.rows,
            cols: other.cols,
        }
    }

    pub fn to_complex(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.rows, self.cols, |i, j| {
            C64::new(
                self.re.as_ref().map_or(0.0, |m| m[(i, j)]),
                self.im.as_ref().map_or(0.0, |m| m[(i, j)]),
            )
        })
    }
}

/// `‖A − A†‖_F / max(‖A‖_F, 1)`.
pub fn hermiticity_residual(a: &ComplexMatrix) -> f64 {
    (a - a.adjoint()).norm() / a.norm().max(1.0)
}

use crate::tensor::{self, ComplexMatrix, C64};

/// Generalised Gell-Mann basis of Hermitian operators on `C^d`: `Λ₀ = id`
/// followed by the `d² − 1` traceless generators, normalised to
/// `Tr(Λⱼ²) = 2`.
///
/// Only mutual orthogonality matters to the solver; `Λ₀` is kept as the
/// identity rather than scaled to unit norm.
#[derive(Clone, Debug)]
pub struct OperatorBasis {
    dim: usize,
    elements: Vec<ComplexMatrix>,
}

impl OperatorBasis {
    pub fn gell_mann(dim: usize) -> Self {
        assert!(dim > 0, "basis dimension must be positive");
        let mut elements = Vec::with_capacity(dim * dim);
        elements.push(tensor::identity(dim));
        let unit = |i: usize, j: usize, v: C64| {
            let mut m = ComplexMatrix::zeros(dim, dim);
            m[(i, j)] = v;
            m
        };
        for j in 0..dim {
            for k in j + 1..dim {
                elements.push(unit(j, k, C64::new(1.0, 0.0)) + unit(k, j, C64::new(1.0, 0.0)));
                elements.push(unit(j, k, C64::new(0.0, -1.0)) + unit(k, j, C64::new(0.0, 1.0)));
            }
        }
        for l in 1..dim {
            let scale = (2.0 / (l * (l + 1)) as f64).sqrt();
            let mut diag = vec![0.0; dim];
            for d in diag.iter_mut().take(l) {
                *d = scale;
            }
            diag[l] = -(l as f64) * scale;
            elements.push(tensor::diagonal(&diag));
        }
        Self { dim, elements }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }
}

use crate::error::{Error, Result};

pub const DEFAULT_DIM_CAP: usize = 4096;

/// Ordered, labelled tensor factors with their local dimensions.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubsystemLayout {
    labels: Vec<String>,
    dims: Vec<usize>,
}

impl SubsystemLayout {
    pub fn new<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        dims: impl IntoIterator<Item = usize>,
    ) -> Result<Self> {
        Self::with_cap(labels, dims, DEFAULT_DIM_CAP)
    }

    pub fn with_cap<S: Into<String>>(
        labels: impl IntoIterator<Item = S>,
        dims: impl IntoIterator<Item = usize>,
        cap: usize,
    ) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let dims: Vec<usize> = dims.into_iter().collect();
        if labels.len() != dims.len() {
            return Err(Error::InvalidLayout(format!(
                "{} labels but {} dims",
                labels.len(),
                dims.len()
            )));
        }
        if labels.is_empty() {
            return Err(Error::InvalidLayout("layout has no factors".into()));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() {
                return Err(Error::InvalidLayout("empty label".into()));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidLayout(format!("duplicate label `{l}`")));
            }
        }
        if let Some(l) = labels
            .iter()
            .zip(&dims)
            .find(|(_, d)| **d == 0)
            .map(|(l, _)| l)
        {
            return Err(Error::InvalidLayout(format!(
                "factor `{l}` has dimension 0"
            )));
        }
        let mut total: usize = 1;
        for d in &dims {
            total = total.checked_mul(*d).filter(|t| *t <= cap).ok_or_else(|| {
                Error::InvalidLayout(format!("total dimension exceeds cap {cap}"))
            })?;
        }
        Ok(Self { labels, dims })
    }

    /// `n` qubits labelled by the given names.
    pub fn qubits<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let n = labels.len();
        Self::new(labels, std::iter::repeat_n(2, n))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn contains(&self, label: &str) -> bool {
        self.labels.iter().any(|l| l == label)
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn dim_of(&self, label: &str) -> Result<usize> {
        Ok(self.dims[self.index_of(label)?])
    }

    /// Sub-layout on `keep`, ordered as in `self`.
    pub fn sub_layout<S: AsRef<str>>(&self, keep: &[S]) -> Result<Self> {
        if keep.is_empty() {
            return Err(Error::InvalidLayout("empty label selection".into()));
        }
        let mut idx = Vec::with_capacity(keep.len());
        for k in keep {
            let i = self.index_of(k.as_ref())?;
            if idx.contains(&i) {
                return Err(Error::InvalidLayout(format!(
                    "label `{}` selected twice",
                    k.as_ref()
                )));
            }
            idx.push(i);
        }
        idx.sort_unstable();
        Ok(Self {
            labels: idx.iter().map(|&i| self.labels[i].clone()).collect(),
            dims: idx.iter().map(|&i| self.dims[i]).collect(),
        })
    }

    /// Labels of `self` not in `keep`, in layout order.
    pub fn complement<S: AsRef<str>>(&self, keep: &[S]) -> Vec<String> {
        self.labels
            .iter()
            .filter(|l| !keep.iter().any(|k| k.as_ref() == l.as_str()))
            .cloned()
            .collect()
    }

    /// Concatenation of `self` with the factors of `other` not already present.
    /// Shared labels must carry equal dimensions.
    pub fn union(&self, other: &Self) -> Result<Self> {
        let mut labels = self.labels.clone();
        let mut dims = self.dims.clone();
        for (l, d) in other.labels.iter().zip(&other.dims) {
            match self.index_of(l) {
                Ok(i) if self.dims[i] != *d => {
                    return Err(Error::DimensionMismatch(format!(
                        "label `{l}` has dimension {} and {d}",
                        self.dims[i]
                    )))
                }
                Ok(_) => {}
                Err(_) => {
                    labels.push(l.clone());
                    dims.push(*d);
                }
            }
        }
        Self::new(labels, dims)
    }

    /// Labels present in both layouts, in `self` order.
    pub fn intersection(&self, other: &Self) -> Vec<String> {
        self.labels
            .iter()
            .filter(|l| other.contains(l))
            .cloned()
            .collect()
    }

    /// True when both layouts hold the same factors, possibly in different order.
    pub fn same_factors(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self
                .labels
                .iter()
                .zip(&self.dims)
                .all(|(l, d)| other.dim_of(l).map(|od| od == *d).unwrap_or(false))
    }

    /// Row-major strides of each factor in the flattened index.
    pub(crate) fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.dims.len()];
        for i in (0..self.dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.dims[i + 1];
        }
        strides
    }
}

impl std::fmt::Display for SubsystemLayout {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .labels
            .iter()
            .zip(&self.dims)
            .map(|(l, d)| format!("{l}:{d}"))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

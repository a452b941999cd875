use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::states::{mutual_information, DensityOperator, MarginalSet};
use crate::tensor::SubsystemLayout;

/// Mutual informations closer than this are treated as equal by
/// [`chow_liu_tree`], so near-ties resolve by pair order rather than noise.
pub const WEIGHT_TIE_TOLERANCE: f64 = 1e-10;

/// A spanning tree on the factors of a layout with one bipartite marginal
/// per edge.
#[derive(Clone, Debug)]
pub struct QuantumTree {
    layout: SubsystemLayout,
    /// Edges as layout indices `(i, j)` with `i < j`, sorted.
    edges: Vec<(usize, usize)>,
    /// Marginal of each edge, factor order as in the layout.
    marginals: Vec<DensityOperator>,
}

fn check_spanning_tree(n: usize, edges: &[(usize, usize)]) -> Result<()> {
    if edges.len() + 1 != n {
        return Err(Error::InvalidTree(format!(
            "{} edges on {n} vertices",
            edges.len()
        )));
    }
    let mut uf = UnionFind::new(n);
    for &(i, j) in edges {
        if i == j || !uf.union(i, j) {
            return Err(Error::InvalidTree(
                "edge set contains a cycle or loop".into(),
            ));
        }
    }
    Ok(())
}

impl QuantumTree {
    /// Builds a tree whose edges are read off the marginals' factor pairs.
    pub fn new(layout: SubsystemLayout, marginals: Vec<DensityOperator>) -> Result<Self> {
        if layout.len() < 2 {
            return Err(Error::InvalidTree(
                "a tree needs at least two vertices".into(),
            ));
        }
        let mut pairs = Vec::with_capacity(marginals.len());
        for m in marginals {
            if m.layout().len() != 2 {
                return Err(Error::InvalidTree(format!(
                    "edge marginal on {} is not bipartite",
                    m.layout()
                )));
            }
            let i = layout.index_of(&m.labels()[0])?;
            let j = layout.index_of(&m.labels()[1])?;
            let (i, j) = if i < j { (i, j) } else { (j, i) };
            let sub = layout.sub_layout(&[&layout.labels()[i], &layout.labels()[j]])?;
            if !sub.same_factors(m.layout()) {
                return Err(Error::DimensionMismatch(format!(
                    "edge marginal {} does not match {sub}",
                    m.layout()
                )));
            }
            pairs.push(((i, j), m.reordered(&sub)?));
        }
        pairs.sort_by_key(|(e, _)| *e);
        let (edges, marginals): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        check_spanning_tree(layout.len(), &edges)?;
        let set = MarginalSet::new(layout.clone(), marginals)?;
        let marginals = set.marginals().to_vec();
        Ok(Self {
            layout,
            edges,
            marginals,
        })
    }

    /// Tree with the given edges and the marginals of `rho` on them.
    pub fn from_joint<S: AsRef<str>>(rho: &DensityOperator, edges: &[(S, S)]) -> Result<Self> {
        let marginals = edges
            .iter()
            .map(|(a, b)| rho.reduce(&[a.as_ref(), b.as_ref()]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(rho.layout().clone(), marginals)
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn edge_indices(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edges(&self) -> Vec<(String, String)> {
        let l = self.layout.labels();
        self.edges
            .iter()
            .map(|&(i, j)| (l[i].clone(), l[j].clone()))
            .collect()
    }

    pub fn marginals(&self) -> &[DensityOperator] {
        &self.marginals
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges
            .iter()
            .filter(|(i, j)| *i == v || *j == v)
            .count()
    }

    /// Marginal on the edge `{u, v}`, if present.
    pub fn edge_marginal(&self, u: usize, v: usize) -> Option<&DensityOperator> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges
            .iter()
            .position(|e| *e == key)
            .map(|k| &self.marginals[k])
    }

    /// Single-vertex marginal, taken from the first incident edge.
    pub fn vertex_marginal(&self, v: usize) -> Result<DensityOperator> {
        let k = self
            .edges
            .iter()
            .position(|(i, j)| *i == v || *j == v)
            .expect("spanning tree");
        self.marginals[k].reduce(&[&self.layout.labels()[v]])
    }

    /// Leaf-elimination sequence `(leaf, neighbour)`: repeatedly remove the
    /// leaf with the lowest layout index until one vertex is left.
    pub fn peeling_order(&self) -> Vec<(usize, usize)> {
        let n = self.layout.len();
        let mut alive = vec![true; n];
        let mut degree: Vec<usize> = (0..n).map(|v| self.degree(v)).collect();
        let mut order = Vec::with_capacity(n - 1);
        for _ in 0..n - 1 {
            let leaf = (0..n)
                .find(|&v| alive[v] && degree[v] == 1)
                .expect("trees have leaves");
            let anchor = self
                .edges
                .iter()
                .find_map(|&(i, j)| match (i == leaf, j == leaf) {
                    (true, _) if alive[j] => Some(j),
                    (_, true) if alive[i] => Some(i),
                    _ => None,
                })
                .expect("leaf has a neighbour");
            alive[leaf] = false;
            degree[leaf] = 0;
            degree[anchor] -= 1;
            order.push((leaf, anchor));
        }
        order
    }
}

/// Quantum mutual information of every unordered pair of factors.
#[derive(Clone, Debug)]
pub struct WeightedEdgeList {
    layout: SubsystemLayout,
    /// `(i, j, I(i:j))` with `i < j`, in lexicographic order.
    weights: Vec<(usize, usize, f64)>,
}

impl WeightedEdgeList {
    /// Accepts weights keyed by label pairs; every pair must appear once.
    pub fn new<S: AsRef<str>>(layout: SubsystemLayout, entries: &[(S, S, f64)]) -> Result<Self> {
        let mut seen = BTreeSet::new();
        let mut weights = Vec::with_capacity(entries.len());
        for (a, b, w) in entries {
            let i = layout.index_of(a.as_ref())?;
            let j = layout.index_of(b.as_ref())?;
            if i == j {
                return Err(Error::IncompleteWeights(format!(
                    "self-pair `{}`",
                    a.as_ref()
                )));
            }
            let key = (i.min(j), i.max(j));
            if !seen.insert(key) {
                return Err(Error::IncompleteWeights(format!(
                    "pair {}-{} listed twice",
                    a.as_ref(),
                    b.as_ref()
                )));
            }
            if !w.is_finite() || *w < -1e-9 {
                return Err(Error::IncompleteWeights(format!(
                    "weight {w} for {}-{}",
                    a.as_ref(),
                    b.as_ref()
                )));
            }
            weights.push((key.0, key.1, *w));
        }
        let n = layout.len();
        if n < 2 || seen.len() != n * (n - 1) / 2 {
            return Err(Error::IncompleteWeights(format!(
                "{} of {} pairs present",
                seen.len(),
                n * n.saturating_sub(1) / 2
            )));
        }
        weights.sort_by_key(|&(i, j, _)| (i, j));
        Ok(Self { layout, weights })
    }

    pub fn from_joint(rho: &DensityOperator) -> Result<Self> {
        let l = rho.labels();
        let mut entries = Vec::new();
        for i in 0..l.len() {
            for j in i + 1..l.len() {
                let pair = rho.reduce(&[&l[i], &l[j]])?;
                entries.push((
                    l[i].clone(),
                    l[j].clone(),
                    mutual_information(&pair, &[&l[i]], &[&l[j]])?,
                ));
            }
        }
        Self::new(rho.layout().clone(), &entries)
    }

    /// Weights from bipartite marginals, one per pair.
    pub fn from_pairs(layout: SubsystemLayout, pairs: &[DensityOperator]) -> Result<Self> {
        let mut entries = Vec::with_capacity(pairs.len());
        for m in pairs {
            if m.layout().len() != 2 {
                return Err(Error::IncompleteWeights(format!(
                    "marginal on {} is not bipartite",
                    m.layout()
                )));
            }
            let (a, b) = (&m.labels()[0], &m.labels()[1]);
            entries.push((a.clone(), b.clone(), mutual_information(m, &[a], &[b])?));
        }
        Self::new(layout, &entries)
    }

    pub fn layout(&self) -> &SubsystemLayout {
        &self.layout
    }

    pub fn weights(&self) -> &[(usize, usize, f64)] {
        &self.weights
    }

    pub fn weight(&self, i: usize, j: usize) -> f64 {
        let key = (i.min(j), i.max(j));
        self.weights
            .iter()
            .find(|(a, b, _)| (*a, *b) == key)
            .map(|w| w.2)
            .expect("complete list")
    }

    pub fn total(&self, edges: &[(usize, usize)]) -> f64 {
        edges.iter().map(|&(i, j)| self.weight(i, j)).sum()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra.max(rb)] = ra.min(rb);
        true
    }
}

/// Maximum-weight spanning tree by Kruskal: edges in descending weight,
/// equal weights in lexicographic pair order, kept iff they join two
/// components. Returns sorted index pairs.
pub fn chow_liu_tree(weights: &WeightedEdgeList) -> Vec<(usize, usize)> {
    let n = weights.layout().len();
    let mut sorted: Vec<(i64, usize, usize)> = weights
        .weights()
        .iter()
        .map(|&(i, j, w)| (-(w / WEIGHT_TIE_TOLERANCE).round() as i64, i, j))
        .collect();
    sorted.sort_unstable();
    let mut uf = UnionFind::new(n);
    let mut edges: Vec<(usize, usize)> = sorted
        .into_iter()
        .filter(|&(_, i, j)| uf.union(i, j))
        .map(|(_, i, j)| (i, j))
        .collect();
    edges.sort_unstable();
    edges
}

/// Decodes a Prüfer sequence over `0..n` into the edges of a labelled tree.
pub fn prufer_tree(seq: &[usize], n: usize) -> Vec<(usize, usize)> {
    assert!(n >= 2 && seq.len() == n - 2 && seq.iter().all(|&s| s < n));
    let mut degree = vec![1usize; n];
    for &s in seq {
        degree[s] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &s in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf.min(s), leaf.max(s)));
        degree[leaf] -= 1;
        degree[s] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges.sort_unstable();
    edges
}

/// All `n^{n−2}` labelled spanning trees of the complete graph on `n`
/// vertices.
pub fn spanning_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    assert!(n >= 2);
    let len = n - 2;
    let count = n.pow(len as u32);
    (0..count)
        .map(|mut c| {
            let mut seq = vec![0; len];
            for s in seq.iter_mut() {
                *s = c % n;
                c /= n;
            }
            prufer_tree(&seq, n)
        })
        .collect()
}

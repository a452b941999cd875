//! Independent oracles shared by the integration suites.
#![allow(dead_code)]

use markovrec::tensor::SubsystemLayout;
use markovrec::DensityOperator;

pub fn letters(n: usize) -> Vec<String> {
    (0..n)
        .map(|i| ((b'A' + i as u8) as char).to_string())
        .collect()
}

/// Every spanning tree of `K_n` found by testing all `(n−1)`-edge subsets
/// for acyclicity with a plain reachability sweep.
pub fn brute_force_trees(n: usize) -> Vec<Vec<(usize, usize)>> {
    let all: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let m = all.len();
    let mut out = Vec::new();
    for mask in 0u32..(1 << m) {
        if mask.count_ones() as usize != n - 1 {
            continue;
        }
        let edges: Vec<(usize, usize)> = (0..m)
            .filter(|k| mask >> k & 1 == 1)
            .map(|k| all[k])
            .collect();
        let mut reached = vec![false; n];
        reached[0] = true;
        let mut changed = true;
        while changed {
            changed = false;
            for &(i, j) in &edges {
                if reached[i] != reached[j] {
                    reached[i] = true;
                    reached[j] = true;
                    changed = true;
                }
            }
        }
        if reached.iter().all(|r| *r) {
            out.push(edges);
        }
    }
    out
}

/// Big-endian bit `v` of basis index `x` over `n` binary variables.
pub fn bit(x: usize, v: usize, n: usize) -> usize {
    (x >> (n - 1 - v)) & 1
}

/// `Π_edges p(x_i, x_j) / Π_v p(x_v)^{deg v − 1}` for a distribution `p`
/// over `n` bits, evaluated point by point.
pub fn classical_tree_factorization(p: &[f64], n: usize, edges: &[(usize, usize)]) -> Vec<f64> {
    let marginal = |vars: &[usize], vals: &[usize]| -> f64 {
        p.iter()
            .enumerate()
            .filter(|(x, _)| vars.iter().zip(vals).all(|(&v, &b)| bit(*x, v, n) == b))
            .map(|(_, q)| q)
            .sum()
    };
    (0..p.len())
        .map(|x| {
            let mut w = 1.0;
            for &(i, j) in edges {
                w *= marginal(&[i, j], &[bit(x, i, n), bit(x, j, n)]);
            }
            for v in 0..n {
                let deg = edges.iter().filter(|(i, j)| *i == v || *j == v).count();
                if deg > 1 {
                    let pv = marginal(&[v], &[bit(x, v, n)]);
                    w /= pv.powi(deg as i32 - 1);
                }
            }
            w
        })
        .collect()
}

/// Diagonal tree distribution on `n` bits: root 0, every other vertex
/// drawn from its parent through a binary channel with the given flips.
pub fn classical_tree_state(
    n: usize,
    edges: &[(usize, usize)],
    root_p: f64,
    flips: &[[f64; 2]],
) -> DensityOperator {
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut stack = vec![0];
    while let Some(u) = stack.pop() {
        for &(i, j) in edges {
            for (a, b) in [(i, j), (j, i)] {
                if a == u && !seen[b] {
                    seen[b] = true;
                    parent[b] = u;
                    stack.push(b);
                }
            }
        }
    }
    let p: Vec<f64> = (0..1usize << n)
        .map(|x| {
            let mut w = if bit(x, 0, n) == 0 {
                root_p
            } else {
                1.0 - root_p
            };
            for v in 1..n {
                let flip = flips[v][bit(x, parent[v], n)];
                w *= if bit(x, v, n) == bit(x, parent[v], n) {
                    1.0 - flip
                } else {
                    flip
                };
            }
            w
        })
        .collect();
    DensityOperator::from_diagonal(SubsystemLayout::qubits(letters(n)).unwrap(), &p).unwrap()
}

/// Spearman rank correlation (average ranks for ties).
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    fn ranks(v: &[f64]) -> Vec<f64> {
        let mut idx: Vec<usize> = (0..v.len()).collect();
        idx.sort_by(|&a, &b| v[a].total_cmp(&v[b]));
        let mut r = vec![0.0; v.len()];
        let mut i = 0;
        while i < idx.len() {
            let mut j = i;
            while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
                j += 1;
            }
            for k in i..=j {
                r[idx[k]] = (i + j) as f64 / 2.0;
            }
            i = j + 1;
        }
        r
    }
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let mx = rx.iter().sum::<f64>() / n;
    let my = ry.iter().sum::<f64>() / n;
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// `Σ_edges log ρ_e − Σ_v (deg v − 1) log ρ_v`, each term embedded in the
/// layout of `rho`.
pub fn tree_log_combination(
    rho: &DensityOperator,
    edges: &[(usize, usize)],
) -> markovrec::ComplexMatrix {
    use markovrec::tensor::{embed, matrix_function, MatrixFunction};
    let layout = rho.layout();
    let labels = layout.labels();
    let log_on = |keep: &[&String]| {
        let m = rho.reduce(keep).unwrap();
        embed(
            &matrix_function(m.matrix(), MatrixFunction::Log).unwrap(),
            m.layout(),
            layout,
        )
        .unwrap()
    };
    let mut total = markovrec::ComplexMatrix::zeros(rho.dim(), rho.dim());
    for &(i, j) in edges {
        total += log_on(&[&labels[i], &labels[j]]);
    }
    for v in 0..layout.len() {
        let deg = edges.iter().filter(|(i, j)| *i == v || *j == v).count();
        if deg > 1 {
            total -= log_on(&[&labels[v]]) * markovrec::C64::new((deg - 1) as f64, 0.0);
        }
    }
    total
}

pub fn label_edges(edges: &[(usize, usize)]) -> Vec<(String, String)> {
    let l = letters(edges.len() + 1);
    edges
        .iter()
        .map(|&(i, j)| (l[i].clone(), l[j].clone()))
        .collect()
}

//! Independent reference implementations for cross-checking the library.
//! Nothing here calls into the modularity, spectral or oracle modules.
#![allow(dead_code)]

use modspec::generators::{random_connected, random_connected_with, RandomOptions};
use modspec::graph::parse_graph;
use modspec::Graph;
use nalgebra::DMatrix;

/// Cyclic Jacobi eigensolver. Returns eigenvalues in descending order with
/// matching eigenvector columns.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> (Vec<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut a = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        let scale: f64 = a.iter().map(|x| x * x).sum::<f64>().max(f64::MIN_POSITIVE);
        if off <= 1e-30 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    (values, vectors)
}

pub fn jacobi_values(a: &DMatrix<f64>) -> Vec<f64> {
    jacobi_eigen(a).0
}

/// `A - ddᵀ / vol`, built directly from the adjacency matrix.
pub fn reference_modularity_matrix(g: &Graph) -> DMatrix<f64> {
    let a = g.adjacency();
    let n = a.nrows();
    let d: Vec<f64> = (0..n).map(|i| a.row(i).sum()).collect();
    let vol: f64 = d.iter().sum();
    DMatrix::from_fn(n, n, |i, j| a[(i, j)] - d[i] * d[j] / vol)
}

/// Largest eigenvalue of `X` on `𝟙⊥`, by shifting the `𝟙` direction far down.
pub fn extreme_on_complement(x: &DMatrix<f64>, largest: bool) -> f64 {
    let n = x.nrows();
    let nf = n as f64;
    let p = DMatrix::<f64>::identity(n, n) - DMatrix::from_element(n, n, 1.0 / nf);
    let shift = 1e3 * (1.0 + x.abs().max());
    let sign = if largest { -1.0 } else { 1.0 };
    let y = &p * x * &p + DMatrix::from_element(n, n, sign * shift / nf);
    let vals = jacobi_values(&y);
    if largest {
        vals[0]
    } else {
        vals[n - 1]
    }
}

pub fn reference_m(g: &Graph) -> f64 {
    extreme_on_complement(&reference_modularity_matrix(g), true)
}

/// `Σ_{i,j∈S} a_ij − (vol S)² / vol G` straight from the adjacency matrix.
pub fn reference_q(g: &Graph, members: &[usize]) -> f64 {
    let a = g.adjacency();
    let n = a.nrows();
    let vol: f64 = a.iter().sum();
    if vol == 0.0 {
        return 0.0;
    }
    let mut internal = 0.0;
    let mut vol_s = 0.0;
    for &i in members {
        for j in 0..n {
            vol_s += a[(i, j)];
        }
        for &j in members {
            internal += a[(i, j)];
        }
    }
    internal - vol_s * vol_s / vol
}

fn mask_members(n: usize, mask: u64) -> Vec<usize> {
    (0..n).filter(|&i| mask >> i & 1 == 1).collect()
}

/// Best `Q(S)` over every nonempty proper subset, no symmetry reduction.
pub fn reference_best_cut(g: &Graph) -> f64 {
    let n = g.n();
    (1u64..(1u64 << n) - 1)
        .map(|m| reference_q(g, &mask_members(n, m)))
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Best `q(𝒫)` over all labelings `V → {0, …, n−1}`, which covers every set
/// partition (many times over). Only sensible for `n ≤ 7`.
pub fn reference_best_partition(g: &Graph) -> f64 {
    let n = g.n();
    assert!(n <= 7);
    let vol: f64 = g.adjacency().iter().sum();
    let total = (n as u64).pow(n as u32);
    let mut best = f64::NEG_INFINITY;
    for code in 0..total {
        let mut c = code;
        let mut blocks = vec![Vec::new(); n];
        for i in 0..n {
            blocks[(c % n as u64) as usize].push(i);
            c /= n as u64;
        }
        let q: f64 = blocks
            .iter()
            .filter(|b| !b.is_empty())
            .map(|b| reference_q(g, b))
            .sum();
        best = best.max(q / vol);
    }
    best
}

pub fn triangle_bridge() -> Graph {
    parse_graph("1 2\n2 3\n3 1\n3 4\n4 5\n5 6\n6 4").unwrap()
}

pub fn clique(n: usize) -> Graph {
    let mut e = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            e.push((i, j));
        }
    }
    Graph::from_edges(n, &e).unwrap()
}

pub fn star(leaves: usize) -> Graph {
    let e: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    Graph::from_edges(leaves + 1, &e).unwrap()
}

/// Seeded connected graphs of varied size, density, weights and loops.
pub fn random_corpus(count: usize, n_min: usize, n_max: usize, base_seed: u64) -> Vec<Graph> {
    (0..count as u64)
        .map(|k| {
            let seed = base_seed + k;
            let n = n_min + (seed as usize * 7 + 3) % (n_max - n_min + 1);
            let p = [0.25, 0.4, 0.6, 0.85][(seed % 4) as usize];
            match seed % 3 {
                0 => random_connected(n, p, seed).unwrap(),
                1 => random_connected_with(
                    n,
                    p,
                    seed,
                    RandomOptions {
                        weighted: true,
                        loop_probability: 0.0,
                    },
                )
                .unwrap(),
                _ => random_connected_with(
                    n,
                    p,
                    seed,
                    RandomOptions {
                        weighted: true,
                        loop_probability: 0.3,
                    },
                )
                .unwrap(),
            }
        })
        .collect()
}

/// Small named graphs used throughout the suites.
pub fn named_corpus() -> Vec<(&'static str, Graph)> {
    let mut out = vec![
        ("triangle-bridge", triangle_bridge()),
        ("p3", parse_graph("1 2\n2 3").unwrap()),
        ("c4", parse_graph("1 2\n2 3\n3 4\n4 1").unwrap()),
        ("c6", parse_graph("1 2\n2 3\n3 4\n4 5\n5 6\n6 1").unwrap()),
        ("k2", clique(2)),
        ("two-triangles-weighted", parse_graph("a b 2\nb c 2\nc a 2\nc d 0.5\nd e 2\ne f 2\nf d 2").unwrap()),
        ("looped-path", parse_graph("1 1 3\n1 2\n2 3\n3 3 3").unwrap()),
    ];
    for n in 3..=8 {
        out.push(("clique", clique(n)));
    }
    for m in 2..=7 {
        out.push(("star", star(m)));
    }
    out
}

//! Graph families with known answers, and seeded random graphs.
//!
//! Every generator labels vertices `1..=n` in index order. Random generators
//! use ChaCha8 seeded from a `u64`, so a seed reproduces the same graph on
//! every platform.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

const MAX_REJECTIONS: usize = 100_000;

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}

/// Closed-form spectrum of the modularity matrix of a loop-weighted star.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarLoopsClosedForm {
    pub alpha: f64,
    pub beta: f64,
    pub m: usize,
    pub volume: f64,
    /// `λ̄ = (αβ − m)(m + 1) / vol G`.
    pub lambda_bar: f64,
    /// `(−1, …, −1, m)`: leaves first, root last.
    pub v_bar: Vec<f64>,
    /// Eigenvalue `α` has multiplicity `m − 1`.
    pub alpha_multiplicity: usize,
    /// All eigenvalues of `M`, descending.
    pub spectrum: Vec<f64>,
    /// `αβ − m > (α + 1)²`: `λ̄` is positive and the largest eigenvalue.
    pub dominant: bool,
    /// `α + 1 ≤ β + m`: `dᵀv̄ ≥ 0`, so `v̄` is already oriented.
    pub oriented: bool,
}

/// Star with `m` leaves carrying loops of weight `alpha` and a root (the last
/// vertex, index `m`) carrying a loop of weight `beta`; spokes have weight 1.
pub fn star_with_loops(alpha: f64, beta: f64, m: usize) -> Result<(Graph, StarLoopsClosedForm)> {
    if !(alpha.is_finite() && alpha >= 0.0 && beta.is_finite() && beta >= 0.0) {
        return Err(invalid("loop weights must be finite and nonnegative"));
    }
    if m < 2 {
        return Err(invalid("star_with_loops needs m >= 2 leaves"));
    }
    let mut edges = Vec::with_capacity(2 * m + 1);
    for leaf in 0..m {
        edges.push((leaf, leaf, alpha));
        edges.push((leaf, m, 1.0));
    }
    edges.push((m, m, beta));
    let g = Graph::from_weighted_edges(m + 1, &edges)?;

    let mf = m as f64;
    let volume = mf * (2.0 + alpha) + beta;
    let lambda_bar = (alpha * beta - mf) * (mf + 1.0) / volume;
    let mut v_bar = vec![-1.0; m];
    v_bar.push(mf);
    let mut spectrum = vec![0.0, lambda_bar];
    spectrum.extend(std::iter::repeat_n(alpha, m - 1));
    spectrum.sort_by(|a, b| b.total_cmp(a));
    let closed = StarLoopsClosedForm {
        alpha,
        beta,
        m,
        volume,
        lambda_bar,
        v_bar,
        alpha_multiplicity: m - 1,
        spectrum,
        dominant: alpha * beta - mf > (alpha + 1.0) * (alpha + 1.0),
        oriented: alpha + 1.0 <= beta + mf,
    };
    Ok((g, closed))
}

fn clique_edges(offset: usize, k: usize, edges: &mut Vec<(usize, usize)>) {
    for i in 0..k {
        for j in i + 1..k {
            edges.push((offset + i, offset + j));
        }
    }
}

/// A `p`-clique on vertices `0..p` and `m` copies of a `q`-clique; vertex 0
/// is joined to the first vertex of each `q`-clique.
pub fn clique_of_cliques(p: usize, q: usize, m: usize) -> Result<Graph> {
    if p < 2 || q < 2 || m < 1 {
        return Err(invalid("clique_of_cliques needs p >= 2, q >= 2, m >= 1"));
    }
    let mut edges = Vec::new();
    clique_edges(0, p, &mut edges);
    for c in 0..m {
        let first = p + c * q;
        clique_edges(first, q, &mut edges);
        edges.push((0, first));
    }
    Graph::from_edges(p + m * q, &edges)
}

/// Vertex index ranges `(start, len)` of the cliques in
/// [`clique_of_cliques`], the `p`-clique first.
pub fn clique_of_cliques_blocks(p: usize, q: usize, m: usize) -> Vec<Vec<usize>> {
    let mut blocks = vec![(0..p).collect::<Vec<_>>()];
    for c in 0..m {
        blocks.push((p + c * q..p + (c + 1) * q).collect());
    }
    blocks
}

/// One draw of the Chung–Lu model: each pair `i < j` is an edge with
/// probability `d_i d_j / Σd`, independently.
pub fn chung_lu_sample(degrees: &[f64], seed: u64) -> Result<Graph> {
    if degrees.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if degrees.iter().any(|d| !d.is_finite() || *d < 0.0) {
        return Err(invalid("expected degrees must be finite and nonnegative"));
    }
    let total: f64 = degrees.iter().sum();
    let max = degrees.iter().copied().fold(0.0, f64::max);
    if total <= 0.0 || max * max >= total {
        return Err(invalid(format!(
            "Chung-Lu needs max d_i^2 < sum d_i (got {} >= {})",
            max * max,
            total
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = degrees.len();
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random_bool(degrees[i] * degrees[j] / total) {
                edges.push((i, j));
            }
        }
    }
    Graph::from_edges(n, &edges)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Standard {
    /// `K_n`.
    Clique,
    /// `K_{1,n−1}` centred at vertex 0.
    Star,
    /// `C_n`.
    Cycle,
    /// `P_n`.
    Path,
    /// Petersen graph; `n` must be 10.
    Petersen,
}

pub fn standard(family: Standard, n: usize) -> Result<Graph> {
    let minimum = match family {
        Standard::Clique | Standard::Path => 1,
        Standard::Star => 2,
        Standard::Cycle => 3,
        Standard::Petersen => 10,
    };
    if n < minimum || (family == Standard::Petersen && n != 10) {
        return Err(invalid(format!("{family:?} is not defined for n = {n}")));
    }
    let mut edges = Vec::new();
    match family {
        Standard::Clique => clique_edges(0, n, &mut edges),
        Standard::Star => edges.extend((1..n).map(|i| (0, i))),
        Standard::Cycle => edges.extend((0..n).map(|i| (i, (i + 1) % n))),
        Standard::Path => edges.extend((1..n).map(|i| (i - 1, i))),
        Standard::Petersen => return petersen(),
    }
    Graph::from_edges(n, &edges)
}

/// Outer 5-cycle `0..5`, inner pentagram `5..10`, spokes `i — i+5`.
pub fn petersen() -> Result<Graph> {
    let mut edges = Vec::with_capacity(15);
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, i + 5));
    }
    Graph::from_edges(10, &edges)
}

/// Optional weights and loops for [`random_connected_with`].
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct RandomOptions {
    /// Edge weights uniform in `[0.5, 2)` instead of 1.
    pub weighted: bool,
    /// Probability of a loop on each vertex, weight uniform in `(0, 1.5)`.
    pub loop_probability: f64,
}

/// Connected `G(n, p)` sample, by rejection.
pub fn random_connected(n: usize, p: f64, seed: u64) -> Result<Graph> {
    random_connected_with(n, p, seed, RandomOptions::default())
}

pub fn random_connected_with(n: usize, p: f64, seed: u64, options: RandomOptions) -> Result<Graph> {
    if n == 0 {
        return Err(Error::EmptyGraph);
    }
    if !(p > 0.0 && p <= 1.0) || !(0.0..=1.0).contains(&options.loop_probability) {
        return Err(invalid("probabilities must lie in (0, 1]"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let mut edges = Vec::new();
        for i in 0..n {
            if options.loop_probability > 0.0 && rng.random_bool(options.loop_probability) {
                edges.push((i, i, rng.random_range(0.0..1.5) + f64::EPSILON));
            }
            for j in i + 1..n {
                if rng.random_bool(p) {
                    let w = if options.weighted {
                        rng.random_range(0.5..2.0)
                    } else {
                        1.0
                    };
                    edges.push((i, j, w));
                }
            }
        }
        let g = Graph::from_weighted_edges(n, &edges)?;
        if g.is_connected() && (n == 1 || g.volume() > 0.0) {
            return Ok(g);
        }
    }
    Err(invalid(format!(
        "no connected G({n}, {p}) sample after {MAX_REJECTIONS} draws"
    )))
}

/// Connected simple `k`-regular graph from the pairing model, by rejection.
pub fn random_regular(n: usize, k: usize, seed: u64) -> Result<Graph> {
    if k == 0 || k >= n || (n * k) % 2 == 1 {
        return Err(invalid(format!("no simple {k}-regular graph on {n} vertices")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
    'draw: for _ in 0..MAX_REJECTIONS {
        points.shuffle(&mut rng);
        let mut seen = vec![false; n * n];
        let mut edges = Vec::with_capacity(n * k / 2);
        for pair in points.chunks(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || seen[u * n + v] {
                continue 'draw;
            }
            seen[u * n + v] = true;
            edges.push((u, v));
        }
        let g = Graph::from_edges(n, &edges)?;
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(invalid(format!(
        "no connected {k}-regular sample on {n} vertices after {MAX_REJECTIONS} draws"
    )))
}

/// A family with its parameters, as recorded in generated artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum FamilySpec {
    StarLoops { alpha: f64, beta: f64, m: usize },
    CliqueOfCliques { p: usize, q: usize, m: usize },
    Clique { n: usize },
    Star { n: usize },
    Cycle { n: usize },
    Path { n: usize },
    Petersen,
    ChungLu { degrees: Vec<f64>, seed: u64 },
    RandomRegular { n: usize, k: usize, seed: u64 },
    RandomConnected { n: usize, p: f64, seed: u64 },
}

impl FamilySpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            FamilySpec::StarLoops { alpha, beta, m } => Ok(star_with_loops(*alpha, *beta, *m)?.0),
            FamilySpec::CliqueOfCliques { p, q, m } => clique_of_cliques(*p, *q, *m),
            FamilySpec::Clique { n } => standard(Standard::Clique, *n),
            FamilySpec::Star { n } => standard(Standard::Star, *n),
            FamilySpec::Cycle { n } => standard(Standard::Cycle, *n),
            FamilySpec::Path { n } => standard(Standard::Path, *n),
            FamilySpec::Petersen => petersen(),
            FamilySpec::ChungLu { degrees, seed } => chung_lu_sample(degrees, *seed),
            FamilySpec::RandomRegular { n, k, seed } => random_regular(*n, *k, *seed),
            FamilySpec::RandomConnected { n, p, seed } => random_connected(*n, *p, *seed),
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match self {
            FamilySpec::ChungLu { seed, .. }
            | FamilySpec::RandomRegular { seed, .. }
            | FamilySpec::RandomConnected { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

//! Checkable inequalities relating modularity to the spectrum of `M`, with
//! exact left-hand sides from [`crate::oracle`] when the graph is small.
//!
//! Every check yields a [`BoundRecord`] stating `lhs ≤ rhs`. Lower bounds are
//! written the same way with the bound on the left.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition, VertexSet};
use crate::modularity::{joint_modularity, modularity_q, ModularityMatrix};
use crate::oracle::{self, BestCut, BestPartition, OracleCaps};
use crate::spectral::{
    algebraic_connectivity, algebraic_modularity, eig_sym, interlacing_from, spectral_summary,
    LaplacianKind, MatrixKind, Spectrum,
};
use crate::tol;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundRecord {
    pub name: String,
    /// Missing when the exact value was not computed.
    pub lhs: Option<f64>,
    pub rhs: f64,
    /// `rhs - lhs`.
    pub slack: Option<f64>,
    pub tolerance: f64,
    /// `slack ≥ -tolerance`; `None` when skipped.
    pub holds: Option<bool>,
    pub note: Option<String>,
}

impl BoundRecord {
    pub fn new(name: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        Self::with_tolerance(name, lhs, rhs, tol::bound_tolerance(rhs))
    }

    pub fn with_tolerance(name: impl Into<String>, lhs: f64, rhs: f64, tolerance: f64) -> Self {
        let slack = rhs - lhs;
        BoundRecord {
            name: name.into(),
            lhs: Some(lhs),
            rhs,
            slack: Some(slack),
            tolerance,
            holds: Some(slack >= -tolerance),
            note: None,
        }
    }

    pub fn skipped(name: impl Into<String>, rhs: f64, reason: impl Into<String>) -> Self {
        BoundRecord {
            name: name.into(),
            lhs: None,
            rhs,
            slack: None,
            tolerance: tol::bound_tolerance(rhs),
            holds: None,
            note: Some(reason.into()),
        }
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn violated(&self) -> bool {
        self.holds == Some(false)
    }
}

/// Spectral data shared by the graph-level checks.
#[derive(Debug, Clone)]
pub struct BoundsContext<'g> {
    g: &'g Graph,
    m_g: f64,
    spectrum: Spectrum,
    positive: usize,
}

impl<'g> BoundsContext<'g> {
    pub fn new(g: &'g Graph) -> Result<Self> {
        let m_g = algebraic_modularity(g)?.value;
        let m = ModularityMatrix::new(g)?;
        let spectrum = eig_sym(m.matrix(), MatrixKind::Modularity)?;
        let positive = spectrum.sign_counts(tol::sign_count_tolerance(m.matrix())).positive;
        Ok(Self {
            g,
            m_g,
            spectrum,
            positive,
        })
    }

    pub fn graph(&self) -> &'g Graph {
        self.g
    }

    pub fn m_g(&self) -> f64 {
        self.m_g
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    /// `#{λ_i(M) > 0}`.
    pub fn positive_eigenvalues(&self) -> usize {
        self.positive
    }

    pub fn average_degree(&self) -> f64 {
        self.g.volume() / self.g.n() as f64
    }

    /// `Q(S) ≤ m(G)|S||S̄|/n`.
    pub fn check_subset_bound(&self, s: &VertexSet) -> BoundRecord {
        let n = self.g.n() as f64;
        let size = s.len() as f64;
        let rhs = self.m_g * size * (n - size) / n;
        BoundRecord::new("Q(S) <= m(G)|S||S'|/n", modularity_q(self.g, s), rhs)
    }

    /// The subset bound over every nonempty proper `S`, reporting the set
    /// with the smallest slack.
    pub fn check_subset_bound_exhaustive(&self, cap: usize) -> BoundRecord {
        let n = self.g.n();
        let name = "Q(S) <= m(G)|S||S'|/n, all S";
        if n > cap.min(24) {
            return BoundRecord::skipped(name, 0.0, format!("n = {n} exceeds cap {cap}"));
        }
        let mut worst: Option<(BoundRecord, Vec<usize>)> = None;
        for mask in 1u32..(1u32 << n) - 1 {
            let s = VertexSet::from_mask(self.g, (0..n).map(|i| mask >> i & 1 == 1).collect());
            let r = self.check_subset_bound(&s);
            let margin = r.slack.unwrap_or(0.0) + r.tolerance;
            if worst.as_ref().is_none_or(|(w, _)| margin < w.slack.unwrap_or(0.0) + w.tolerance) {
                worst = Some((r, s.members().to_vec()));
            }
        }
        match worst {
            Some((r, members)) => {
                let mut r = r.note(format!("tightest set {members:?}"));
                r.name = name.into();
                r
            }
            None => BoundRecord::skipped(name, 0.0, "no proper subsets"),
        }
    }

    /// `q′_G ≤ m(G) / (2⟨d⟩)`.
    pub fn check_qprime_bound(&self, cut: Option<&BestCut>) -> BoundRecord {
        let rhs = self.m_g / (2.0 * self.average_degree());
        let name = "q'_G <= m(G)/(2<d>)";
        match cut {
            Some(c) => BoundRecord::new(name, c.q_prime, rhs),
            None => BoundRecord::skipped(name, rhs, "exact q'_G not computed"),
        }
    }

    /// `q_G ≤ (n − 1) m(G) / vol G`.
    pub fn check_qg_upper(&self, best: Option<&BestPartition>) -> BoundRecord {
        let rhs = (self.g.n() as f64 - 1.0) * self.m_g / self.g.volume();
        let name = "q_G <= (n-1)m(G)/vol G";
        match best {
            Some(b) => BoundRecord::new(name, b.q_star, rhs),
            None => BoundRecord::skipped(name, rhs, "exact q_G not computed"),
        }
    }

    /// `|𝒫⋆| ≤ #{λ_i(M) > 0} + 1`.
    pub fn check_partition_cardinality(&self, best: Option<&BestPartition>) -> BoundRecord {
        let rhs = self.positive as f64 + 1.0;
        let name = "|P*| <= #{lambda_i(M) > 0} + 1";
        match best {
            Some(b) => BoundRecord::with_tolerance(name, b.partition.len() as f64, rhs, 0.0),
            None => BoundRecord::skipped(name, rhs, "optimal partition not computed"),
        }
    }

    /// Disjoint sets with `vol S_i ≤ ½ vol G` and `2|E(S_i)| > |∂S_i|` are
    /// communities, and `M` has at least `k − 1` positive eigenvalues.
    pub fn check_communities1(&self, sets: &[VertexSet]) -> Result<BoundRecord> {
        let half = 0.5 * self.g.volume();
        for (i, s) in sets.iter().enumerate() {
            if s.is_empty() {
                return Err(Error::Precondition(format!("set {i} is empty")));
            }
            for (j, t) in sets.iter().enumerate().skip(i + 1) {
                if !s.is_disjoint(t) {
                    return Err(Error::Precondition(format!("sets {i} and {j} intersect")));
                }
            }
            if s.volume() > half + tol::bound_tolerance(half) {
                return Err(Error::Precondition(format!(
                    "set {i}: vol S = {} exceeds vol G / 2 = {half}",
                    s.volume()
                )));
            }
            if s.internal_weight() <= s.boundary_weight() {
                return Err(Error::Precondition(format!(
                    "set {i}: 2|E(S)| = {} is not above |dS| = {}",
                    s.internal_weight(),
                    s.boundary_weight()
                )));
            }
        }
        let all_positive = sets.iter().all(|s| modularity_q(self.g, s) > 0.0);
        let k = sets.len() as f64;
        let mut r = BoundRecord::with_tolerance(
            "k - 1 <= #{lambda_i(M) > 0} (disjoint communities)",
            k - 1.0,
            self.positive as f64,
            0.0,
        );
        if !all_positive {
            r.holds = Some(false);
            r.note = Some("some set has Q(S) <= 0".into());
        }
        Ok(r)
    }

    /// A partition into `k ≥ 2` sets with `Q(S_i) ≥ 0` and pairwise
    /// `Q(S_i, S_j) ≤ 0` forces at least `k − 1` positive eigenvalues.
    pub fn check_communities2(&self, p: &Partition) -> Result<BoundRecord> {
        self.g.require_connected()?;
        let k = p.len();
        if k < 2 {
            return Err(Error::Precondition("partition has fewer than two sets".into()));
        }
        let band = 1e-10 * self.g.volume().max(1.0);
        for (i, s) in p.blocks().iter().enumerate() {
            let q = modularity_q(self.g, s);
            if q < -band {
                return Err(Error::Precondition(format!("set {i}: Q(S) = {q} < 0")));
            }
            for (j, t) in p.blocks().iter().enumerate().skip(i + 1) {
                let joint = joint_modularity(self.g, s, t)?;
                if joint > band {
                    return Err(Error::Precondition(format!(
                        "sets {i}, {j}: Q(S_i, S_j) = {joint} > 0"
                    )));
                }
            }
        }
        Ok(BoundRecord::with_tolerance(
            "k - 1 <= #{lambda_i(M) > 0} (mergeless partition)",
            k as f64 - 1.0,
            self.positive as f64,
            0.0,
        ))
    }
}

/// `q_G ≥ trace(M) / vol G`: the all-singletons partition attains the bound.
pub fn check_qg_lower(g: &Graph, best: Option<&BestPartition>) -> Result<BoundRecord> {
    let m = ModularityMatrix::new(g)?;
    let bound = m.trace() / g.volume();
    let name = "trace(M)/vol G <= q_G";
    Ok(match best {
        Some(b) => BoundRecord::new(name, bound, b.q_star),
        None => BoundRecord::skipped(name, bound, "exact q_G not computed; rhs holds the bound"),
    })
}

/// `trace(AB) ≤ Σ λ_i(A) λ_i(B)` with both spectra in descending order.
pub fn check_trace_product(a: &DMatrix<f64>, b: &DMatrix<f64>) -> Result<BoundRecord> {
    if a.shape() != b.shape() {
        return Err(Error::DimensionMismatch {
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    let sa = eig_sym(a, MatrixKind::General)?;
    let sb = eig_sym(b, MatrixKind::General)?;
    let rhs: f64 = sa.values().iter().zip(sb.values()).map(|(x, y)| x * y).sum();
    let lhs = (a * b).trace();
    Ok(BoundRecord::new("trace(AB) <= sum lambda_i(A) lambda_i(B)", lhs, rhs))
}

/// Outcome of the eigenvector sweep on a regular graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepCut {
    pub degree: f64,
    pub m_g: f64,
    pub a_g: f64,
    /// `Q⋆ = max_i Q(S_i)` over the threshold sets of `f` and `−f`.
    pub q_star: f64,
    pub best_set: VertexSet,
    /// `(k/2 ‖f‖₁ − ‖f‖₂ √((k − m(G)) k n / 2)) / (w₁ − w_n)`.
    pub lower_bound: f64,
    pub vector: Vec<f64>,
    pub sets_evaluated: usize,
}

impl SweepCut {
    pub fn record(&self) -> BoundRecord {
        BoundRecord::new("sweep lower bound <= Q*", self.lower_bound, self.q_star)
    }

    /// `1/(2n) − √((k − m)/(2k)) ≤ q′_G ≤ m/(2k)`, given the exact `q′_G`.
    pub fn corollary(&self, n: usize, q_prime: f64) -> [BoundRecord; 2] {
        let k = self.degree;
        let lower = 1.0 / (2.0 * n as f64) - ((k - self.m_g) / (2.0 * k)).max(0.0).sqrt();
        let upper = self.m_g / (2.0 * k);
        [
            BoundRecord::new("1/(2n) - sqrt((k-m)/(2k)) <= q'_G", lower, q_prime),
            BoundRecord::new("q'_G <= m(G)/(2k)", q_prime, upper),
        ]
    }
}

/// Sweeps the threshold sets of the `m(G)` eigenvector of a connected,
/// simple `k`-regular graph.
pub fn sweep_cut(g: &Graph) -> Result<SweepCut> {
    g.require_connected()?;
    if !g.is_simple_unweighted() {
        return Err(Error::NotRegular(
            "sweep cut needs a simple unweighted graph without loops".into(),
        ));
    }
    let k = g
        .regular_degree()
        .ok_or_else(|| Error::NotRegular("sweep cut needs a k-regular graph".into()))?;
    let n = g.n();
    let pair = algebraic_modularity(g)?;
    let a_g = algebraic_connectivity(g, LaplacianKind::Classic)?.value;
    debug_assert!(
        (pair.value - (k - a_g)).abs() <= 1e-8 * (1.0 + k),
        "m(G) = k - a(G) fails on a regular graph"
    );
    let f: Vec<f64> = pair.vector.iter().copied().collect();
    let w_max = f.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w_min = f.iter().copied().fold(f64::INFINITY, f64::min);
    if w_max - w_min <= 0.0 {
        return Err(Error::Precondition("eigenvector is constant".into()));
    }

    let mut best: Option<(f64, VertexSet)> = None;
    let mut evaluated = 0;
    for sign in [1.0, -1.0] {
        let g_vals: Vec<f64> = f.iter().map(|x| sign * x).collect();
        let mut thresholds = g_vals.clone();
        thresholds.sort_by(|a, b| b.total_cmp(a));
        thresholds.dedup();
        for &w in &thresholds {
            let mask: Vec<bool> = g_vals.iter().map(|&x| x <= w).collect();
            let size = mask.iter().filter(|&&b| b).count();
            if size == 0 || size == n {
                continue;
            }
            let s = VertexSet::from_mask(g, mask);
            let q = modularity_q(g, &s);
            evaluated += 1;
            if best.as_ref().is_none_or(|(bq, _)| q > *bq) {
                best = Some((q, s));
            }
        }
    }
    let (q_star, best_set) = best.ok_or(Error::NoCut)?;

    let l1: f64 = f.iter().map(|x| x.abs()).sum();
    let l2: f64 = f.iter().map(|x| x * x).sum::<f64>().sqrt();
    let n_f = n as f64;
    let root = ((k - pair.value) * k * n_f / 2.0).max(0.0).sqrt();
    let lower_bound = (k / 2.0 * l1 - l2 * root) / (w_max - w_min);
    Ok(SweepCut {
        degree: k,
        m_g: pair.value,
        a_g,
        q_star,
        best_set,
        lower_bound,
        vector: f,
        sets_evaluated: evaluated,
    })
}

/// Outcome of [`verify_all`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsReport {
    pub records: Vec<BoundRecord>,
    pub q_g: Option<f64>,
    pub q_prime: Option<f64>,
    pub m_g: Option<f64>,
    pub average_degree: f64,
    pub positive_eigenvalues: Option<usize>,
    /// Why the spectral checks did not run, if they did not.
    pub skipped: Option<String>,
}

impl BoundsReport {
    pub fn violations(&self) -> Vec<&BoundRecord> {
        self.records.iter().filter(|r| r.violated()).collect()
    }

    pub fn all_hold(&self) -> bool {
        self.violations().is_empty()
    }
}

/// Largest `n` for the exhaustive subset-bound check.
pub const SUBSET_SWEEP_CAP: usize = 16;

/// Runs every applicable check. Exact values come from the oracle when `n`
/// is within `caps`; spectral checks need a connected graph with `n ≥ 2`.
pub fn verify_all(g: &Graph, caps: OracleCaps) -> Result<BoundsReport> {
    g.require_volume()?;
    let n = g.n();
    let cut = if (2..=caps.cut).contains(&n) {
        Some(oracle::best_cut_with(g, caps)?)
    } else {
        None
    };
    let best = if n <= caps.partition {
        Some(oracle::best_partition_with(g, caps)?)
    } else {
        None
    };
    let mut records = vec![check_qg_lower(g, best.as_ref())?];
    let mut report = BoundsReport {
        records: Vec::new(),
        q_g: best.as_ref().map(|b| b.q_star),
        q_prime: cut.as_ref().map(|c| c.q_prime),
        m_g: None,
        average_degree: g.volume() / n as f64,
        positive_eigenvalues: None,
        skipped: None,
    };
    if n < 2 || !g.is_connected() {
        report.skipped = Some(if n < 2 {
            "spectral bounds need at least two vertices".into()
        } else {
            "spectral bounds need a connected graph".into()
        });
        report.records = records;
        return Ok(report);
    }

    let ctx = BoundsContext::new(g)?;
    report.m_g = Some(ctx.m_g());
    report.positive_eigenvalues = Some(ctx.positive_eigenvalues());
    if let Some(c) = &cut {
        records.push(ctx.check_subset_bound(&c.set).note("best cut"));
    }
    records.push(ctx.check_subset_bound_exhaustive(SUBSET_SWEEP_CAP));
    records.push(ctx.check_qprime_bound(cut.as_ref()));
    records.push(ctx.check_qg_upper(best.as_ref()));
    records.push(ctx.check_partition_cardinality(best.as_ref()));
    if let Some(b) = &best {
        if b.partition.len() >= 2 {
            match ctx.check_communities2(&b.partition) {
                Ok(r) => records.push(r.note("optimal partition")),
                Err(e) => records.push(BoundRecord::skipped(
                    "k - 1 <= #{lambda_i(M) > 0} (mergeless partition)",
                    ctx.positive_eigenvalues() as f64,
                    e.to_string(),
                )),
            }
        }
    }

    let summary = spectral_summary(g)?;
    let chain = summary.chain;
    records.push(BoundRecord::new("d_min - a(G) <= a(G0) - a(G)", chain.d_min - chain.a_g, chain.a_g0 - chain.a_g));
    records.push(BoundRecord::new("a(G0) - a(G) <= m(G)", chain.a_g0 - chain.a_g, chain.m_g));
    records.push(BoundRecord::new("m(G) <= d_max - a(G)", chain.m_g, chain.d_max - chain.a_g));
    records.push(BoundRecord::new("-d_min/(n-1) <= m(G)", chain.clique_floor, chain.m_g));
    let a_spec = eig_sym(g.adjacency(), MatrixKind::Adjacency)?;
    let inter = interlacing_from(&a_spec, ctx.spectrum(), tol::inf_norm(g.adjacency()));
    records.push(BoundRecord::with_tolerance(
        "lambda_i(A) >= lambda_i(M) >= lambda_{i+1}(A)",
        -inter.min_margin,
        0.0,
        inter.tolerance,
    ));

    if g.is_simple_unweighted() && g.regular_degree().is_some() {
        let sweep = sweep_cut(g)?;
        records.push(sweep.record());
        if let Some(c) = &cut {
            records.extend(sweep.corollary(n, c.q_prime));
        }
    }
    report.records = records;
    Ok(report)
}

//! Symmetric eigendecompositions and the spectral invariants built on them:
//! algebraic modularity `m(G)`, algebraic connectivity `a(G)`, interlacing
//! between `A` and `M`, and modularity bisection by sign rounding.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};
use crate::modularity::{build_laplacians, modularity_q, ModularityMatrix};
use crate::nodal::{orient, zero_threshold};
use crate::tol;

/// Which matrix a [`Spectrum`] belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixKind {
    Adjacency,
    Modularity,
    Laplacian,
    AverageLaplacian,
    General,
}

/// Full eigendecomposition of a symmetric matrix.
///
/// Eigenvalues are stored in descending order for every matrix kind; use
/// [`Spectrum::ascending_value`] for the Laplacian convention.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    kind: MatrixKind,
    values: Vec<f64>,
    vectors: DMatrix<f64>,
    residuals: Vec<f64>,
    norm: f64,
    orthogonality_defect: f64,
}

impl Spectrum {
    pub fn kind(&self) -> MatrixKind {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Eigenvalues `λ₁ ≥ … ≥ λ_n`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Orthonormal eigenvectors as columns, matching [`Spectrum::values`].
    pub fn vectors(&self) -> &DMatrix<f64> {
        &self.vectors
    }

    /// Eigenvector for the 0-based descending index `i`.
    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.vectors.column(i).iter().copied().collect()
    }

    /// `k`-th smallest eigenvalue, 1-based.
    pub fn ascending_value(&self, k: usize) -> f64 {
        self.values[self.n() - k]
    }

    pub fn ascending_vector(&self, k: usize) -> Vec<f64> {
        self.vector(self.n() - k)
    }

    /// `‖Xv_i - λ_i v_i‖₂` for each pair.
    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().copied().fold(0.0, f64::max)
    }

    /// `‖X‖₂ = max |λ_i|`.
    pub fn norm(&self) -> f64 {
        self.norm
    }

    /// `max_{i≠j} |v_iᵀ v_j|` together with `max_i |v_iᵀ v_i - 1|`.
    pub fn orthogonality_defect(&self) -> f64 {
        self.orthogonality_defect
    }

    /// Band around zero used to classify eigenvalue signs.
    pub fn zero_band(&self) -> f64 {
        tol::SIGN_COUNT_REL * self.norm.max(1.0)
    }

    pub fn sign_counts(&self, band: f64) -> SignCounts {
        let positive = self.values.iter().filter(|&&v| v > band).count();
        let negative = self.values.iter().filter(|&&v| v < -band).count();
        SignCounts {
            positive,
            negative,
            zero: self.n() - positive - negative,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignCounts {
    pub positive: usize,
    pub negative: usize,
    pub zero: usize,
}

/// Eigendecomposition of a symmetric matrix by orthogonal similarity
/// reduction, with residual and orthogonality certificates.
pub fn eig_sym(x: &DMatrix<f64>, kind: MatrixKind) -> Result<Spectrum> {
    let (rows, cols) = x.shape();
    if rows != cols {
        return Err(Error::NotSquare { rows, cols });
    }
    let n = rows;
    if n == 0 {
        return Err(Error::InvalidParameter("empty matrix".into()));
    }
    let max_abs = x.amax();
    let asym = (x - x.transpose()).amax();
    if asym > tol::SYMMETRY_REL * max_abs.max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let sym = (x + x.transpose()) * 0.5;
    let max_iter = 1000 * n.max(10);
    let eig = SymmetricEigen::try_new(sym.clone(), f64::EPSILON, max_iter).ok_or(
        Error::NoConvergence {
            n,
            max_iter,
            max_abs,
        },
    )?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = DMatrix::zeros(n, n);
    for (c, &i) in order.iter().enumerate() {
        let mut v = eig.eigenvectors.column(i).clone_owned();
        normalize_sign(&mut v);
        vectors.set_column(c, &v);
    }

    let norm = values.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let residuals: Vec<f64> = (0..n)
        .map(|c| {
            let v = vectors.column(c);
            (&sym * v - v * values[c]).norm()
        })
        .collect();
    let gram = vectors.transpose() * &vectors;
    let orthogonality_defect = (gram - DMatrix::identity(n, n)).amax();

    let bound = tol::RESIDUAL_REL * norm;
    let worst = residuals.iter().copied().fold(0.0, f64::max);
    if worst > bound && worst > f64::EPSILON * 16.0 {
        return Err(Error::Certificate {
            residual: worst,
            bound,
        });
    }
    if orthogonality_defect > tol::ORTHOGONALITY {
        return Err(Error::Certificate {
            residual: orthogonality_defect,
            bound: tol::ORTHOGONALITY,
        });
    }

    Ok(Spectrum {
        kind,
        values,
        vectors,
        residuals,
        norm,
        orthogonality_defect,
    })
}

/// Flips `v` so that its first entry that is not negligibly small is positive.
fn normalize_sign(v: &mut DVector<f64>) {
    let threshold = tol::NODAL_ZERO_REL * v.amax();
    if let Some(first) = v.iter().copied().find(|x| x.abs() > threshold) {
        if first < 0.0 {
            v.neg_mut();
        }
    }
}

/// `(ℓ, ℓ′)`: eigenvalues `≥ λ` and `> λ`, counted with multiplicity, with
/// equality band `1e-8 (1 + |λ|)`.
pub fn eigen_counts(spec: &Spectrum, lambda: f64) -> (usize, usize) {
    let tau = tol::eigen_count_tolerance(lambda);
    let at_least = spec.values().iter().filter(|&&v| v >= lambda - tau).count();
    let above = spec.values().iter().filter(|&&v| v > lambda + tau).count();
    (at_least, above)
}

/// Laplacian-side counts: eigenvalues `≤ λ` and `< λ`.
pub fn eigen_counts_below(spec: &Spectrum, lambda: f64) -> (usize, usize) {
    let tau = tol::eigen_count_tolerance(lambda);
    let at_most = spec.values().iter().filter(|&&v| v <= lambda + tau).count();
    let below = spec.values().iter().filter(|&&v| v < lambda - tau).count();
    (at_most, below)
}

/// Orthonormal basis of `𝟙⊥` as the last `n - 1` columns of the Householder
/// reflector that maps `𝟙` to `-√n e₁`.
pub fn complement_basis(n: usize) -> DMatrix<f64> {
    assert!(n >= 2, "𝟙⊥ is trivial for n < 2");
    let root = (n as f64).sqrt();
    let mut v = DVector::from_element(n, 1.0);
    v[0] += root;
    let scale = 2.0 / v.norm_squared();
    let h = DMatrix::identity(n, n) - (&v * v.transpose()) * scale;
    h.columns(1, n - 1).clone_owned()
}

/// Extreme eigenpair of a matrix restricted to `𝟙⊥`.
#[derive(Debug, Clone, PartialEq)]
pub struct DeflatedEigenpair {
    pub value: f64,
    /// Unit vector in `ℝⁿ`, orthogonal to `𝟙`.
    pub vector: DVector<f64>,
    /// Multiplicity of `value` within the deflated spectrum.
    pub multiplicity: usize,
    /// Full deflated spectrum, descending.
    pub deflated_values: Vec<f64>,
}

fn deflated_extreme(x: &DMatrix<f64>, largest: bool) -> Result<DeflatedEigenpair> {
    let n = x.nrows();
    let basis = complement_basis(n);
    let reduced = basis.transpose() * x * &basis;
    let spec = eig_sym(&reduced, MatrixKind::General)?;
    let idx = if largest { 0 } else { spec.n() - 1 };
    let value = spec.values()[idx];
    let band = tol::SIGN_COUNT_REL * spec.norm().max(1.0);
    let multiplicity = spec
        .values()
        .iter()
        .filter(|&&v| (v - value).abs() <= band)
        .count();
    let y = spec.vectors().column(idx);
    let mut vector = &basis * y;
    normalize_sign(&mut vector);
    Ok(DeflatedEigenpair {
        value,
        vector,
        multiplicity,
        deflated_values: spec.values().to_vec(),
    })
}

fn require_spectral_graph(g: &Graph) -> Result<()> {
    if g.n() < 2 {
        return Err(Error::Precondition(
            "spectral analysis needs at least two vertices".into(),
        ));
    }
    g.require_volume()?;
    g.require_connected()
}

/// Algebraic modularity `m(G) = max_{xᵀ𝟙=0} xᵀMx / xᵀx` with a maximizer.
pub fn algebraic_modularity(g: &Graph) -> Result<DeflatedEigenpair> {
    require_spectral_graph(g)?;
    let m = ModularityMatrix::new(g)?;
    deflated_extreme(m.matrix(), true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LaplacianKind {
    /// `L = D - A`.
    Classic,
    /// `L₀ = D - d dᵀ / vol G`.
    Average,
}

/// Second-smallest eigenvalue of `L` (`a(G)`) or `L₀` (`a(G₀)`), with a
/// Fiedler vector.
pub fn algebraic_connectivity(g: &Graph, which: LaplacianKind) -> Result<DeflatedEigenpair> {
    require_spectral_graph(g)?;
    let l = build_laplacians(g)?;
    let x = match which {
        LaplacianKind::Classic => l.laplacian,
        LaplacianKind::Average => l.average,
    };
    deflated_extreme(&x, false)
}

/// Result of rounding the relaxed maximizer to a vertex set.
#[derive(Debug, Clone, PartialEq)]
pub struct Bisection {
    pub set: VertexSet,
    pub modularity: f64,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    /// Oriented relaxed maximizer (`dᵀx ≥ 0`).
    pub vector: Vec<f64>,
    pub warning: Option<String>,
}

/// Maximizes the relaxed problem on `𝟙⊥`, orients the maximizer so that
/// `dᵀx ≥ 0`, and keeps the positive entries. Zero entries go to whichever
/// side gives the larger `Q`.
pub fn spectral_bisect(g: &Graph) -> Result<Bisection> {
    let pair = algebraic_modularity(g)?;
    let x = orient(pair.vector.as_slice(), g.degree())?;
    let tau = zero_threshold(&x);
    let positive: Vec<bool> = x.iter().map(|&v| v > tau).collect();
    let with_zeros: Vec<bool> = x.iter().map(|&v| v >= -tau).collect();

    let a = VertexSet::from_mask(g, positive.clone());
    let mut best = (modularity_q(g, &a), a);
    if with_zeros != positive {
        let b = VertexSet::from_mask(g, with_zeros);
        let qb = modularity_q(g, &b);
        if qb > best.0 {
            best = (qb, b);
        }
    }
    let (modularity, set) = best;
    if set.is_empty() || set.len() == g.n() {
        return Err(Error::NoCut);
    }
    let mut warning = None;
    if pair.value <= 0.0 {
        warning = Some(format!(
            "m(G) = {:.6e} is not positive; the graph may be indivisible",
            pair.value
        ));
    }
    if pair.multiplicity > 1 {
        let note = format!(
            "m(G) has multiplicity {}; the maximizer is one choice from its eigenspace",
            pair.multiplicity
        );
        warning = Some(match warning {
            Some(w) => format!("{w}; {note}"),
            None => note,
        });
    }
    Ok(Bisection {
        set,
        modularity,
        eigenvalue: pair.value,
        multiplicity: pair.multiplicity,
        vector: x,
        warning,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InterlacingReport {
    pub adjacency: Vec<f64>,
    pub modularity: Vec<f64>,
    /// `λ₁(A)-λ₁(M), λ₁(M)-λ₂(A), λ₂(A)-λ₂(M), …`; all should be `≥ 0`.
    pub margins: Vec<f64>,
    pub min_margin: f64,
    pub tolerance: f64,
    pub holds: bool,
}

/// Checks `λ₁(A) ≥ λ₁(M) ≥ λ₂(A) ≥ … ≥ λ_n(M)`.
pub fn interlacing_check(g: &Graph) -> Result<InterlacingReport> {
    let a = eig_sym(g.adjacency(), MatrixKind::Adjacency)?;
    let m = eig_sym(ModularityMatrix::new(g)?.matrix(), MatrixKind::Modularity)?;
    Ok(interlacing_from(&a, &m, tol::inf_norm(g.adjacency())))
}

pub fn interlacing_from(a: &Spectrum, m: &Spectrum, a_norm: f64) -> InterlacingReport {
    let n = a.n();
    let mut margins = Vec::with_capacity(2 * n - 1);
    for i in 0..n {
        margins.push(a.values()[i] - m.values()[i]);
        if i + 1 < n {
            margins.push(m.values()[i] - a.values()[i + 1]);
        }
    }
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    let tolerance = tol::INTERLACING_REL * a_norm.max(1.0);
    InterlacingReport {
        adjacency: a.values().to_vec(),
        modularity: m.values().to_vec(),
        margins,
        min_margin,
        tolerance,
        holds: min_margin >= -tolerance,
    }
}

/// The chain `d_min - a(G) ≤ a(G₀) - a(G) ≤ m(G) ≤ d_max - a(G)` and the
/// floor `m(G) ≥ -d_min / (n - 1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FiedlerChain {
    pub d_min: f64,
    pub d_max: f64,
    pub a_g: f64,
    pub a_g0: f64,
    pub m_g: f64,
    pub clique_floor: f64,
    pub chain_holds: bool,
    pub floor_holds: bool,
}

impl FiedlerChain {
    pub fn new(g: &Graph, m_g: f64, a_g: f64, a_g0: f64) -> Self {
        let d_min = g.min_degree();
        let d_max = g.max_degree();
        let le = |lhs: f64, rhs: f64| lhs <= rhs + tol::bound_tolerance(rhs);
        let chain_holds = le(d_min - a_g, a_g0 - a_g) && le(a_g0 - a_g, m_g) && le(m_g, d_max - a_g);
        let clique_floor = -d_min / (g.n() as f64 - 1.0);
        FiedlerChain {
            d_min,
            d_max,
            a_g,
            a_g0,
            m_g,
            clique_floor,
            chain_holds,
            floor_holds: le(clique_floor, m_g),
        }
    }

    pub fn holds(&self) -> bool {
        self.chain_holds && self.floor_holds
    }
}

/// Headline spectral quantities of a connected graph.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub m_g: f64,
    pub m_multiplicity: usize,
    pub a_g: f64,
    pub a_g0: f64,
    pub counts: SignCounts,
    pub zero_band: f64,
    /// `λ₁(M)`; equals `max{m(G), 0}`.
    pub lambda1: f64,
    /// Oriented eigenvector for `m(G)`.
    pub leading_vector: Vec<f64>,
    pub fiedler_vector: Vec<f64>,
    pub chain: FiedlerChain,
    pub modularity_spectrum: Spectrum,
}

pub fn spectral_summary(g: &Graph) -> Result<SpectralSummary> {
    require_spectral_graph(g)?;
    let m = ModularityMatrix::new(g)?;
    let spec = eig_sym(m.matrix(), MatrixKind::Modularity)?;
    let am = deflated_extreme(m.matrix(), true)?;
    let ac = algebraic_connectivity(g, LaplacianKind::Classic)?;
    let ac0 = algebraic_connectivity(g, LaplacianKind::Average)?;
    let zero_band = tol::sign_count_tolerance(m.matrix());
    Ok(SpectralSummary {
        m_g: am.value,
        m_multiplicity: am.multiplicity,
        a_g: ac.value,
        a_g0: ac0.value,
        counts: spec.sign_counts(zero_band),
        zero_band,
        lambda1: spec.values()[0],
        leading_vector: orient(am.vector.as_slice(), g.degree())?,
        fiedler_vector: ac.vector.iter().copied().collect(),
        chain: FiedlerChain::new(g, am.value, ac.value, ac0.value),
        modularity_spectrum: spec,
    })
}

//! Modularity and Laplacian matrices, and the modularity of sets and
//! partitions.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Graph, Partition, VertexSet};

/// Null model subtracted from the adjacency matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NullModel {
    /// Rank-one `d dᵀ / vol G`.
    ChungLu,
    /// Constant `p 𝟙𝟙ᵀ` with `p = vol G / n²`.
    ErdosRenyi,
}

/// `M(γ) = A - γ·N` where `N` is the null-model matrix.
///
/// `γ = 1` with the Chung–Lu model is the standard modularity matrix and
/// satisfies `M𝟙 = 0`; `γ = 0` gives back `A`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModularityMatrix {
    null_model: NullModel,
    gamma: f64,
    matrix: DMatrix<f64>,
    adjacency: DMatrix<f64>,
    degree: DVector<f64>,
    volume: f64,
}

impl ModularityMatrix {
    pub fn build(g: &Graph, null_model: NullModel, gamma: f64) -> Result<Self> {
        g.require_volume()?;
        if !gamma.is_finite() || gamma < 0.0 {
            return Err(Error::InvalidParameter(format!(
                "resolution gamma must be finite and nonnegative, got {gamma}"
            )));
        }
        let n = g.n();
        let a = g.adjacency();
        let d = g.degree_vector();
        let vol = g.volume();
        let matrix = match null_model {
            NullModel::ChungLu => {
                DMatrix::from_fn(n, n, |i, j| a[(i, j)] - gamma * d[i] * d[j] / vol)
            }
            NullModel::ErdosRenyi => {
                let p = vol / (n * n) as f64;
                DMatrix::from_fn(n, n, |i, j| a[(i, j)] - gamma * p)
            }
        };
        Ok(ModularityMatrix {
            null_model,
            gamma,
            matrix,
            adjacency: a.clone(),
            degree: d,
            volume: vol,
        })
    }

    /// The standard modularity matrix (Chung–Lu, `γ = 1`).
    pub fn new(g: &Graph) -> Result<Self> {
        Self::build(g, NullModel::ChungLu, 1.0)
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.matrix
    }

    pub fn null_model(&self) -> NullModel {
        self.null_model
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// `p = vol G / n²` for the Erdős–Rényi null model.
    pub fn edge_probability(&self) -> f64 {
        let n = self.degree.len() as f64;
        self.volume / (n * n)
    }

    /// Matrix-free product `Mx`, never touching the dense `M`.
    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        let ax = &self.adjacency * x;
        match self.null_model {
            NullModel::ChungLu => {
                let c = self.gamma * self.degree.dot(x) / self.volume;
                ax - &self.degree * c
            }
            NullModel::ErdosRenyi => {
                let c = self.gamma * self.edge_probability() * x.sum();
                ax.add_scalar(-c)
            }
        }
    }

    /// `xᵀ M y`.
    pub fn bilinear(&self, x: &DVector<f64>, y: &DVector<f64>) -> f64 {
        x.dot(&(&self.matrix * y))
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace()
    }
}

/// `L = D - A` and the average-graph Laplacian `L₀ = D - d dᵀ / 𝟙ᵀd`, so that
/// `M = L₀ - L`.
#[derive(Debug, Clone, PartialEq)]
pub struct Laplacians {
    pub laplacian: DMatrix<f64>,
    pub average: DMatrix<f64>,
}

pub fn build_laplacians(g: &Graph) -> Result<Laplacians> {
    g.require_volume()?;
    let n = g.n();
    let d = g.degree();
    let a = g.adjacency();
    let vol = g.volume();
    let laplacian = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            d[i] - a[(i, i)]
        } else {
            -a[(i, j)]
        }
    });
    let average = DMatrix::from_fn(n, n, |i, j| {
        let diag = if i == j { d[i] } else { 0.0 };
        diag - d[i] * d[j] / vol
    });
    Ok(Laplacians { laplacian, average })
}

/// Dense `L = D - A` without the volume requirement.
pub fn laplacian(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let d = g.degree();
    DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            d[i] - g.weight(i, i)
        } else {
            -g.weight(i, j)
        }
    })
}

/// `Q(S) = 2|E(S)| - (vol S)² / vol G`.
///
/// Returns 0 on an edgeless graph. In debug builds the value is checked
/// against the cut form and the quadratic form `𝟙_Sᵀ M 𝟙_S`.
pub fn modularity_q(g: &Graph, s: &VertexSet) -> f64 {
    let vol = g.volume();
    if vol == 0.0 {
        return 0.0;
    }
    let q = s.internal_weight() - s.volume() * s.volume() / vol;
    #[cfg(debug_assertions)]
    {
        let forms = modularity_forms(g, s);
        let tol = 1e-10 * vol;
        debug_assert!((forms.cut - q).abs() <= tol, "cut form disagrees");
        debug_assert!((forms.quadratic - q).abs() <= tol, "quadratic form disagrees");
    }
    q
}

/// The three equivalent expressions of `Q(S)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModularityForms {
    /// `2|E(S)| - (vol S)² / vol G`.
    pub direct: f64,
    /// `vol S · vol S̄ / vol G - |∂S|`.
    pub cut: f64,
    /// `𝟙_Sᵀ M 𝟙_S` evaluated through `A` and `d`.
    pub quadratic: f64,
}

pub fn modularity_forms(g: &Graph, s: &VertexSet) -> ModularityForms {
    let vol = g.volume();
    let vs = s.volume();
    let direct = s.internal_weight() - vs * vs / vol;
    let complement_volume: f64 = (0..g.n())
        .filter(|&i| !s.contains(i))
        .map(|i| g.degree()[i])
        .sum();
    let cut = vs * complement_volume / vol - s.boundary_weight();
    let members = s.members();
    let n = g.n();
    let d = g.degree();
    let mut quadratic = 0.0;
    for &i in members {
        for &j in members {
            quadratic += g.weight(i, j) - d[i] * d[j] / vol;
        }
    }
    debug_assert_eq!(s.universe(), n);
    ModularityForms {
        direct,
        cut,
        quadratic,
    }
}

/// `Q(S₁,S₂) = |E(S₁,S₂)| - vol S₁ · vol S₂ / vol G` for disjoint sets.
pub fn joint_modularity(g: &Graph, s1: &VertexSet, s2: &VertexSet) -> Result<f64> {
    if let Some(i) = s1.first_overlap(s2) {
        return Err(Error::Overlap(i));
    }
    g.require_volume()?;
    let bridging: f64 = s1
        .members()
        .iter()
        .flat_map(|&i| s2.members().iter().map(move |&j| (i, j)))
        .map(|(i, j)| g.weight(i, j))
        .sum();
    let q = bridging - s1.volume() * s2.volume() / g.volume();
    #[cfg(debug_assertions)]
    {
        let d = g.degree();
        let vol = g.volume();
        let form: f64 = s1
            .members()
            .iter()
            .flat_map(|&i| s2.members().iter().map(move |&j| (i, j)))
            .map(|(i, j)| g.weight(i, j) - d[i] * d[j] / vol)
            .sum();
        debug_assert!((form - q).abs() <= 1e-10 * vol, "𝟙ᵀM𝟙 form disagrees");
        let mut union = s1.mask().to_vec();
        for &j in s2.members() {
            union[j] = true;
        }
        let merged = modularity_q(g, &VertexSet::from_mask(g, union));
        let parts = modularity_q(g, s1) + modularity_q(g, s2) + 2.0 * q;
        debug_assert!((merged - parts).abs() <= 1e-10 * vol, "merge identity fails");
    }
    Ok(q)
}

/// `q(𝒫) = (1 / vol G) Σ Q(S_i)`.
pub fn partition_modularity(g: &Graph, p: &Partition) -> f64 {
    let vol = g.volume();
    if vol == 0.0 {
        return 0.0;
    }
    p.blocks().iter().map(|s| modularity_q(g, s)).sum::<f64>() / vol
}

/// `q(𝒫) = trace(Zᵀ M Z) / vol G`, the matrix route to the same value.
pub fn partition_modularity_trace(m: &ModularityMatrix, p: &Partition, volume: f64) -> f64 {
    let z = p.index_matrix();
    (z.transpose() * m.matrix() * &z).trace() / volume
}

/// Searches for an edge `ij` with `d_i + d_j < √(2 vol G)`; such a pair has
/// positive modularity. `None` is inconclusive.
pub fn indivisibility_certificate(g: &Graph) -> Option<(usize, usize)> {
    let threshold = (2.0 * g.volume()).sqrt();
    let d = g.degree();
    g.edges()
        .into_iter()
        .find(|&(i, j, _)| i != j && d[i] + d[j] < threshold)
        .map(|(i, j, _)| (i, j))
}

//! The serialized report shared by every subcommand.

use serde::{Deserialize, Serialize};

use modspec::bounds::BoundsReport;
use modspec::graph::connected_components;
use modspec::modularity::NullModel;
use modspec::nodal::{Domain, DomainBoundCheck, Sign};
use modspec::spectral::{FiedlerChain, InterlacingReport, SignCounts};
use modspec::{tol, Graph};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub bound_rel: f64,
    pub nodal_zero_rel: f64,
    pub sign_count_rel: f64,
    pub eigen_count_rel: f64,
    pub residual_rel: f64,
    pub orthogonality: f64,
    pub symmetry_rel: f64,
    pub precondition_rel: f64,
    pub interlacing_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            bound_rel: tol::BOUND_REL,
            nodal_zero_rel: tol::NODAL_ZERO_REL,
            sign_count_rel: tol::SIGN_COUNT_REL,
            eigen_count_rel: tol::EIGEN_COUNT_REL,
            residual_rel: tol::RESIDUAL_REL,
            orthogonality: tol::ORTHOGONALITY,
            symmetry_rel: tol::SYMMETRY_REL,
            precondition_rel: tol::PRECONDITION_REL,
            interlacing_rel: tol::INTERLACING_REL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphMeta {
    pub n: usize,
    pub edges: usize,
    pub volume: f64,
    pub d_min: f64,
    pub d_max: f64,
    pub regular: bool,
    pub loops: bool,
    pub components: usize,
}

impl GraphMeta {
    pub fn new(g: &Graph) -> Self {
        GraphMeta {
            n: g.n(),
            edges: g.edge_count(),
            volume: g.volume(),
            d_min: g.min_degree(),
            d_max: g.max_degree(),
            regular: g.regular_degree().is_some(),
            loops: g.has_loops(),
            components: connected_components(g).len(),
        }
    }
}

/// Full spectra. `adjacency` and `modularity` are descending, the two
/// Laplacians ascending, as `ordering` states.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectra {
    pub ordering: String,
    pub adjacency: Vec<f64>,
    pub modularity: Vec<f64>,
    pub laplacian: Vec<f64>,
    pub average_laplacian: Vec<f64>,
}

/// The modularity matrix for the requested null model and resolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModularityOut {
    pub null_model: NullModel,
    pub gamma: f64,
    pub eigenvalues: Vec<f64>,
    pub sign_counts: SignCounts,
    pub zero_band: f64,
    /// Largest eigenvalue restricted to the complement of the constant vector.
    pub max_on_complement: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralOut {
    pub m_g: f64,
    pub m_multiplicity: usize,
    pub a_g: f64,
    pub a_g0: f64,
    pub lambda1: f64,
    pub sign_counts: SignCounts,
    pub zero_band: f64,
    pub leading_vector: Vec<f64>,
    pub fiedler_vector: Vec<f64>,
    pub chain: FiedlerChain,
    pub interlacing: InterlacingReport,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BisectionOut {
    pub members: Vec<String>,
    pub modularity: f64,
    pub normalized: f64,
    pub eigenvalue: f64,
    pub multiplicity: usize,
    pub warning: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainOut {
    pub sign: Sign,
    pub members: Vec<String>,
}

fn label_domains(g: &Graph, domains: &[Domain]) -> Vec<DomainOut> {
    domains
        .iter()
        .map(|d| DomainOut {
            sign: d.sign,
            members: d.members.iter().map(|&i| g.label(i).to_string()).collect(),
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainsOut {
    pub matrix: String,
    pub index: usize,
    pub convention: String,
    pub eigenvalue: f64,
    pub vector: Vec<f64>,
    pub threshold: f64,
    pub oriented: bool,
    pub strong: Vec<DomainOut>,
    pub weak: Vec<DomainOut>,
    pub strong_counted: usize,
    pub weak_counted: usize,
    pub ell: usize,
    pub ell_prime: usize,
    pub strong_bound: usize,
    pub weak_bound: usize,
    pub tightened: bool,
    pub holds: bool,
    pub skipped: Option<String>,
    pub property_violations: Vec<String>,
}

impl DomainsOut {
    pub fn new(g: &Graph, matrix: &str, convention: &str, c: &DomainBoundCheck) -> Self {
        DomainsOut {
            matrix: matrix.to_string(),
            index: c.index,
            convention: convention.to_string(),
            eigenvalue: c.eigenvalue,
            vector: c.report.vector.clone(),
            threshold: c.report.threshold,
            oriented: c.report.oriented,
            strong: label_domains(g, &c.report.strong),
            weak: label_domains(g, &c.report.weak),
            strong_counted: c.strong_counted,
            weak_counted: c.weak_counted,
            ell: c.ell,
            ell_prime: c.ell_prime,
            strong_bound: c.strong_bound,
            weak_bound: c.weak_bound,
            tightened: c.tightened,
            holds: c.holds,
            skipped: c.skipped.clone(),
            property_violations: c.report.check_properties(g),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleOut {
    pub q_prime: f64,
    pub best_cut: Vec<String>,
    pub cuts_evaluated: u64,
    pub q_star: Option<f64>,
    pub best_partition: Option<Vec<Vec<String>>>,
    pub partitions_evaluated: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub seed: Option<u64>,
    pub tolerances: Tolerances,
    pub graph: GraphMeta,
    pub spectra: Option<Spectra>,
    pub modularity: Option<ModularityOut>,
    pub spectral: Option<SpectralOut>,
    pub bisection: Option<BisectionOut>,
    pub bounds: Option<BoundsReport>,
    pub domains: Vec<DomainsOut>,
    pub oracle: Option<OracleOut>,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn new(g: &Graph) -> Self {
        AnalysisReport {
            schema_version: SCHEMA_VERSION,
            tool: "modspec".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            seed: None,
            tolerances: Tolerances::default(),
            graph: GraphMeta::new(g),
            spectra: None,
            modularity: None,
            spectral: None,
            bisection: None,
            bounds: None,
            domains: Vec::new(),
            oracle: None,
            notes: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        crate::json::to_string(self).expect("reports contain only finite numbers")
    }
}

//! Subcommand implementations behind the `modspec` binary.

pub mod json;
pub mod report;

use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use modspec::bounds::{verify_all, BoundRecord};
use modspec::generators::{star_with_loops, FamilySpec, StarLoopsClosedForm};
use modspec::graph::{parse_graph, to_edge_list};
use modspec::modularity::{build_laplacians, ModularityMatrix, NullModel};
use modspec::nodal::{LaplacianNodalCheck, ModularityNodalCheck};
use modspec::oracle::{self, OracleCaps};
use modspec::spectral::{
    complement_basis, eig_sym, interlacing_check, spectral_bisect, spectral_summary, MatrixKind,
};
use modspec::{tol, Error, Graph};

use report::{
    AnalysisReport, BisectionOut, DomainsOut, ModularityOut, OracleOut, Spectra, SpectralOut,
};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_PARSE: u8 = 2;
pub const EXIT_PRECONDITION: u8 = 3;
pub const EXIT_VIOLATION: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Core(Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) | CliError::Io(_) => EXIT_USAGE,
            CliError::Core(e) => match e {
                Error::Parse { .. } | Error::EmptyDocument | Error::InvalidWeight { .. } => EXIT_PARSE,
                Error::Disconnected { .. }
                | Error::NotRegular(_)
                | Error::Precondition(_)
                | Error::ZeroVolume
                | Error::EmptyGraph
                | Error::OracleCap { .. }
                | Error::NoCut => EXIT_PRECONDITION,
                _ => EXIT_USAGE,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
            CliError::Core(e) => e.fmt(f),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Core(e)
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

pub fn load_graph(path: &Path) -> CliResult<Graph> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_graph(&text)?)
}

fn labels(g: &Graph, members: &[usize]) -> Vec<String> {
    members.iter().map(|&i| g.label(i).to_string()).collect()
}

#[derive(Debug, Clone, Copy)]
pub struct AnalyzeOptions {
    pub null_model: NullModel,
    pub gamma: f64,
    pub oracle: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions {
            null_model: NullModel::ChungLu,
            gamma: 1.0,
            oracle: false,
        }
    }
}

fn ascending(mut v: Vec<f64>) -> Vec<f64> {
    v.reverse();
    v
}

pub fn analyze(g: &Graph, opts: AnalyzeOptions) -> CliResult<AnalysisReport> {
    g.require_volume()?;
    g.require_connected()?;
    if g.n() < 2 {
        return Err(Error::Precondition("spectral analysis needs at least two vertices".into()).into());
    }
    let mut report = AnalysisReport::new(g);

    let standard = ModularityMatrix::new(g)?;
    let l = build_laplacians(g)?;
    report.spectra = Some(Spectra {
        ordering: "adjacency and modularity descending; laplacian and average_laplacian ascending"
            .into(),
        adjacency: eig_sym(g.adjacency(), MatrixKind::Adjacency)?.values().to_vec(),
        modularity: eig_sym(standard.matrix(), MatrixKind::Modularity)?.values().to_vec(),
        laplacian: ascending(eig_sym(&l.laplacian, MatrixKind::Laplacian)?.values().to_vec()),
        average_laplacian: ascending(
            eig_sym(&l.average, MatrixKind::AverageLaplacian)?.values().to_vec(),
        ),
    });

    let chosen = ModularityMatrix::build(g, opts.null_model, opts.gamma)?;
    let spec = eig_sym(chosen.matrix(), MatrixKind::Modularity)?;
    let zero_band = tol::sign_count_tolerance(chosen.matrix());
    let basis = complement_basis(g.n());
    let reduced = basis.transpose() * chosen.matrix() * &basis;
    report.modularity = Some(ModularityOut {
        null_model: opts.null_model,
        gamma: opts.gamma,
        eigenvalues: spec.values().to_vec(),
        sign_counts: spec.sign_counts(zero_band),
        zero_band,
        max_on_complement: eig_sym(&reduced, MatrixKind::General)?.values()[0],
    });

    let s = spectral_summary(g)?;
    report.spectral = Some(SpectralOut {
        m_g: s.m_g,
        m_multiplicity: s.m_multiplicity,
        a_g: s.a_g,
        a_g0: s.a_g0,
        lambda1: s.lambda1,
        sign_counts: s.counts,
        zero_band: s.zero_band,
        leading_vector: s.leading_vector,
        fiedler_vector: s.fiedler_vector,
        chain: s.chain,
        interlacing: interlacing_check(g)?,
    });

    match spectral_bisect(g) {
        Ok(b) => {
            report.bisection = Some(BisectionOut {
                members: labels(g, b.set.members()),
                modularity: b.modularity,
                normalized: 2.0 * b.modularity / g.volume(),
                eigenvalue: b.eigenvalue,
                multiplicity: b.multiplicity,
                warning: b.warning,
            })
        }
        Err(e) => report.notes.push(format!("spectral bisection: {e}")),
    }

    if opts.oracle {
        report.oracle = run_oracle(g, OracleCaps::default(), &mut report.notes)?;
    }
    Ok(report)
}

fn run_oracle(g: &Graph, caps: OracleCaps, notes: &mut Vec<String>) -> CliResult<Option<OracleOut>> {
    if g.n() > caps.cut || g.n() < 2 {
        notes.push(format!("oracle skipped: n = {} outside 2..={}", g.n(), caps.cut));
        return Ok(None);
    }
    let r = oracle::run(g, caps)?;
    if r.partition.is_none() {
        notes.push(format!("partition oracle skipped: n = {} above cap {}", g.n(), caps.partition));
    }
    Ok(Some(OracleOut {
        q_prime: r.cut.q_prime,
        best_cut: labels(g, r.cut.set.members()),
        cuts_evaluated: r.cut.evaluated,
        q_star: r.partition.as_ref().map(|p| p.q_star),
        best_partition: r.partition.as_ref().map(|p| {
            p.partition.blocks().iter().map(|b| labels(g, b.members())).collect()
        }),
        partitions_evaluated: r.partition.as_ref().map(|p| p.evaluated),
    }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainMatrix {
    Modularity,
    Laplacian,
}

pub fn domains(g: &Graph, matrix: DomainMatrix, index: usize) -> CliResult<AnalysisReport> {
    g.require_volume()?;
    let mut report = AnalysisReport::new(g);
    let out = match matrix {
        DomainMatrix::Modularity => {
            let c = ModularityNodalCheck::new(g)?.check(index)?;
            DomainsOut::new(g, "M", "1-based, descending eigenvalues", &c)
        }
        DomainMatrix::Laplacian => {
            let c = LaplacianNodalCheck::new(g)?.check(index)?;
            DomainsOut::new(g, "L", "1-based, ascending eigenvalues", &c)
        }
    };
    report.domains.push(out);
    Ok(report)
}

pub fn verify(g: &Graph, caps: OracleCaps) -> CliResult<AnalysisReport> {
    let mut report = AnalysisReport::new(g);
    let bounds = verify_all(g, caps)?;
    if let Some(reason) = &bounds.skipped {
        report.notes.push(reason.clone());
    }
    report.bounds = Some(bounds);
    report.oracle = run_oracle(g, caps, &mut report.notes)?;
    Ok(report)
}

/// Whether every applicable bound in a `verify` report holds.
pub fn verify_passed(report: &AnalysisReport) -> bool {
    report.bounds.as_ref().is_none_or(|b| b.all_hold())
}

/// Sidecar document written next to a generated edge list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratedMeta {
    pub schema_version: u32,
    pub tool: String,
    pub version: String,
    pub family: FamilySpec,
    pub seed: Option<u64>,
    pub n: usize,
    pub edges: usize,
    pub volume: f64,
    pub star_loops: Option<StarLoopsClosedForm>,
}

pub fn generate(family: &FamilySpec) -> CliResult<(String, GeneratedMeta)> {
    let g = family.build()?;
    let star_loops = match family {
        FamilySpec::StarLoops { alpha, beta, m } => Some(star_with_loops(*alpha, *beta, *m)?.1),
        _ => None,
    };
    let meta = GeneratedMeta {
        schema_version: report::SCHEMA_VERSION,
        tool: "modspec".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        family: family.clone(),
        seed: family.seed(),
        n: g.n(),
        edges: g.edge_count(),
        volume: g.volume(),
        star_loops,
    };
    Ok((to_edge_list(&g), meta))
}

fn fmt_vec(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.6}")).collect();
    format!("[{}]", parts.join(", "))
}

pub fn render_analysis(r: &AnalysisReport) -> String {
    let mut out = String::new();
    let g = &r.graph;
    let _ = writeln!(
        out,
        "graph: n = {}, edges = {}, vol = {}, degrees {}..{}{}{}",
        g.n,
        g.edges,
        g.volume,
        g.d_min,
        g.d_max,
        if g.regular { ", regular" } else { "" },
        if g.loops { ", loops" } else { "" }
    );
    if let Some(s) = &r.spectra {
        let _ = writeln!(out, "spectrum A (desc):  {}", fmt_vec(&s.adjacency));
        let _ = writeln!(out, "spectrum M (desc):  {}", fmt_vec(&s.modularity));
        let _ = writeln!(out, "spectrum L (asc):   {}", fmt_vec(&s.laplacian));
        let _ = writeln!(out, "spectrum L0 (asc):  {}", fmt_vec(&s.average_laplacian));
    }
    if let Some(m) = &r.modularity {
        if m.null_model != NullModel::ChungLu || m.gamma != 1.0 {
            let _ = writeln!(
                out,
                "M({:?}, gamma = {}): {} positive, max on 1-perp {:.6}",
                m.null_model, m.gamma, m.sign_counts.positive, m.max_on_complement
            );
        }
    }
    if let Some(s) = &r.spectral {
        let _ = writeln!(
            out,
            "m(G) = {:.10} (multiplicity {}), a(G) = {:.10}, a(G0) = {:.10}",
            s.m_g, s.m_multiplicity, s.a_g, s.a_g0
        );
        let _ = writeln!(
            out,
            "eigenvalues of M: {} positive, {} zero, {} negative",
            s.sign_counts.positive, s.sign_counts.zero, s.sign_counts.negative
        );
        let _ = writeln!(
            out,
            "chain d_min - a <= a0 - a <= m <= d_max - a: {}; interlacing: {}",
            if s.chain.holds() { "holds" } else { "FAILS" },
            if s.interlacing.holds { "holds" } else { "FAILS" }
        );
    }
    if let Some(b) = &r.bisection {
        let _ = writeln!(
            out,
            "bisection: S = {{{}}}, Q(S) = {:.10}",
            b.members.join(", "),
            b.modularity
        );
        if let Some(w) = &b.warning {
            let _ = writeln!(out, "  warning: {w}");
        }
    }
    for d in &r.domains {
        let _ = writeln!(
            out,
            "{} eigenvector {} ({}): lambda = {:.10}",
            d.matrix, d.index, d.convention, d.eigenvalue
        );
        let show = |ds: &[report::DomainOut]| -> String {
            ds.iter()
                .map(|x| {
                    let s = if x.sign == modspec::nodal::Sign::Positive { '+' } else { '-' };
                    format!("{s}{{{}}}", x.members.join(","))
                })
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "  strong: {}", show(&d.strong));
        let _ = writeln!(out, "  weak:   {}", show(&d.weak));
        let status = match &d.skipped {
            Some(reason) => format!("not applicable ({reason})"),
            None if d.holds => "holds".into(),
            None => "VIOLATED".into(),
        };
        let _ = writeln!(
            out,
            "  bound: strong {} <= {}, weak {} <= {}: {status}",
            d.strong_counted, d.strong_bound, d.weak_counted, d.weak_bound
        );
    }
    if let Some(b) = &r.bounds {
        for rec in &b.records {
            let _ = writeln!(out, "{}", render_record(rec));
        }
    }
    if let Some(o) = &r.oracle {
        let _ = writeln!(out, "oracle: q'_G = {:.10} at {{{}}}", o.q_prime, o.best_cut.join(", "));
        if let (Some(q), Some(p)) = (o.q_star, &o.best_partition) {
            let blocks: Vec<String> = p.iter().map(|b| format!("{{{}}}", b.join(", "))).collect();
            let _ = writeln!(out, "oracle: q_G = {q:.10} at {}", blocks.join(" "));
        }
    }
    for n in &r.notes {
        let _ = writeln!(out, "note: {n}");
    }
    out
}

fn render_record(r: &BoundRecord) -> String {
    let status = match r.holds {
        Some(true) => "ok",
        Some(false) => "VIOLATED",
        None => "skipped",
    };
    let lhs = r.lhs.map_or("-".to_string(), |x| format!("{x:.10}"));
    let mut line = format!("[{status:>8}] {}: {lhs} <= {:.10}", r.name, r.rhs);
    if let Some(n) = &r.note {
        line.push_str(&format!(" ({n})"));
    }
    line
}

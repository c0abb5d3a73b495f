use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use modspec::generators::FamilySpec;
use modspec::modularity::NullModel;
use modspec::oracle::OracleCaps;
use modspec_cli::{
    analyze, domains, generate, json, load_graph, render_analysis, verify, verify_passed,
    AnalyzeOptions, CliError, CliResult, DomainMatrix, EXIT_OK, EXIT_USAGE, EXIT_VIOLATION,
};

#[derive(Parser)]
#[command(name = "modspec", version, about = "Spectral analysis of graph modularity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum NullModelArg {
    ChungLu,
    Er,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatrixArg {
    #[value(name = "M", alias = "m")]
    M,
    #[value(name = "L", alias = "l")]
    L,
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    StarLoops,
    CliqueOfCliques,
    Clique,
    Star,
    Cycle,
    Path,
    Petersen,
    ChungLu,
    RandomRegular,
    RandomConnected,
}

#[derive(Subcommand)]
enum Command {
    /// Spectra, algebraic modularity and connectivity, interlacing and bisection.
    Analyze {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "chung-lu")]
        null_model: NullModelArg,
        #[arg(long, default_value_t = 1.0)]
        gamma: f64,
        /// Also run the exact cut and partition oracles.
        #[arg(long)]
        oracle: bool,
        #[arg(long)]
        json: bool,
    },
    /// Nodal domains of one eigenvector and the matching domain-count bound.
    Domains {
        path: PathBuf,
        #[arg(long, value_enum, default_value = "M")]
        matrix: MatrixArg,
        /// 1-based; descending eigenvalues for M, ascending for L.
        #[arg(long, default_value_t = 1)]
        index: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check every applicable inequality; exit 4 if any is violated.
    Verify {
        path: PathBuf,
        #[arg(long, default_value_t = OracleCaps::default().cut)]
        cut_cap: usize,
        #[arg(long, default_value_t = OracleCaps::default().partition)]
        partition_cap: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write a generated graph as an edge list, with a metadata sidecar.
    Generate {
        #[arg(value_enum)]
        family: FamilyArg,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long)]
        beta: Option<f64>,
        #[arg(long)]
        m: Option<usize>,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        q: Option<usize>,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        k: Option<usize>,
        /// Edge probability for random-connected.
        #[arg(long)]
        prob: Option<f64>,
        /// Comma-separated expected degrees for chung-lu.
        #[arg(long, value_delimiter = ',')]
        degrees: Vec<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Edge-list path; the sidecar goes to `<out>.meta.json`. Without it
        /// the edge list is printed.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn need<T>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

// A closed pipe (`| head`) is not an error worth a panic.
fn print_out(text: &str) -> CliResult<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(CliError::Io(format!("cannot write to stdout: {e}")))
        }
        _ => Ok(()),
    }
}

fn emit(report: &modspec_cli::report::AnalysisReport, as_json: bool) -> CliResult<()> {
    if as_json {
        print_out(&format!("{}\n", report.to_json()))
    } else {
        print_out(&render_analysis(report))
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Analyze { path, null_model, gamma, oracle, json } => {
            let g = load_graph(&path)?;
            let null_model = match null_model {
                NullModelArg::ChungLu => NullModel::ChungLu,
                NullModelArg::Er => NullModel::ErdosRenyi,
            };
            let report = analyze(&g, AnalyzeOptions { null_model, gamma, oracle })?;
            emit(&report, json)?;
            Ok(EXIT_OK)
        }
        Command::Domains { path, matrix, index, json } => {
            let g = load_graph(&path)?;
            let matrix = match matrix {
                MatrixArg::M => DomainMatrix::Modularity,
                MatrixArg::L => DomainMatrix::Laplacian,
            };
            emit(&domains(&g, matrix, index)?, json)?;
            Ok(EXIT_OK)
        }
        Command::Verify { path, cut_cap, partition_cap, json } => {
            let g = load_graph(&path)?;
            let caps = OracleCaps { cut: cut_cap, partition: partition_cap };
            let report = verify(&g, caps)?;
            emit(&report, json)?;
            Ok(if verify_passed(&report) { EXIT_OK } else { EXIT_VIOLATION })
        }
        Command::Generate { family, alpha, beta, m, p, q, n, k, prob, degrees, seed, out } => {
            let spec = match family {
                FamilyArg::StarLoops => FamilySpec::StarLoops {
                    alpha: need(alpha, "alpha")?,
                    beta: need(beta, "beta")?,
                    m: need(m, "m")?,
                },
                FamilyArg::CliqueOfCliques => FamilySpec::CliqueOfCliques {
                    p: need(p, "p")?,
                    q: need(q, "q")?,
                    m: need(m, "m")?,
                },
                FamilyArg::Clique => FamilySpec::Clique { n: need(n, "n")? },
                FamilyArg::Star => FamilySpec::Star { n: need(n, "n")? },
                FamilyArg::Cycle => FamilySpec::Cycle { n: need(n, "n")? },
                FamilyArg::Path => FamilySpec::Path { n: need(n, "n")? },
                FamilyArg::Petersen => FamilySpec::Petersen,
                FamilyArg::ChungLu => {
                    if degrees.is_empty() {
                        return Err(CliError::Usage("missing --degrees".into()));
                    }
                    FamilySpec::ChungLu { degrees, seed }
                }
                FamilyArg::RandomRegular => FamilySpec::RandomRegular {
                    n: need(n, "n")?,
                    k: need(k, "k")?,
                    seed,
                },
                FamilyArg::RandomConnected => FamilySpec::RandomConnected {
                    n: need(n, "n")?,
                    p: need(prob, "prob")?,
                    seed,
                },
            };
            let (edges, meta) = generate(&spec)?;
            match out {
                Some(path) => {
                    write_file(&path, &edges)?;
                    let mut sidecar = path.into_os_string();
                    sidecar.push(".meta.json");
                    let text = json::to_string(&meta).expect("metadata is finite");
                    write_file(Path::new(&sidecar), &format!("{text}\n"))?;
                }
                None => print_out(&edges)?,
            }
            Ok(EXIT_OK)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

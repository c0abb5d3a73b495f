use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use modspec_cli::report::AnalysisReport;
use modspec_cli::{GeneratedMeta, EXIT_OK, EXIT_PARSE, EXIT_PRECONDITION, EXIT_USAGE, EXIT_VIOLATION};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modspec")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> u8 {
    out.status.code().expect("exited normally") as u8
}

fn report(args: &[&str]) -> AnalysisReport {
    let out = run(args);
    assert!(
        code(&out) == EXIT_OK || code(&out) == EXIT_VIOLATION,
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid report")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_triangle_bridge() {
    let f = fixture("triangle-bridge.txt");
    let r = report(&["analyze", path_str(&f), "--json"]);
    let s = r.spectral.unwrap();
    assert!((s.m_g - 3f64.sqrt()).abs() < 1e-9, "m = {}", s.m_g);
    assert_eq!(s.sign_counts.positive, 1);
    assert!(s.interlacing.holds);
    let b = r.bisection.unwrap();
    assert_eq!(b.members.len(), 3);
    assert!(b.modularity > 0.0);
}

#[test]
fn analyze_clique_and_path() {
    let k4 = fixture("k4.txt");
    let s = report(&["analyze", path_str(&k4), "--json"]).spectral.unwrap();
    assert!((s.m_g + 1.0).abs() < 1e-9);
    assert_eq!(s.sign_counts.positive, 0);

    let p3 = fixture("p3.txt");
    let s = report(&["analyze", path_str(&p3), "--json"]).spectral.unwrap();
    assert!(s.m_g.abs() < 1e-9);
}

#[test]
fn analyze_with_oracle_and_er_null_model() {
    let f = fixture("triangle-bridge.txt");
    let r = report(&["analyze", path_str(&f), "--oracle", "--null-model", "er", "--gamma", "0.5", "--json"]);
    let m = r.modularity.unwrap();
    assert_eq!(m.gamma, 0.5);
    let o = r.oracle.unwrap();
    assert!((o.q_prime - 5.0 / 14.0).abs() < 1e-12, "q' = {}", o.q_prime);
    assert_eq!(o.best_partition.unwrap().len(), 2);
}

#[test]
fn analyze_text_output() {
    let f = fixture("triangle-bridge.txt");
    let out = run(&["analyze", path_str(&f)]);
    assert_eq!(code(&out), EXIT_OK);
    assert!(!out.stdout.is_empty());
    assert!(out.stdout[0] != b'{');
}

#[test]
fn domains_on_star_with_loops() {
    let f = fixture("star-loops.txt");
    let r = report(&["domains", path_str(&f), "--matrix", "M", "--index", "1", "--json"]);
    let d = &r.domains[0];
    assert_eq!(d.strong.len(), 6);
    assert_eq!(d.strong_counted, 1);
    assert!(d.holds);
    assert!(d.property_violations.is_empty());

    let r = report(&["domains", path_str(&f), "--matrix", "L", "--index", "2", "--json"]);
    let d = &r.domains[0];
    assert_eq!(d.weak.len(), 2);
    assert!(d.holds);
}

#[test]
fn domains_index_out_of_range() {
    let f = fixture("p3.txt");
    let out = run(&["domains", path_str(&f), "--index", "9"]);
    assert_ne!(code(&out), EXIT_OK);
    assert!(!out.stderr.is_empty());
}

#[test]
fn verify_exit_codes() {
    for name in ["triangle-bridge.txt", "petersen.txt", "star-loops.txt"] {
        let out = run(&["verify", path_str(&fixture(name))]);
        assert_eq!(code(&out), EXIT_OK, "{name}: {}", String::from_utf8_lossy(&out.stdout));
    }
    // m(K4) < 0, so the spectral cut bounds fail there.
    let out = run(&["verify", path_str(&fixture("k4.txt")), "--json"]);
    assert_eq!(code(&out), EXIT_VIOLATION);
    let r: AnalysisReport = serde_json::from_slice(&out.stdout).unwrap();
    assert!(!r.bounds.unwrap().violations().is_empty());
}

#[test]
fn verify_disconnected_is_skipped_not_failed() {
    let r = report(&["verify", path_str(&fixture("disconnected.txt")), "--json"]);
    assert!(r.bounds.as_ref().unwrap().skipped.is_some());
    assert!(!r.notes.is_empty());
}

#[test]
fn verify_caps_skip_oracle() {
    let f = fixture("petersen.txt");
    let r = report(&["verify", path_str(&f), "--cut-cap", "4", "--partition-cap", "4", "--json"]);
    assert!(r.oracle.is_none());
    assert!(r.bounds.unwrap().q_prime.is_none());
}

#[test]
fn error_exit_codes() {
    assert_eq!(code(&run(&["analyze", path_str(&fixture("bad.txt"))])), EXIT_PARSE);
    assert_eq!(code(&run(&["analyze", path_str(&fixture("negative.txt"))])), EXIT_PARSE);
    assert_eq!(code(&run(&["analyze", path_str(&fixture("disconnected.txt"))])), EXIT_PRECONDITION);
    assert_eq!(code(&run(&["analyze", "/nonexistent/graph.txt"])), EXIT_USAGE);
    assert_eq!(code(&run(&["frobnicate"])), EXIT_USAGE);
    assert_eq!(code(&run(&["generate", "star-loops", "--alpha", "1"])), EXIT_USAGE);
    assert_eq!(code(&run(&["--help"])), EXIT_OK);
}

#[test]
fn json_is_byte_identical_across_runs() {
    for args in [
        vec!["analyze", "--oracle", "--json"],
        vec!["verify", "--json"],
        vec!["domains", "--json"],
    ] {
        let mut full = args.clone();
        let f = fixture("triangle-bridge.txt");
        full.insert(1, path_str(&f));
        let a = run(&full).stdout;
        let b = run(&full).stdout;
        assert!(!a.is_empty());
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn report_round_trips() {
    for name in ["triangle-bridge.txt", "petersen.txt", "k4.txt"] {
        let f = fixture(name);
        for sub in ["analyze", "verify"] {
            let out = run(&[sub, path_str(&f), "--json"]);
            let text = String::from_utf8(out.stdout).unwrap();
            let r: AnalysisReport = serde_json::from_str(&text).unwrap();
            assert_eq!(format!("{}\n", r.to_json()), text, "{sub} {name}");
            let again: AnalysisReport = serde_json::from_str(&r.to_json()).unwrap();
            assert_eq!(again, r);
        }
    }
}

#[test]
fn generate_writes_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("star.txt");
    let status = run(&[
        "generate", "star-loops", "--alpha", "1", "--beta", "10", "--m", "5", "--out", path_str(&out),
    ]);
    assert_eq!(code(&status), EXIT_OK);
    let meta_path = dir.path().join("star.txt.meta.json");
    let meta: GeneratedMeta =
        serde_json::from_str(&std::fs::read_to_string(meta_path).unwrap()).unwrap();
    let cf = meta.star_loops.unwrap();
    assert!((cf.lambda_bar - 1.2).abs() < 1e-12);
    assert_eq!(meta.n, 6);

    let r = report(&["analyze", path_str(&out), "--json"]);
    assert!((r.spectral.unwrap().m_g - cf.lambda_bar).abs() < 1e-9);
}

#[test]
fn generated_graphs_always_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["clique-of-cliques", "--p", "3", "--q", "3", "--m", "2"],
        vec!["clique", "--n", "5"],
        vec!["star", "--n", "6"],
        vec!["cycle", "--n", "7"],
        vec!["path", "--n", "5"],
        vec!["petersen"],
        vec!["random-regular", "--n", "8", "--k", "3", "--seed", "4"],
        vec!["random-connected", "--n", "9", "--prob", "0.4", "--seed", "2"],
    ];
    for (i, case) in cases.iter().enumerate() {
        let path = dir.path().join(format!("g{i}.txt"));
        let mut args = vec!["generate"];
        args.extend(case.iter().copied());
        args.extend(["--out", path_str(&path)]);
        assert_eq!(code(&run(&args)), EXIT_OK, "{case:?}");
        let out = run(&["analyze", path_str(&path), "--json"]);
        assert_eq!(code(&out), EXIT_OK, "{case:?}: {}", String::from_utf8_lossy(&out.stderr));
        let verify = run(&["verify", path_str(&path)]);
        assert!(matches!(code(&verify), 0 | 4), "{case:?}");
    }
    // Same seed, same graph.
    let a = run(&["generate", "random-connected", "--n", "8", "--prob", "0.5", "--seed", "9"]).stdout;
    let b = run(&["generate", "random-connected", "--n", "8", "--prob", "0.5", "--seed", "9"]).stdout;
    assert_eq!(a, b);
}

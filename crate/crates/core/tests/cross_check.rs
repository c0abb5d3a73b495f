mod common;

use common::*;
use modspec::bounds::BoundsContext;
use modspec::modularity::{build_laplacians, modularity_q, partition_modularity, ModularityMatrix};
use modspec::oracle::{best_cut, best_partition, indivisibility};
use modspec::spectral::{
    algebraic_connectivity, algebraic_modularity, eig_sym, spectral_bisect, LaplacianKind, MatrixKind,
};
use modspec::VertexSet;
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

#[test]
fn eig_sym_matches_jacobi_on_random_symmetric() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let n = rng.random_range(1..=10);
        let mut x = DMatrix::zeros(n, n);
        for i in 0..n {
            for j in i..n {
                let v = rng.random_range(-3.0..3.0);
                x[(i, j)] = v;
                x[(j, i)] = v;
            }
        }
        let s = eig_sym(&x, MatrixKind::General).unwrap();
        let reference = jacobi_values(&x);
        for (a, b) in s.values().iter().zip(&reference) {
            assert!(close(*a, *b, 1e-10), "{:?} vs {reference:?}", s.values());
        }
        assert!(s.max_residual() <= 1e-9 * s.norm().max(1.0));
        assert!(s.orthogonality_defect() <= 1e-9);
    }
}

#[test]
fn graph_spectra_match_jacobi() {
    for g in random_corpus(60, 2, 12, 500) {
        let m = ModularityMatrix::new(&g).unwrap();
        assert!(
            (m.matrix() - reference_modularity_matrix(&g)).abs().max() <= 1e-12 * g.volume().max(1.0)
        );
        let s = eig_sym(m.matrix(), MatrixKind::Modularity).unwrap();
        for (a, b) in s.values().iter().zip(jacobi_values(m.matrix())) {
            assert!(close(*a, b, 1e-9));
        }
        let am = algebraic_modularity(&g).unwrap();
        assert!(close(am.value, reference_m(&g), 1e-9), "{} vs {}", am.value, reference_m(&g));
        let l = build_laplacians(&g).unwrap();
        let a = algebraic_connectivity(&g, LaplacianKind::Classic).unwrap();
        assert!(close(a.value, extreme_on_complement(&l.laplacian, false), 1e-9));
        let a0 = algebraic_connectivity(&g, LaplacianKind::Average).unwrap();
        assert!(close(a0.value, extreme_on_complement(&l.average, false), 1e-9));
    }
}

#[test]
fn best_cut_matches_naive_enumeration() {
    let mut graphs: Vec<_> = named_corpus().into_iter().map(|(_, g)| g).collect();
    graphs.extend(random_corpus(80, 2, 11, 900));
    for g in graphs {
        let c = best_cut(&g).unwrap();
        let reference = reference_best_cut(&g);
        assert!(close(c.modularity, reference, 1e-12));
        assert!(close(c.q_prime, 2.0 * reference / g.volume(), 1e-12));
        assert!(c.set.contains(0));
        assert!(close(modularity_q(&g, &c.set), reference_q(&g, c.set.members()), 1e-12));
    }
}

#[test]
fn best_partition_matches_naive_enumeration() {
    let mut graphs: Vec<_> = named_corpus()
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| g.n() <= 6)
        .collect();
    graphs.extend(random_corpus(40, 2, 6, 1300));
    for g in graphs {
        let p = best_partition(&g).unwrap();
        let reference = reference_best_partition(&g);
        assert!(close(p.q_star, reference, 1e-12), "{} vs {reference}", p.q_star);
        assert!(close(partition_modularity(&g, &p.partition), p.q_star, 1e-12));
    }
}

#[test]
fn oracle_invariants() {
    for g in random_corpus(60, 2, 9, 2000) {
        let c = best_cut(&g).unwrap();
        let p = best_partition(&g).unwrap();
        assert!(p.q_star >= c.q_prime - 1e-12);
        let trace = ModularityMatrix::new(&g).unwrap().trace();
        assert!(p.q_star >= trace / g.volume() - 1e-12);
        // An optimal partition cannot be improved by merging two of its sets.
        if p.partition.len() >= 2 {
            let ctx = BoundsContext::new(&g).unwrap();
            let r = ctx.check_communities2(&p.partition).unwrap();
            assert_eq!(r.holds, Some(true));
        }
    }
}

#[test]
fn algebraic_indivisibility_implies_indivisibility() {
    let mut graphs: Vec<_> = named_corpus().into_iter().map(|(_, g)| g).collect();
    graphs.extend(random_corpus(100, 2, 12, 3000));
    let mut converse_failures = 0;
    for g in graphs {
        let r = indivisibility(&g).unwrap();
        assert!(r.consistent());
        if r.indivisible && r.algebraically_indivisible == Some(false) {
            converse_failures += 1;
        }
    }
    eprintln!("indivisible graphs with m(G) > 0: {converse_failures}");
}

#[test]
fn path_three_is_a_boundary_case() {
    let g = modspec::graph::parse_graph("1 2\n2 3").unwrap();
    let r = indivisibility(&g).unwrap();
    assert!(r.indivisible);
    assert_eq!(r.algebraically_indivisible, Some(true));
    assert!(algebraic_modularity(&g).unwrap().value.abs() < 1e-12);
    assert!(r.max_modularity < 0.0);
}

#[test]
fn bisection_never_beats_the_oracle() {
    let mut exact = 0;
    let graphs = random_corpus(60, 3, 12, 4000);
    let total = graphs.len();
    for g in graphs {
        let Ok(b) = spectral_bisect(&g) else { continue };
        let c = best_cut(&g).unwrap();
        assert!(b.modularity <= c.modularity + 1e-9 * g.volume());
        if (b.modularity - c.modularity).abs() <= 1e-9 * g.volume() {
            exact += 1;
        }
        let s = VertexSet::new(&g, b.set.members().iter().copied()).unwrap();
        assert!(close(modularity_q(&g, &s), b.modularity, 1e-12));
    }
    eprintln!("spectral bisection optimal on {exact}/{total} graphs");
}

#[test]
fn triangle_bridge_bisection_matches_oracle() {
    let g = triangle_bridge();
    let b = spectral_bisect(&g).unwrap();
    assert_eq!(b.modularity, 2.5);
    assert_eq!(best_cut(&g).unwrap().modularity, 2.5);
}

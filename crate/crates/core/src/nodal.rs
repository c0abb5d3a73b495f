//! Signed nodal domains of vectors over a graph, and the domain-count
//! theorems for eigenvectors of `A`, `M` and `L`.
//!
//! A *strong* domain is a maximal connected set on which `u` is strictly
//! positive (or strictly negative). A *weak* domain is a maximal connected set
//! on which `u ≥ 0` (or `u ≤ 0`) that contains at least one nonzero entry;
//! weak domains of opposite sign may overlap on zero entries. Entries with
//! `|u_i| ≤ 1e-10 ‖u‖∞` are treated as zero and the threshold is recorded in
//! every report.

use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{components_within, Graph};
use crate::modularity::{laplacian, ModularityMatrix};
use crate::spectral::{eig_sym, eigen_counts, eigen_counts_below, MatrixKind, Spectrum};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Positive,
    Negative,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Domain {
    pub members: Vec<usize>,
    pub sign: Sign,
}

pub fn zero_threshold(u: &[f64]) -> f64 {
    tol::NODAL_ZERO_REL * tol::vec_inf_norm(u)
}

/// Returns `u` or `-u` so that `dᵀu ≥ 0`. When `dᵀu` vanishes (within
/// rounding), the first nonzero entry is made positive.
pub fn orient(u: &[f64], d: &[f64]) -> Result<Vec<f64>> {
    let norm = tol::vec_inf_norm(u);
    if norm == 0.0 {
        return Err(Error::ZeroVector);
    }
    let dot: f64 = u.iter().zip(d).map(|(a, b)| a * b).sum();
    let scale: f64 = u.iter().zip(d).map(|(a, b)| (a * b).abs()).sum();
    let flip = if dot.abs() <= 1e-12 * scale.max(f64::MIN_POSITIVE) {
        let tau = zero_threshold(u);
        u.iter().copied().find(|x| x.abs() > tau).is_some_and(|x| x < 0.0)
    } else {
        dot < 0.0
    };
    Ok(if flip {
        u.iter().map(|x| -x).collect()
    } else {
        u.to_vec()
    })
}

fn collect_domains(g: &Graph, mask: &[bool], sign: Sign, keep: impl Fn(&[usize]) -> bool) -> Vec<Domain> {
    components_within(g, mask)
        .into_iter()
        .filter(|c| keep(c))
        .map(|members| Domain { members, sign })
        .collect()
}

fn sort_domains(domains: &mut [Domain]) {
    domains.sort_by(|a, b| (a.members[0], a.sign).cmp(&(b.members[0], b.sign)));
}

pub fn strong_domains(g: &Graph, u: &[f64]) -> Vec<Domain> {
    let tau = zero_threshold(u);
    let pos: Vec<bool> = u.iter().map(|&x| x > tau).collect();
    let neg: Vec<bool> = u.iter().map(|&x| x < -tau).collect();
    let mut out = collect_domains(g, &pos, Sign::Positive, |_| true);
    out.extend(collect_domains(g, &neg, Sign::Negative, |_| true));
    sort_domains(&mut out);
    out
}

pub fn weak_domains(g: &Graph, u: &[f64]) -> Vec<Domain> {
    let tau = zero_threshold(u);
    let nonneg: Vec<bool> = u.iter().map(|&x| x >= -tau).collect();
    let nonpos: Vec<bool> = u.iter().map(|&x| x <= tau).collect();
    let mut out = collect_domains(g, &nonneg, Sign::Positive, |c| c.iter().any(|&i| u[i] > tau));
    out.extend(collect_domains(g, &nonpos, Sign::Negative, |c| {
        c.iter().any(|&i| u[i] < -tau)
    }));
    sort_domains(&mut out);
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NodalDomainReport {
    pub vector: Vec<f64>,
    pub threshold: f64,
    pub strong: Vec<Domain>,
    pub weak: Vec<Domain>,
    /// Whether `dᵀu ≥ 0` holds for the reported vector.
    pub oriented: bool,
}

impl NodalDomainReport {
    pub fn new(g: &Graph, u: &[f64]) -> Self {
        let dot: f64 = u.iter().zip(g.degree()).map(|(a, b)| a * b).sum();
        NodalDomainReport {
            vector: u.to_vec(),
            threshold: zero_threshold(u),
            strong: strong_domains(g, u),
            weak: weak_domains(g, u),
            oriented: dot >= 0.0 || dot.abs() <= 1e-12 * tol::vec_inf_norm(u) * g.volume(),
        }
    }

    pub fn strong_count(&self, sign: Sign) -> usize {
        self.strong.iter().filter(|d| d.sign == sign).count()
    }

    pub fn weak_count(&self, sign: Sign) -> usize {
        self.weak.iter().filter(|d| d.sign == sign).count()
    }

    pub fn has_both_signs(&self) -> bool {
        self.strong_count(Sign::Positive) > 0 && self.strong_count(Sign::Negative) > 0
    }

    /// Checks the structural properties every domain decomposition has
    /// (covering, disjointness, connectivity, sign alternation). Returns the
    /// list of violations, empty when all hold.
    pub fn check_properties(&self, g: &Graph) -> Vec<String> {
        let n = g.n();
        let u = &self.vector;
        let tau = self.threshold;
        let nonzero = |i: usize| u[i].abs() > tau;
        let mut bad = Vec::new();

        // P1
        let mut strong_owner = vec![None; n];
        for (k, d) in self.strong.iter().enumerate() {
            for &i in &d.members {
                if let Some(prev) = strong_owner[i] {
                    bad.push(format!("P1: vertex {i} in strong domains {prev} and {k}"));
                }
                strong_owner[i] = Some(k);
            }
        }
        let mut weak_cover = vec![0usize; n];
        for d in &self.weak {
            for &i in &d.members {
                weak_cover[i] += 1;
            }
        }
        if let Some(i) = weak_cover.iter().position(|&c| c == 0) {
            bad.push(format!("P1: vertex {i} is in no weak domain"));
        }
        for (k, s) in self.strong.iter().enumerate() {
            let inside = self.weak.iter().any(|w| {
                w.sign == s.sign && s.members.iter().all(|i| w.members.binary_search(i).is_ok())
            });
            if !inside {
                bad.push(format!("P1: strong domain {k} is not inside a weak domain"));
            }
        }
        if self.strong.len() < self.weak.len() {
            bad.push("P1: fewer strong than weak domains".into());
        }
        let no_zeros = (0..n).all(nonzero);
        if no_zeros && self.strong != self.weak {
            bad.push("P1: no zero entries but strong and weak domains differ".into());
        }

        // P2 and P3
        for d in self.strong.iter().chain(&self.weak) {
            if !d.members.iter().any(|&i| nonzero(i)) {
                bad.push(format!("P2: domain {:?} has no nonzero entry", d.members));
            }
            let mut mask = vec![false; n];
            for &i in &d.members {
                mask[i] = true;
            }
            if components_within(g, &mask).len() != 1 {
                bad.push(format!("P3: domain {:?} is not connected", d.members));
            }
        }
        for (a, wa) in self.weak.iter().enumerate() {
            for wb in &self.weak[a + 1..] {
                let overlap: Vec<usize> = wa
                    .members
                    .iter()
                    .copied()
                    .filter(|i| wb.members.binary_search(i).is_ok())
                    .collect();
                if overlap.is_empty() {
                    continue;
                }
                if wa.sign == wb.sign {
                    bad.push("P2: overlapping weak domains share a sign".into());
                }
                if overlap.iter().any(|&i| nonzero(i)) {
                    bad.push("P2: weak domains overlap on a nonzero entry".into());
                }
            }
        }

        // P4 and sign alternation of adjacent weak domains
        for (a, wa) in self.weak.iter().enumerate() {
            for (b, wb) in self.weak.iter().enumerate() {
                if a == b {
                    continue;
                }
                let adjacent = wa
                    .members
                    .iter()
                    .any(|&i| wb.members.iter().any(|&j| i != j && g.weight(i, j) != 0.0));
                if !adjacent {
                    continue;
                }
                if wa.sign == wb.sign {
                    bad.push("adjacent weak domains share a sign".into());
                }
                let witness = wa.members.iter().any(|&i| {
                    wb.members.iter().any(|&j| {
                        wa.members.binary_search(&j).is_err() && g.weight(i, j) != 0.0 && nonzero(j)
                    })
                });
                if !witness {
                    bad.push(format!("P4: no nonzero neighbour from weak domain {a} into {b}"));
                }
            }
        }
        bad
    }
}

/// Domain-count check for one eigenvector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainBoundCheck {
    pub matrix: MatrixKind,
    /// 1-based: descending for `A`/`M`, ascending for `L`.
    pub index: usize,
    pub eigenvalue: f64,
    pub ell: usize,
    pub ell_prime: usize,
    /// Positive domains for `A`/`M`; all domains for `L`.
    pub strong_counted: usize,
    pub weak_counted: usize,
    pub strong_bound: usize,
    pub weak_bound: usize,
    /// `M` only: the strong bound was reduced to `ℓ` because `λ` is not an
    /// eigenvalue of `A`.
    pub tightened: bool,
    pub holds: bool,
    pub skipped: Option<String>,
    pub report: NodalDomainReport,
}

/// Precomputed spectra of `M` and `A` for checking every eigenvector of `M`.
pub struct ModularityNodalCheck<'g> {
    g: &'g Graph,
    modularity: Spectrum,
    adjacency: Spectrum,
}

impl<'g> ModularityNodalCheck<'g> {
    pub fn new(g: &'g Graph) -> Result<Self> {
        g.require_connected()?;
        let m = ModularityMatrix::new(g)?;
        Ok(Self {
            g,
            modularity: eig_sym(m.matrix(), MatrixKind::Modularity)?,
            adjacency: eig_sym(g.adjacency(), MatrixKind::Adjacency)?,
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.modularity
    }

    /// The positive-domain bounds for the `index`-th (1-based, descending)
    /// eigenvector of `M`: at most `ℓ+1` positive strong domains (`ℓ` when
    /// `λ` is not an eigenvalue of `A`) and at most `ℓ′+1` positive weak ones.
    pub fn check(&self, index: usize) -> Result<DomainBoundCheck> {
        let n = self.g.n();
        if index == 0 || index > n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let lambda = self.modularity.values()[index - 1];
        let u = orient(&self.modularity.vector(index - 1), self.g.degree())?;
        Ok(self.check_vector(index, lambda, &u))
    }

    /// Same as [`check`](Self::check) for an arbitrary eigenpair `(λ, u)`
    /// of `M`; `u` is oriented first.
    pub fn check_vector(&self, index: usize, lambda: f64, u: &[f64]) -> DomainBoundCheck {
        let u = orient(u, self.g.degree()).unwrap_or_else(|_| u.to_vec());
        let report = NodalDomainReport::new(self.g, &u);
        let (ell, ell_prime) = eigen_counts(&self.modularity, lambda);
        let detect = 1e-6 * (1.0 + lambda.abs());
        let eigen_of_a = self
            .adjacency
            .values()
            .iter()
            .any(|&a| (a - lambda).abs() <= detect);
        let tightened = !eigen_of_a;
        let strong_bound = if tightened { ell } else { ell + 1 };
        let weak_bound = ell_prime + 1;
        let strong_counted = report.strong_count(Sign::Positive);
        let weak_counted = report.weak_count(Sign::Positive);
        let (holds, skipped) = if report.has_both_signs() {
            (strong_counted <= strong_bound && weak_counted <= weak_bound, None)
        } else {
            (true, Some("eigenvector has no entries of opposite signs".to_string()))
        };
        DomainBoundCheck {
            matrix: MatrixKind::Modularity,
            index,
            eigenvalue: lambda,
            ell,
            ell_prime,
            strong_counted,
            weak_counted,
            strong_bound,
            weak_bound,
            tightened,
            holds,
            skipped,
            report,
        }
    }
}

pub fn check_positive_bound(g: &Graph, index: usize) -> Result<DomainBoundCheck> {
    ModularityNodalCheck::new(g)?.check(index)
}

/// Precomputed Laplacian spectrum for checking its eigenvectors.
pub struct LaplacianNodalCheck<'g> {
    g: &'g Graph,
    laplacian: Spectrum,
}

impl<'g> LaplacianNodalCheck<'g> {
    pub fn new(g: &'g Graph) -> Result<Self> {
        g.require_connected()?;
        Ok(Self {
            g,
            laplacian: eig_sym(&laplacian(g), MatrixKind::Laplacian)?,
        })
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.laplacian
    }

    /// Bounds for the `index`-th smallest (1-based) eigenvector of `L`: at
    /// most `ℓ` strong and `ℓ′ + 1` weak domains, where `ℓ` counts eigenvalues
    /// `≤ λ` and `ℓ′` those `< λ`.
    pub fn check(&self, index: usize) -> Result<DomainBoundCheck> {
        let n = self.g.n();
        if index == 0 || index > n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        let lambda = self.laplacian.ascending_value(index);
        let u = self.laplacian.ascending_vector(index);
        Ok(self.check_vector(index, lambda, &u))
    }

    pub fn check_vector(&self, index: usize, lambda: f64, u: &[f64]) -> DomainBoundCheck {
        let report = NodalDomainReport::new(self.g, u);
        let (ell, ell_prime) = eigen_counts_below(&self.laplacian, lambda);
        let strong_counted = report.strong.len();
        let weak_counted = report.weak.len();
        DomainBoundCheck {
            matrix: MatrixKind::Laplacian,
            index,
            eigenvalue: lambda,
            ell,
            ell_prime,
            strong_counted,
            weak_counted,
            strong_bound: ell,
            weak_bound: ell_prime + 1,
            tightened: false,
            holds: strong_counted <= ell && weak_counted <= ell_prime + 1,
            skipped: None,
            report,
        }
    }
}

pub fn check_laplacian_bound(g: &Graph, index: usize) -> Result<DomainBoundCheck> {
    LaplacianNodalCheck::new(g)?.check(index)
}

/// Domain counts for a vector with `Au ≥ λu` componentwise.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralTheoremCheck {
    pub lambda: f64,
    pub ell: usize,
    pub ell_prime: usize,
    pub positive_strong: usize,
    pub positive_weak: usize,
    /// Largest `λu_i - (Au)_i`; nonpositive up to slack.
    pub max_violation: f64,
    /// The theorem needs entries of both signs; otherwise nothing is claimed.
    pub applicable: bool,
    pub holds: bool,
    pub report: NodalDomainReport,
}

/// At most `ℓ(A, λ)` positive strong and `ℓ′(A, λ)` positive weak domains.
pub fn check_general_theorem(g: &Graph, u: &[f64], lambda: f64) -> Result<GeneralTheoremCheck> {
    let spec = eig_sym(g.adjacency(), MatrixKind::Adjacency)?;
    check_general_theorem_with(g, &spec, u, lambda)
}

pub fn check_general_theorem_with(
    g: &Graph,
    adjacency_spectrum: &Spectrum,
    u: &[f64],
    lambda: f64,
) -> Result<GeneralTheoremCheck> {
    g.require_connected()?;
    if u.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: u.len(),
        });
    }
    let uv = DVector::from_column_slice(u);
    let au = g.adjacency() * &uv;
    let max_violation = (0..u.len())
        .map(|i| lambda * u[i] - au[i])
        .fold(f64::NEG_INFINITY, f64::max);
    let slack = tol::PRECONDITION_REL * tol::inf_norm(g.adjacency()).max(1.0) * tol::vec_inf_norm(u);
    if max_violation > slack {
        return Err(Error::Precondition(format!(
            "Au >= λu fails by {max_violation:e} (slack {slack:e})"
        )));
    }
    let report = NodalDomainReport::new(g, u);
    let (ell, ell_prime) = eigen_counts(adjacency_spectrum, lambda);
    let positive_strong = report.strong_count(Sign::Positive);
    let positive_weak = report.weak_count(Sign::Positive);
    let applicable = report.has_both_signs();
    let holds = !applicable || (positive_strong <= ell && positive_weak <= ell_prime);
    Ok(GeneralTheoremCheck {
        lambda,
        ell,
        ell_prime,
        positive_strong,
        positive_weak,
        max_violation,
        applicable,
        holds,
        report,
    })
}

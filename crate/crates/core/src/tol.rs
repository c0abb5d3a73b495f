//! Numerical tolerances shared across the crate.
//!
//! Every tolerance is relative to the scale of the quantity it guards, so the
//! checks are unit-free with respect to edge weights.

use nalgebra::DMatrix;

/// Relative slack for every inequality check: `1e-8 * (1 + |rhs|)`.
pub const BOUND_REL: f64 = 1e-8;

/// Entries with `|u_i| <= 1e-10 * ‖u‖∞` count as zero in nodal domain analysis.
pub const NODAL_ZERO_REL: f64 = 1e-10;

/// Zero band for counting positive/negative eigenvalues: `1e-8 * max(1, ‖X‖∞)`.
pub const SIGN_COUNT_REL: f64 = 1e-8;

/// Equality band for `ℓ`/`ℓ′` eigenvalue counts: `1e-8 * (1 + |λ|)`.
pub const EIGEN_COUNT_REL: f64 = 1e-8;

/// Eigenpair residual certificate: `‖Xv - λv‖₂ <= 1e-9 * ‖X‖₂`.
pub const RESIDUAL_REL: f64 = 1e-9;

/// Pairwise eigenvector orthogonality certificate.
pub const ORTHOGONALITY: f64 = 1e-9;

/// Input symmetry check for the eigensolver.
pub const SYMMETRY_REL: f64 = 1e-12;

/// Slack for the componentwise precondition `Au >= λu`: `1e-9 * ‖A‖∞ * ‖u‖∞`.
pub const PRECONDITION_REL: f64 = 1e-9;

/// Interlacing margins must be at least `-1e-8 * max(1, ‖A‖∞)`.
pub const INTERLACING_REL: f64 = 1e-8;

pub fn bound_tolerance(rhs: f64) -> f64 {
    BOUND_REL * (1.0 + rhs.abs())
}

pub fn eigen_count_tolerance(lambda: f64) -> f64 {
    EIGEN_COUNT_REL * (1.0 + lambda.abs())
}

/// Maximum absolute row sum.
pub fn inf_norm(x: &DMatrix<f64>) -> f64 {
    x.row_iter()
        .map(|r| r.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn sign_count_tolerance(x: &DMatrix<f64>) -> f64 {
    SIGN_COUNT_REL * inf_norm(x).max(1.0)
}

pub fn vec_inf_norm(u: &[f64]) -> f64 {
    u.iter().map(|v| v.abs()).fold(0.0, f64::max)
}

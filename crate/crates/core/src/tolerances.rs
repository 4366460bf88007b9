//! Numerical tolerances shared across the crate.
//!
//! Every default threshold lives here so that the CLI overrides and the
//! acceptance suite refer to the same numbers.

/// Heisenberg validity slack: a covariance is accepted when every
/// symplectic eigenvalue is at least `1/2 - TOL_VALID`.
pub const TOL_VALID: f64 = 1e-9;

/// Relative tolerance for matching the `±iν` pairs of a symplectic spectrum.
pub const PAIRING_REL_TOL: f64 = 1e-8;

/// Relative symmetry tolerance for covariance matrices, against the
/// Frobenius norm.
pub const SYMMETRY_REL_TOL: f64 = 1e-12;

/// `S Δ Sᵀ = Δ` must hold within this multiple of `‖S‖²_F`.
pub const SYMPLECTIC_REL_TOL: f64 = 1e-10;

/// Largest tolerated `I(A:B|M)` before two inputs count as conditionally
/// dependent.
pub const TOL_CI: f64 = 1e-8;

/// Absolute tolerance on inequality margins.
pub const TOL_MARGIN: f64 = 1e-9;

/// Base step of the one-sided Richardson estimate of the Fisher information.
pub const RICHARDSON_STEP: f64 = 1e-4;

/// Points on the uniform λ grid used by the Legendre-duality checks
/// (the closed-form optimum is always added on top).
pub const LAMBDA_GRID_POINTS: usize = 1001;

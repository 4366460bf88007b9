//! # gauss-epi
//!
//! Covariance-matrix numerics for bosonic Gaussian quantum systems.
//!
//! The crate evaluates von Neumann entropies, conditional entropies and the
//! conditional Fisher information of Gaussian states, and turns the
//! entropy-power and Stam inequalities for the beam-splitter and the
//! two-mode squeezer into executable checks.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`symplectic`] | symplectic form, covariance matrices, symplectic spectra |
//! | [`states`] | [`GaussianState`], state families, entropy and energy functionals |
//! | [`channels`] | beam-splitter / squeezer, heat semigroup, displacements, dilated channels |
//! | [`inequalities`] | Fisher information, Stam and EPI checkers, scaling, sharpness, capacity |
//! | [`campaign`] | seeded, sharded property campaigns |
//!
//! Quadratures are always interleaved, `(q1, p1, q2, p2, ...)`, and the vacuum
//! has covariance `I/2`. Entropies are in nats.
//!
//! ```
//! use gauss_epi::states::{thermal, entropy, g};
//!
//! let state = thermal(1.0, 1).unwrap();
//! let s = entropy(&state, &["A"]).unwrap();
//! assert!((s - g(0.5).unwrap()).abs() < 1e-12);
//! ```

#![forbid(unsafe_code)]
// `!(x >= 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod campaign;
pub mod channels;
mod error;
pub mod inequalities;
pub mod states;
pub mod symplectic;
pub mod tolerances;

pub use error::{Error, Result};
pub use states::{GaussianState, Partition, Subsystem};
pub use symplectic::{CovarianceMatrix, SymplecticMatrix};

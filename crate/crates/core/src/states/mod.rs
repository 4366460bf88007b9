//! Gaussian states with labelled subsystems.
//!
//! A [`GaussianState`] is a mean vector, a covariance matrix and a
//! [`Partition`] that names groups of modes (`"A"`, `"B"`, `"M"`, `"A'"`, ...).
//! Every constructor enforces the uncertainty principle with the default
//! tolerance [`TOL_VALID`](crate::tolerances::TOL_VALID); invalid
//! covariances are rejected, never projected.

mod entropy;
mod families;
mod io;
pub(crate) mod random;

pub use entropy::{
    bosonic_entropy_derivative, conditional_entropy, conditional_mutual_information, energy,
    entropy, entropy_of_spectrum, g,
};
pub use families::{
    purify_thermal, sharp_sequence, squeezed_pair_covariance, thermal, two_mode_squeezed, vacuum,
};
pub use io::StateFile;
pub use random::{
    random_conditionally_independent, random_orthogonal_symplectic, random_state, random_state_in,
    random_symplectic, CiBlocks,
};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::symplectic::{
    direct_sum, is_valid_covariance, quadratures_of, restrict, restrict_mean, CovarianceMatrix,
};
use crate::tolerances::TOL_VALID;

/// One named group of modes.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Subsystem {
    pub label: String,
    pub modes: Vec<usize>,
}

impl Subsystem {
    pub fn new(label: impl Into<String>, modes: Vec<usize>) -> Self {
        Self {
            label: label.into(),
            modes,
        }
    }
}

/// Ordered, disjoint, covering assignment of labels to modes.
///
/// A label may own zero modes; this is how an absent memory is spelled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    parts: Vec<Subsystem>,
    total: usize,
}

impl Partition {
    pub fn new(parts: Vec<Subsystem>, total_modes: usize) -> Result<Self> {
        let mut owner: Vec<Option<usize>> = vec![None; total_modes];
        for (i, part) in parts.iter().enumerate() {
            if part.label.is_empty() {
                return Err(invalid("empty subsystem label"));
            }
            if parts[..i].iter().any(|p| p.label == part.label) {
                return Err(invalid(format!(
                    "duplicate subsystem label `{}`",
                    part.label
                )));
            }
            for &m in &part.modes {
                if m >= total_modes {
                    return Err(invalid(format!(
                        "mode {m} of `{}` out of range for {total_modes} modes",
                        part.label
                    )));
                }
                if let Some(j) = owner[m] {
                    return Err(invalid(format!(
                        "mode {m} claimed by both `{}` and `{}`",
                        parts[j].label, part.label
                    )));
                }
                owner[m] = Some(i);
            }
        }
        if let Some(m) = owner.iter().position(Option::is_none) {
            return Err(invalid(format!("mode {m} belongs to no subsystem")));
        }
        Ok(Self {
            parts,
            total: total_modes,
        })
    }

    /// Consecutive blocks: `[("A", 1), ("B", 2)]` gives `A = {0}`, `B = {1, 2}`.
    pub fn contiguous(blocks: &[(&str, usize)]) -> Result<Self> {
        let mut next = 0;
        let parts = blocks
            .iter()
            .map(|&(label, n)| {
                let s = Subsystem::new(label, (next..next + n).collect());
                next += n;
                s
            })
            .collect();
        Self::new(parts, next)
    }

    pub fn single(label: &str, modes: usize) -> Self {
        Self::contiguous(&[(label, modes)]).expect("single block is always a valid partition")
    }

    pub fn total_modes(&self) -> usize {
        self.total
    }

    pub fn subsystems(&self) -> &[Subsystem] {
        &self.parts
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.parts.iter().map(|p| p.label.as_str())
    }

    pub fn get(&self, label: &str) -> Option<&Subsystem> {
        self.parts.iter().find(|p| p.label == label)
    }

    pub fn contains(&self, label: &str) -> bool {
        self.get(label).is_some()
    }

    /// Modes of the given labels, concatenated in the order the labels are
    /// listed.
    pub fn modes_of<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for (i, l) in labels.iter().enumerate() {
            let l = l.as_ref();
            if labels[..i].iter().any(|p| p.as_ref() == l) {
                return Err(invalid(format!("label `{l}` listed twice")));
            }
            let part = self
                .get(l)
                .ok_or_else(|| Error::UnknownLabel(l.to_string()))?;
            out.extend_from_slice(&part.modes);
        }
        Ok(out)
    }

    pub fn mode_count<S: AsRef<str>>(&self, labels: &[S]) -> Result<usize> {
        Ok(self.modes_of(labels)?.len())
    }
}

/// A Gaussian state: first moments, covariance and labelled modes.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianState {
    mean: DVector<f64>,
    cov: CovarianceMatrix,
    partition: Partition,
}

impl GaussianState {
    /// Validates with the default tolerance `1e-9`.
    pub fn new(mean: DVector<f64>, cov: CovarianceMatrix, partition: Partition) -> Result<Self> {
        Self::with_tolerance(mean, cov, partition, TOL_VALID)
    }

    pub fn with_tolerance(
        mean: DVector<f64>,
        cov: CovarianceMatrix,
        partition: Partition,
        tol: f64,
    ) -> Result<Self> {
        if mean.len() != cov.dim() {
            return Err(Error::DimensionMismatch {
                expected: cov.dim(),
                found: mean.len(),
            });
        }
        if partition.total_modes() != cov.modes() {
            return Err(Error::DimensionMismatch {
                expected: cov.modes(),
                found: partition.total_modes(),
            });
        }
        if mean.iter().any(|x| !x.is_finite()) {
            return Err(invalid("mean vector has non-finite entries"));
        }
        let v = is_valid_covariance(&cov, tol);
        if !v.valid {
            let min = if v.min_eigenvalue < 0.0 {
                v.min_eigenvalue.min(v.min_symplectic_eigenvalue)
            } else {
                v.min_symplectic_eigenvalue
            };
            return Err(Error::InvalidCovariance {
                min_symplectic_eigenvalue: min,
            });
        }
        Ok(Self {
            mean,
            cov,
            partition,
        })
    }

    /// Zero-mean state.
    pub fn centered(cov: CovarianceMatrix, partition: Partition) -> Result<Self> {
        Self::new(DVector::zeros(cov.dim()), cov, partition)
    }

    pub fn modes(&self) -> usize {
        self.cov.modes()
    }

    pub fn mean(&self) -> &DVector<f64> {
        &self.mean
    }

    pub fn cov(&self) -> &CovarianceMatrix {
        &self.cov
    }

    pub fn partition(&self) -> &Partition {
        &self.partition
    }

    /// Quadrature indices of the listed labels.
    pub fn quadratures<S: AsRef<str>>(&self, labels: &[S]) -> Result<Vec<usize>> {
        Ok(quadratures_of(&self.partition.modes_of(labels)?))
    }

    /// Covariance of the marginal on `labels`, modes in label order.
    pub fn subsystem_cov<S: AsRef<str>>(&self, labels: &[S]) -> Result<CovarianceMatrix> {
        restrict(&self.cov, &self.quadratures(labels)?)
    }

    pub fn subsystem_mean<S: AsRef<str>>(&self, labels: &[S]) -> Result<DVector<f64>> {
        restrict_mean(&self.mean, &self.quadratures(labels)?)
    }

    /// Partial trace onto `labels`. The result lays the kept subsystems out
    /// contiguously in the order given.
    pub fn marginal<S: AsRef<str>>(&self, labels: &[S]) -> Result<GaussianState> {
        let quads = self.quadratures(labels)?;
        let mut next = 0;
        let mut parts = Vec::with_capacity(labels.len());
        for l in labels {
            let n = self.partition.get(l.as_ref()).map_or(0, |p| p.modes.len());
            parts.push(Subsystem::new(l.as_ref(), (next..next + n).collect()));
            next += n;
        }
        Ok(GaussianState {
            mean: restrict_mean(&self.mean, &quads)?,
            cov: restrict(&self.cov, &quads)?,
            partition: Partition::new(parts, next)?,
        })
    }

    /// Same state with modes laid out contiguously in partition order.
    pub fn canonical(&self) -> GaussianState {
        let labels: Vec<String> = self.partition.labels().map(str::to_string).collect();
        self.marginal(&labels).expect("own labels are always valid")
    }

    pub fn relabel(&self, from: &str, to: &str) -> Result<GaussianState> {
        if !self.partition.contains(from) {
            return Err(Error::UnknownLabel(from.to_string()));
        }
        let parts = self
            .partition
            .parts
            .iter()
            .map(|p| {
                let label = if p.label == from {
                    to
                } else {
                    p.label.as_str()
                };
                Subsystem::new(label, p.modes.clone())
            })
            .collect();
        Ok(GaussianState {
            mean: self.mean.clone(),
            cov: self.cov.clone(),
            partition: Partition::new(parts, self.modes())?,
        })
    }

    /// Product state `self ⊗ other`; labels must not collide.
    pub fn tensor(&self, other: &GaussianState) -> Result<GaussianState> {
        let offset = self.modes();
        let mut parts = self.partition.parts.clone();
        for p in &other.partition.parts {
            parts.push(Subsystem::new(
                p.label.clone(),
                p.modes.iter().map(|m| m + offset).collect(),
            ));
        }
        let total = offset + other.modes();
        let mut mean = DVector::zeros(2 * total);
        mean.rows_mut(0, 2 * offset).copy_from(&self.mean);
        mean.rows_mut(2 * offset, 2 * other.modes())
            .copy_from(&other.mean);
        Ok(GaussianState {
            mean,
            cov: direct_sum(&self.cov, &other.cov),
            partition: Partition::new(parts, total)?,
        })
    }

    /// Replace the partition (same mode count).
    pub fn with_partition(&self, partition: Partition) -> Result<GaussianState> {
        if partition.total_modes() != self.modes() {
            return Err(Error::DimensionMismatch {
                expected: self.modes(),
                found: partition.total_modes(),
            });
        }
        Ok(GaussianState {
            mean: self.mean.clone(),
            cov: self.cov.clone(),
            partition,
        })
    }

    /// Rebuild from parts that came out of a validity-preserving operation,
    /// re-checking the uncertainty principle.
    pub(crate) fn rebuild(
        mean: DVector<f64>,
        cov: DMatrix<f64>,
        partition: Partition,
    ) -> Result<Self> {
        Self::new(mean, CovarianceMatrix::from_trusted(cov), partition)
    }
}

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::symplectic::CovarianceMatrix;

use super::{GaussianState, Partition, Subsystem};

/// On-disk form of a [`GaussianState`]; `cov` is a list of rows.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateFile {
    pub modes: usize,
    pub mean: Vec<f64>,
    pub cov: Vec<Vec<f64>>,
    pub partition: Vec<Subsystem>,
}

impl StateFile {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("state file is always serializable")
    }

    pub fn from_state(state: &GaussianState) -> Self {
        let m = state.cov().matrix();
        Self {
            modes: state.modes(),
            mean: state.mean().iter().copied().collect(),
            cov: (0..m.nrows())
                .map(|i| m.row(i).iter().copied().collect())
                .collect(),
            partition: state.partition().subsystems().to_vec(),
        }
    }

    /// Builds and validates the state with tolerance `tol`.
    pub fn to_state(&self, tol: f64) -> Result<GaussianState> {
        let dim = 2 * self.modes;
        if self.mean.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.mean.len(),
            });
        }
        if self.cov.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: self.cov.len(),
            });
        }
        if let Some(row) = self.cov.iter().find(|r| r.len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: row.len(),
            });
        }
        if self.modes == 0 {
            return Err(invalid("state file declares zero modes"));
        }
        let cov = DMatrix::from_row_iterator(dim, dim, self.cov.iter().flatten().copied());
        let partition = Partition::new(self.partition.clone(), self.modes)?;
        GaussianState::with_tolerance(
            DVector::from_vec(self.mean.clone()),
            CovarianceMatrix::new(cov)?,
            partition,
            tol,
        )
    }
}

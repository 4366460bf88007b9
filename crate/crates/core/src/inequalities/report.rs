use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// Parameters an inequality was evaluated at.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct ReportParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
}

/// One evaluation of an inequality `lhs ≥ rhs` (or `lhs ≤ rhs`); `margin` is
/// always oriented so that the inequality holds iff `margin ≥ 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub check: String,
    pub params: ReportParams,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Input quantities, e.g. `S_A`, `J_B`.
    #[serde(default)]
    pub witnesses: BTreeMap<String, f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl InequalityReport {
    pub(crate) fn new(
        check: &str,
        eta: Option<f64>,
        lambda: Option<f64>,
        lhs: f64,
        rhs: f64,
        margin: f64,
    ) -> Self {
        Self {
            check: check.to_string(),
            params: ReportParams { eta, lambda },
            lhs,
            rhs,
            margin,
            witnesses: BTreeMap::new(),
            seed: None,
        }
    }

    pub(crate) fn witness(mut self, name: &str, value: f64) -> Self {
        self.witnesses.insert(name.to_string(), value);
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// `margin ≥ -tol`.
    pub fn holds(&self, tol: f64) -> bool {
        self.margin >= -tol
    }
}

/// `hi - lo` with `∞ - ∞ = 0`.
pub(crate) fn gap(hi: f64, lo: f64) -> f64 {
    if hi.is_infinite() && lo.is_infinite() && hi.signum() == lo.signum() {
        0.0
    } else {
        hi - lo
    }
}

//! Convergence of the conditional entropies along the optimal sequence.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::channels::{apply_beamsplitter, Eta};
use crate::error::{invalid, Result};
use crate::states::{conditional_entropy, sharp_sequence};

/// Limits of `S(A|A'B')`, `S(B|A'B')` and `S(C|A'B')` as `k → ∞`:
/// `1 + ln a`, `1 + ln b`, `1 + ln(η a + |1-η| b)`.
pub fn sharp_limits(a: f64, b: f64, eta: Eta) -> (f64, f64, f64) {
    (
        1.0 + a.ln(),
        1.0 + b.ln(),
        1.0 + (eta.value() * a + eta.complement() * b).ln(),
    )
}

/// One row of [`sharp_convergence`]. Skipped grid points carry a note and
/// `NaN` values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpRow {
    pub k: u64,
    pub s_a: f64,
    pub s_b: f64,
    pub s_c: f64,
    pub residual_a: f64,
    pub residual_b: f64,
    pub residual_c: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl SharpRow {
    /// Largest absolute residual of the three entropies.
    pub fn max_residual(&self) -> f64 {
        self.residual_a
            .abs()
            .max(self.residual_b.abs())
            .max(self.residual_c.abs())
    }
}

/// Mixes `γ_AA'^{(k)} ⊗ γ_BB'^{(k)}` through `ℬ_η` and reports the three
/// conditional entropies given `A'B'` against their limits.
pub fn sharp_convergence(a: f64, b: f64, eta: Eta, k_grid: &[u64]) -> Result<Vec<SharpRow>> {
    if !(a > 0.0 && b > 0.0) {
        return Err(invalid(format!(
            "a and b must be positive, got {a} and {b}"
        )));
    }
    let (la, lb, lc) = sharp_limits(a, b, eta);
    let memory = ["A'", "B'"];
    k_grid
        .iter()
        .map(|&k| {
            let (aa, bb) = match sharp_sequence(a, b, k) {
                Ok(pair) => pair,
                Err(e) => {
                    return Ok(SharpRow {
                        k,
                        s_a: f64::NAN,
                        s_b: f64::NAN,
                        s_c: f64::NAN,
                        residual_a: f64::NAN,
                        residual_b: f64::NAN,
                        residual_c: f64::NAN,
                        note: Some(format!("skipped: {e}")),
                    })
                }
            };
            let joint = aa.tensor(&bb)?;
            let out = apply_beamsplitter(&joint, eta, false)?;
            let s_a = conditional_entropy(&joint, &["A"], &memory)?;
            let s_b = conditional_entropy(&joint, &["B"], &memory)?;
            let s_c = conditional_entropy(&out, &["C"], &memory)?;
            Ok(SharpRow {
                k,
                s_a,
                s_b,
                s_c,
                residual_a: s_a - la,
                residual_b: s_b - lb,
                residual_c: s_c - lc,
                note: None,
            })
        })
        .collect()
}

/// Closed-form covariance of `C A' B'` on the optimal sequence:
///
/// ```text
/// k · [ k(η/a + |1-η|/b) I     √η √(k²/a²-1) Z     √|1-η| √(k²/b²-1) Z' ]
///     [ √η √(k²/a²-1) Z        (k/a) I             0                    ]
///     [ √|1-η| √(k²/b²-1) Z'   0                   (k/b) I              ]
/// ```
///
/// with `Z = diag(1, -1)` and `Z' = Z` for `η ≤ 1`, `Z' = I` for `η > 1`.
pub fn sharp_output_covariance(a: f64, b: f64, eta: Eta, k: u64) -> DMatrix<f64> {
    let kf = k as f64;
    let (xa, xb) = (kf / a, kf / b);
    let (ca, cb) = (
        ((xa - 1.0) * (xa + 1.0)).sqrt(),
        ((xb - 1.0) * (xb + 1.0)).sqrt(),
    );
    let (se, sc) = (eta.value().sqrt(), eta.complement().sqrt());
    let mut m = DMatrix::zeros(6, 6);
    let diag_c = kf * (eta.value() * xa + eta.complement() * xb);
    m[(0, 0)] = diag_c;
    m[(1, 1)] = diag_c;
    m[(2, 2)] = kf * xa;
    m[(3, 3)] = kf * xa;
    m[(4, 4)] = kf * xb;
    m[(5, 5)] = kf * xb;
    let ca_k = kf * se * ca;
    let cb_k = kf * sc * cb;
    let p_sign = if eta.value() > 1.0 { 1.0 } else { -1.0 };
    for (i, j, v) in [
        (0, 2, ca_k),
        (1, 3, -ca_k),
        (0, 4, cb_k),
        (1, 5, p_sign * cb_k),
    ] {
        m[(i, j)] = v;
        m[(j, i)] = v;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::g;
    use approx::assert_relative_eq;

    #[test]
    fn limits() {
        let (la, lb, lc) = sharp_limits(2.0, 3.0, Eta::new(0.7).unwrap());
        assert_relative_eq!(la, 1.0 + 2f64.ln(), epsilon = 1e-15);
        assert_relative_eq!(lb, 1.0 + 3f64.ln(), epsilon = 1e-15);
        assert_relative_eq!(lc, 1.832_909, epsilon = 1e-6);
        let (_, _, lc) = sharp_limits(1.0, 1.0, Eta::new(1.5).unwrap());
        assert_relative_eq!(lc, 1.0 + 2f64.ln(), epsilon = 1e-15);
    }

    #[test]
    fn rows_match_closed_form_entropies() {
        let rows = sharp_convergence(2.0, 3.0, Eta::new(0.7).unwrap(), &[1, 10]).unwrap();
        assert!(rows[0].note.is_some());
        assert!(rows[0].s_a.is_nan());
        assert_relative_eq!(
            rows[1].s_a,
            2.0 * g(9.5).unwrap() - g(49.5).unwrap(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn output_covariance_matches_mixing() {
        for &e in &[0.3, 0.7, 1.5, 2.0] {
            let eta = Eta::new(e).unwrap();
            let (aa, bb) = sharp_sequence(2.0, 3.0, 20).unwrap();
            let out = apply_beamsplitter(&aa.tensor(&bb).unwrap(), eta, false).unwrap();
            let got = out.subsystem_cov(&["C", "A'", "B'"]).unwrap();
            let expect = sharp_output_covariance(2.0, 3.0, eta, 20);
            assert!(
                (got.matrix() - &expect).abs().max() < 1e-9 * expect.abs().max(),
                "η = {e}"
            );
        }
    }
}

//! Large-time behaviour of the conditional entropy under the heat semigroup.

use crate::channels::{heat_semigroup, GaussianChannel};
use crate::error::{invalid, Result};
use crate::states::{conditional_entropy, purify_thermal, GaussianState};

/// `S(A|M)` after `𝒩_A(t)`, minus `n ln t + n` with `n` the modes of `A`.
pub fn scaling_residual<S: AsRef<str>>(
    state: &GaussianState,
    a: &[S],
    m: &[S],
    t: f64,
) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(invalid(format!("scaling residual needs t > 0, got {t}")));
    }
    let n = state.partition().mode_count(a)? as f64;
    let s = conditional_entropy(&heat_semigroup(state, a, t)?, a, m)?;
    Ok(s - n * t.ln() - n)
}

/// `(ν, S(B|A'))` where `B` is the channel output on the `A` half of the
/// `m`-mode purification of `ν I`.
pub fn lower_bound_scan(
    channel: &dyn GaussianChannel,
    m: usize,
    nu_grid: &[f64],
) -> Result<Vec<(f64, f64)>> {
    if nu_grid.is_empty() {
        return Err(invalid("ν grid is empty"));
    }
    if let Some(w) = nu_grid.windows(2).find(|w| !(w[1] > w[0])) {
        return Err(invalid(format!(
            "ν grid must be strictly increasing ({} then {})",
            w[0], w[1]
        )));
    }
    nu_grid
        .iter()
        .map(|&nu| {
            let omega = purify_thermal(nu, m)?;
            let out = channel.apply(&omega, "A", "B")?;
            Ok((nu, conditional_entropy(&out, &["B"], &["A'"])?))
        })
        .collect()
}

/// `true` when the values never increase by more than `tol`.
pub fn is_non_increasing(points: &[(f64, f64)], tol: f64) -> bool {
    points.windows(2).all(|w| w[1].1 <= w[0].1 + tol)
}

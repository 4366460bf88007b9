//! Entropy increase under the heat semigroup and the conditional Fisher
//! information.

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::channels::heat_semigroup;
use crate::error::{invalid, Error, Result};
use crate::states::{bosonic_entropy_derivative, conditional_entropy, GaussianState};
use crate::symplectic::omega;
use crate::tolerances::{RICHARDSON_STEP, TOL_VALID};

/// How a [`FisherValue`] was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FisherMethod {
    /// First-order perturbation of the symplectic spectrum.
    AnalyticDerivative,
    /// Richardson extrapolation of `Δ(t)/t` at `t = h, h/2, h/4`.
    RichardsonFd,
}

/// `J(A|M)` in nats per unit time. `+∞` is a legitimate value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FisherValue {
    pub value: f64,
    pub method: FisherMethod,
    /// Base step of the finite-difference estimate.
    pub step: Option<f64>,
}

impl FisherValue {
    pub fn is_infinite(&self) -> bool {
        self.value.is_infinite()
    }

    /// `1/J`, with `1/∞ = 0`.
    pub fn reciprocal(&self) -> f64 {
        if self.value.is_infinite() {
            0.0
        } else {
            1.0 / self.value
        }
    }
}

/// `Δ_{A|M}(t) = S(A|M)` after `𝒩_A(t)` minus `S(A|M)` before.
pub fn integral_fisher<S: AsRef<str>>(
    state: &GaussianState,
    a: &[S],
    m: &[S],
    t: f64,
) -> Result<f64> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid(format!(
            "time must be finite and nonnegative, got {t}"
        )));
    }
    if t == 0.0 {
        conditional_entropy(state, a, m)?;
        return Ok(0.0);
    }
    let before = conditional_entropy(state, a, m)?;
    let after = conditional_entropy(&heat_semigroup(state, a, t)?, a, m)?;
    Ok(after - before)
}

/// `J(A|M) = d/dt S(A|M)` at `t = 0` along `𝒩_A(t)`.
pub fn fisher_conditional<S: AsRef<str>>(
    state: &GaussianState,
    a: &[S],
    m: &[S],
    method: FisherMethod,
) -> Result<FisherValue> {
    match method {
        FisherMethod::AnalyticDerivative => Ok(FisherValue {
            value: analytic_fisher(state, a, m)?,
            method,
            step: None,
        }),
        FisherMethod::RichardsonFd => Ok(FisherValue {
            value: richardson_fisher(state, a, m, RICHARDSON_STEP)?,
            method,
            step: Some(RICHARDSON_STEP),
        }),
    }
}

/// Only `S(AM)` moves under `𝒩_A`. With `σ_AM = L Lᵀ`,
/// `Y = Lᵀ Δᵀ σ Δ L` has eigenvalues `ν_k²` (each twice), and for the
/// spectral function `F(σ) = ½ Σ_j g(√y_j - ½)`,
///
/// ```text
/// dF/dt = Σ_j ½ g'(√y_j - ½) / (2√y_j) · ( v_jᵀ Lᵀ Π L v_j + y_j v_jᵀ L⁻¹ Π L⁻ᵀ v_j )
/// ```
///
/// where `Π` projects on the quadratures of `A`. An eigenvalue at `ν = ½`
/// with nonzero weight makes `J` infinite.
fn analytic_fisher<S: AsRef<str>>(state: &GaussianState, a: &[S], m: &[S]) -> Result<f64> {
    let labels: Vec<&str> = a.iter().chain(m).map(AsRef::as_ref).collect();
    if a.iter().any(|x| m.iter().any(|y| x.as_ref() == y.as_ref())) {
        return Err(invalid("A and M must be disjoint"));
    }
    let sigma = state.subsystem_cov(&labels)?;
    let dim_a = 2 * state.partition().mode_count(a)?;
    if dim_a == 0 {
        return Ok(0.0);
    }
    let n = sigma.modes();
    let s = sigma.matrix();
    let chol = s.clone().cholesky().ok_or(Error::NumericalDegeneracy {
        what: "Cholesky factor of σ_AM",
        residual: s.clone().symmetric_eigenvalues().min(),
    })?;
    let l = chol.l();
    let w = omega(n);
    let k = l.transpose() * &w * &l;
    let y = k.transpose() * &k;
    let y = (&y + y.transpose()) * 0.5;
    let SymmetricEigen {
        eigenvalues,
        eigenvectors,
    } = y.symmetric_eigen();

    let l_inv = l
        .clone()
        .solve_lower_triangular(&DMatrix::identity(2 * n, 2 * n))
        .ok_or(Error::NumericalDegeneracy {
            what: "inverse Cholesky factor of σ_AM",
            residual: 0.0,
        })?;
    // LᵀΠL and L⁻¹ΠL⁻ᵀ only involve the first `dim_a` rows of L and columns of L⁻¹.
    let l_top = l.rows(0, dim_a);
    let p_fwd = l_top.transpose() * l_top;
    let li_left = l_inv.columns(0, dim_a);
    let p_inv = li_left * li_left.transpose();

    let mut weights = Vec::with_capacity(2 * n);
    for j in 0..2 * n {
        let v = eigenvectors.column(j);
        let yj = eigenvalues[j].max(0.0);
        let weight =
            (v.transpose() * &p_fwd * v)[(0, 0)] + yj * (v.transpose() * &p_inv * v)[(0, 0)];
        weights.push((yj, weight));
    }
    let total: f64 = weights.iter().map(|&(_, wt)| wt.abs()).sum();
    let mut j_value = 0.0;
    for (yj, weight) in weights {
        let nu = yj.sqrt();
        let x = nu - 0.5;
        if x <= TOL_VALID {
            if weight > 1e-12 * total {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        j_value += 0.5 * bosonic_entropy_derivative(x) / (2.0 * nu) * weight;
    }
    Ok(j_value)
}

/// Richardson estimate from `q(t) = Δ(t)/t` at `h, h/2, h/4`.
///
/// Two successive differences of `q` that stay positive and do not shrink
/// by at least a quarter mean `q` is still climbing like `ln(1/t)`; this is
/// reported as `+∞`.
pub(crate) fn richardson_fisher<S: AsRef<str>>(
    state: &GaussianState,
    a: &[S],
    m: &[S],
    h: f64,
) -> Result<f64> {
    let base = conditional_entropy(state, a, m)?;
    let q = |t: f64| -> Result<f64> {
        let after = conditional_entropy(&heat_semigroup(state, a, t)?, a, m)?;
        Ok((after - base) / t)
    };
    let (q1, q2, q4) = (q(h)?, q(h / 2.0)?, q(h / 4.0)?);
    let (d1, d2) = (q2 - q1, q4 - q2);
    if d2 > 0.75 * d1 && d2 > 1e-6 {
        return Ok(f64::INFINITY);
    }
    let r1 = 2.0 * q2 - q1;
    let r1_half = 2.0 * q4 - q2;
    Ok((4.0 * r1_half - r1) / 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{g, random_state_in, thermal, two_mode_squeezed, vacuum, Partition};
    use approx::assert_relative_eq;

    const NONE: [&str; 0] = [];

    #[test]
    fn integral_fisher_basics() {
        let v = vacuum(1).unwrap();
        assert_eq!(integral_fisher(&v, &["A"], &NONE, 0.0).unwrap(), 0.0);
        assert_relative_eq!(
            integral_fisher(&v, &["A"], &NONE, 0.7).unwrap(),
            g(0.7).unwrap(),
            epsilon = 1e-12
        );
        let s = two_mode_squeezed(1.0).unwrap();
        assert_relative_eq!(
            integral_fisher(&s, &["A"], &["A'"], 1.0).unwrap(),
            2.114_496_749_750_765,
            epsilon = 1e-12
        );
        assert!(integral_fisher(&v, &["A"], &NONE, -1.0).is_err());
    }

    #[test]
    fn thermal_fisher_both_methods() {
        for &nu in &[0.75, 1.0, 3.0] {
            let t = thermal(nu, 2).unwrap();
            let expect = 2.0 * ((nu + 0.5) / (nu - 0.5)).ln();
            for method in [FisherMethod::AnalyticDerivative, FisherMethod::RichardsonFd] {
                let j = fisher_conditional(&t, &["A"], &NONE, method).unwrap();
                assert_relative_eq!(j.value, expect, max_relative = 1e-7);
            }
        }
        let j = fisher_conditional(
            &thermal(1.0, 1).unwrap(),
            &["A"],
            &NONE,
            FisherMethod::AnalyticDerivative,
        )
        .unwrap();
        assert_relative_eq!(j.value, 3f64.ln(), epsilon = 1e-12);
    }

    #[test]
    fn pure_marginals_diverge() {
        let v = vacuum(1).unwrap();
        for method in [FisherMethod::AnalyticDerivative, FisherMethod::RichardsonFd] {
            assert!(fisher_conditional(&v, &["A"], &NONE, method)
                .unwrap()
                .is_infinite());
            let s = two_mode_squeezed(2.0).unwrap();
            assert!(fisher_conditional(&s, &["A"], &["A'"], method)
                .unwrap()
                .is_infinite());
        }
    }

    #[test]
    fn conditioning_on_a_product_memory_changes_nothing() {
        let a = thermal(1.3, 1).unwrap();
        let m = thermal(2.0, 1).unwrap().relabel("A", "M").unwrap();
        let am = a.tensor(&m).unwrap();
        let j = fisher_conditional(&am, &["A"], &["M"], FisherMethod::AnalyticDerivative).unwrap();
        assert_relative_eq!(j.value, (1.8f64 / 0.8).ln(), epsilon = 1e-12);
    }

    #[test]
    fn methods_agree_on_random_mixed_states() {
        let p = Partition::contiguous(&[("A", 1), ("M", 1)]).unwrap();
        for seed in 0..10 {
            let s = random_state_in(seed, 2, p.clone(), 1.0, 3.0).unwrap();
            let ja =
                fisher_conditional(&s, &["A"], &["M"], FisherMethod::AnalyticDerivative).unwrap();
            let jr = fisher_conditional(&s, &["A"], &["M"], FisherMethod::RichardsonFd).unwrap();
            assert_relative_eq!(ja.value, jr.value, max_relative = 1e-6);
        }
    }
}

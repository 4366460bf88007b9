//! Entropy and energy functionals.

use crate::error::{invalid, Result};
use crate::symplectic::symplectic_eigenvalues;

use super::GaussianState;

/// Bosonic entropy function `g(x) = (x+1) ln(x+1) - x ln x`, in nats.
///
/// `g(x)` is the entropy of a one-mode thermal state with mean photon
/// number `x`.
pub fn g(x: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(invalid(format!("g(x) needs x ≥ 0, got {x}")));
    }
    Ok(g_unchecked(x))
}

pub(crate) fn g_unchecked(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if x < 1e-12 {
        (x * (1.0 - x.ln())).max(0.0)
    } else if x < 1.0 {
        (x + 1.0) * x.ln_1p() - x * x.ln()
    } else {
        // avoids the cancellation of two O(x ln x) terms
        x.ln_1p() + x * (1.0 / x).ln_1p()
    }
}

/// `g'(x) = ln((x+1)/x)`; `+∞` at `x = 0`.
pub fn bosonic_entropy_derivative(x: f64) -> f64 {
    if x <= 0.0 {
        f64::INFINITY
    } else {
        (1.0 / x).ln_1p()
    }
}

/// `Σ g(ν_k - 1/2)`, with `ν_k - 1/2` clamped at zero. Callers pass spectra of
/// validated states, so the clamp only absorbs rounding.
pub fn entropy_of_spectrum(nu: &[f64]) -> f64 {
    nu.iter().map(|&v| g_unchecked((v - 0.5).max(0.0))).sum()
}

/// von Neumann entropy of the marginal on `labels`.
pub fn entropy<S: AsRef<str>>(state: &GaussianState, labels: &[S]) -> Result<f64> {
    let cov = state.subsystem_cov(labels)?;
    Ok(entropy_of_spectrum(&symplectic_eigenvalues(&cov)?))
}

fn check_disjoint<S: AsRef<str>>(x: &[S], y: &[S], what: &str) -> Result<()> {
    if let Some(l) = x
        .iter()
        .find(|l| y.iter().any(|m| m.as_ref() == l.as_ref()))
    {
        return Err(invalid(format!(
            "label `{}` appears in both {what}",
            l.as_ref()
        )));
    }
    Ok(())
}

/// `S(X|M) = S(XM) - S(M)`. An empty `m` gives `S(X)`.
pub fn conditional_entropy<S: AsRef<str>>(state: &GaussianState, x: &[S], m: &[S]) -> Result<f64> {
    check_disjoint(x, m, "the conditioned and the conditioning systems")?;
    let joint: Vec<&str> = x.iter().chain(m).map(AsRef::as_ref).collect();
    let s_xm = entropy(state, &joint)?;
    if m.is_empty() {
        return Ok(s_xm);
    }
    Ok(s_xm - entropy(state, m)?)
}

/// `I(A:B|M) = S(A|M) + S(B|M) - S(AB|M)`.
pub fn conditional_mutual_information<S: AsRef<str>>(
    state: &GaussianState,
    a: &[S],
    b: &[S],
    m: &[S],
) -> Result<f64> {
    check_disjoint(a, b, "A and B")?;
    check_disjoint(a, m, "A and M")?;
    check_disjoint(b, m, "B and M")?;
    let ab: Vec<&str> = a.iter().chain(b).map(AsRef::as_ref).collect();
    let m: Vec<&str> = m.iter().map(AsRef::as_ref).collect();
    let a: Vec<&str> = a.iter().map(AsRef::as_ref).collect();
    let b: Vec<&str> = b.iter().map(AsRef::as_ref).collect();
    Ok(
        conditional_entropy(state, &a, &m)? + conditional_entropy(state, &b, &m)?
            - conditional_entropy(state, &ab, &m)?,
    )
}

/// Mean energy per mode of the marginal on `labels`, for the Hamiltonian
/// `H = ½ Σ R_i² - n/2`: `E = (½ (tr σ + |r|²) - n/2) / n`.
pub fn energy<S: AsRef<str>>(state: &GaussianState, labels: &[S]) -> Result<f64> {
    let cov = state.subsystem_cov(labels)?;
    let mean = state.subsystem_mean(labels)?;
    let n = cov.modes();
    if n == 0 {
        return Err(invalid("energy per mode of an empty subsystem"));
    }
    let total = 0.5 * (cov.matrix().trace() + mean.norm_squared()) - 0.5 * n as f64;
    Ok(total / n as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{thermal, two_mode_squeezed};
    use approx::assert_relative_eq;

    #[test]
    fn g_values() {
        assert_eq!(g(0.0).unwrap(), 0.0);
        assert_relative_eq!(g(1.0).unwrap(), 2.0 * 2f64.ln(), epsilon = 1e-15);
        // ln x + 1 + 1/(2x) - 1/(6x²) + O(1/x³)
        let asymptotic = 100f64.ln() + 1.0 + 1.0 / 200.0 - 1.0 / 60_000.0;
        assert!((g(100.0).unwrap() - asymptotic).abs() < 1e-7);
        assert!((g(100.0).unwrap() - (100f64.ln() + 1.0 + 1.0 / 200.0)).abs() < 2e-5);
        assert!(g(-1e-3).is_err());
        assert!(g(f64::NAN).is_err());
    }

    #[test]
    fn g_branches_agree_with_direct_formula() {
        let direct = |x: f64| (x + 1.0) * (x + 1.0).ln() - x * x.ln();
        for &x in &[1e-6, 1e-3, 0.3, 0.999_999, 1.0, 1.000_001, 7.5, 123.0] {
            assert_relative_eq!(g(x).unwrap(), direct(x), max_relative = 1e-13);
        }
        // small-x branch joins continuously
        let below = g(0.999e-12).unwrap();
        let above = g(1.001e-12).unwrap();
        assert!((above - below).abs() < 1e-13);
    }

    #[test]
    fn g_is_increasing() {
        let mut prev = 0.0;
        for i in 1..2000 {
            let x = i as f64 * 0.01;
            let v = g(x).unwrap();
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn derivative_of_g() {
        assert_relative_eq!(bosonic_entropy_derivative(0.5), 3f64.ln(), epsilon = 1e-15);
        assert!(bosonic_entropy_derivative(0.0).is_infinite());
    }

    #[test]
    fn product_state_conditional_entropy() {
        let a = thermal(1.5, 1).unwrap();
        let m = thermal(3.0, 2).unwrap().relabel("A", "M").unwrap();
        let am = a.tensor(&m).unwrap();
        let s = conditional_entropy(&am, &["A"], &["M"]).unwrap();
        assert_relative_eq!(s, entropy(&a, &["A"]).unwrap(), epsilon = 1e-12);
        assert!(conditional_entropy(&am, &["A"], &["A"]).is_err());
    }

    #[test]
    fn mutual_information_of_two_mode_squeezed() {
        let s = two_mode_squeezed(1.0).unwrap();
        let i = conditional_mutual_information::<&str>(&s, &["A"], &["A'"], &[]).unwrap();
        assert_relative_eq!(i, 2.0 * g(0.5).unwrap(), epsilon = 1e-9);
    }

    #[test]
    fn energy_of_thermal_and_displaced() {
        let t = thermal(2.0, 3).unwrap();
        assert_relative_eq!(energy(&t, &["A"]).unwrap(), 1.5, epsilon = 1e-14);
        let mut r = t.mean().clone();
        r[0] = 1.0;
        r[3] = 2.0;
        let shifted = GaussianState::new(r, t.cov().clone(), t.partition().clone()).unwrap();
        assert_relative_eq!(
            energy(&shifted, &["A"]).unwrap(),
            1.5 + 5.0 / 6.0,
            epsilon = 1e-14
        );
    }
}

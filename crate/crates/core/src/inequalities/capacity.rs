use crate::channels::Eta;
use crate::error::{invalid, Result};
use crate::states::{energy, entropy, g, GaussianState};

/// Upper bound on the entanglement-assisted classical capacity (nats per
/// use) of `ρ_A ↦ ℬ_η(ρ_A ⊗ σ_B)` on `n` modes with input energy `E` per mode,
/// where `σ_B` has energy `E₀` and entropy `S₀` per mode:
///
/// ```text
/// n g(ηE + |1-η|E₀ + (η + |1-η| - 1)/2) - n ln(η e^{-g(E)} + |1-η| e^{S₀})
/// ```
pub fn capacity_bound(eta: Eta, e: f64, e0: f64, s0: f64, n: usize) -> Result<f64> {
    for (name, v) in [("E", e), ("E₀", e0), ("S₀", s0)] {
        if !(v >= 0.0) || !v.is_finite() {
            return Err(invalid(format!(
                "{name} must be finite and nonnegative, got {v}"
            )));
        }
    }
    if n == 0 {
        return Err(invalid("capacity bound needs n ≥ 1"));
    }
    let (et, c) = (eta.value(), eta.complement());
    let n = n as f64;
    let out_energy = et * e + c * e0 + (et + c - 1.0) / 2.0;
    let gain = n * g(out_energy)?;
    let ge = g(e)?;
    // ln(η e^{-g(E)} + |1-η| e^{S₀}) evaluated around the larger exponent
    let loss = if c == 0.0 {
        et.ln() - ge
    } else if et == 0.0 {
        c.ln() + s0
    } else {
        let top = (-ge).max(s0);
        top + (et * (-ge - top).exp() + c * (s0 - top).exp()).ln()
    };
    Ok(gain - n * loss)
}

/// [`capacity_bound`] with `E₀` and `S₀` read off the environment state.
pub fn capacity_bound_for_env(eta: Eta, e: f64, env: &GaussianState) -> Result<f64> {
    let labels: Vec<String> = env.partition().labels().map(str::to_string).collect();
    let n = env.modes();
    let e0 = energy(env, &labels)?.max(0.0);
    let s0 = entropy(env, &labels)? / n as f64;
    capacity_bound(eta, e, e0, s0, n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{thermal, vacuum};
    use approx::assert_relative_eq;

    fn eta(v: f64) -> Eta {
        Eta::new(v).unwrap()
    }

    #[test]
    fn vacuum_environment_example() {
        let c = capacity_bound(eta(0.5), 1.0, 0.0, 0.0, 1).unwrap();
        assert_relative_eq!(c, 1.424_775, epsilon = 1e-6);
        let direct = g(0.5).unwrap() - (0.5 * (-g(1.0).unwrap()).exp() + 0.5).ln();
        assert_relative_eq!(c, direct, epsilon = 1e-14);
        assert_relative_eq!(
            capacity_bound_for_env(eta(0.5), 1.0, &vacuum(1).unwrap()).unwrap(),
            c,
            epsilon = 1e-12
        );
    }

    #[test]
    fn identity_channel_doubles_entropy() {
        for &e in &[0.0, 0.3, 1.0, 5.0] {
            for n in 1..3 {
                let c = capacity_bound(eta(1.0), e, 0.7, 0.4, n).unwrap();
                assert_relative_eq!(
                    c,
                    2.0 * n as f64 * g(e).unwrap(),
                    max_relative = 1e-14,
                    epsilon = 1e-15
                );
            }
        }
    }

    #[test]
    fn zero_energy_and_errors() {
        assert_eq!(capacity_bound(eta(0.5), 0.0, 0.0, 0.0, 1).unwrap(), 0.0);
        assert!(capacity_bound(eta(0.5), -1.0, 0.0, 0.0, 1).is_err());
        assert!(capacity_bound(eta(0.5), 1.0, 0.0, 0.0, 0).is_err());
    }

    #[test]
    fn thermal_environment_lowers_the_bound_below_doubling() {
        let c = capacity_bound_for_env(eta(0.8), 2.0, &thermal(1.5, 2).unwrap()).unwrap();
        assert!(c > 0.0 && c < 2.0 * 2.0 * g(2.0).unwrap());
    }
}

//! Conditional Stam and entropy-power checks on the output of `ℬ_η`.

use crate::channels::{apply_mixing, Eta};
use crate::error::{invalid, Error, Result};
use crate::states::{conditional_entropy, conditional_mutual_information, GaussianState};
use crate::tolerances::{LAMBDA_GRID_POINTS, TOL_CI};

use super::fisher::{fisher_conditional, FisherMethod};
use super::report::{gap, InequalityReport};

/// Which labels play the inputs `A`, `B` and the memory `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Roles {
    pub a: String,
    pub b: String,
    pub m: Vec<String>,
}

impl Roles {
    pub fn new(a: &str, b: &str, m: &[&str]) -> Self {
        Self {
            a: a.to_string(),
            b: b.to_string(),
            m: m.iter().map(|s| s.to_string()).collect(),
        }
    }

    /// `A`, `B`, and `M` when the state has a subsystem of that name.
    pub fn standard(state: &GaussianState) -> Self {
        let m: &[&str] = if state.partition().contains("M") {
            &["M"]
        } else {
            &[]
        };
        Self::new("A", "B", m)
    }

    fn memory(&self) -> Vec<&str> {
        self.m.iter().map(String::as_str).collect()
    }
}

/// Knobs shared by the checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckOptions {
    /// Largest `I(A:B|M)` accepted as conditional independence.
    pub tol_ci: f64,
    pub fisher: FisherMethod,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self {
            tol_ci: TOL_CI,
            fisher: FisherMethod::AnalyticDerivative,
        }
    }
}

/// `J(A|M)`, `J(B|M)` and `J(C|M)` for one `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FisherTriple {
    pub j_a: f64,
    pub j_b: f64,
    pub j_c: f64,
}

/// `S(A|M)`, `S(B|M)`, `S(C|M)` and the mode count `n` of each input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyTriple {
    pub s_a: f64,
    pub s_b: f64,
    pub s_c: f64,
    pub n: usize,
}

/// Checks the hypotheses shared by every conditional inequality here and
/// returns the mixed output (labels `C` and the memory).
fn mixed_output(
    state: &GaussianState,
    roles: &Roles,
    eta: Eta,
    opts: &CheckOptions,
) -> Result<GaussianState> {
    let p = state.partition();
    let (na, nb) = (p.mode_count(&[&roles.a])?, p.mode_count(&[&roles.b])?);
    if na != nb || na == 0 {
        return Err(invalid(format!(
            "`{}` and `{}` must have the same positive number of modes, got {na} and {nb}",
            roles.a, roles.b
        )));
    }
    let m = roles.memory();
    let cmi = conditional_mutual_information(state, &[roles.a.as_str()], &[roles.b.as_str()], &m)?;
    if cmi > opts.tol_ci {
        return Err(Error::ConditionalDependence {
            cmi,
            tol: opts.tol_ci,
        });
    }
    let out = apply_mixing(state, &roles.a, &roles.b, eta, false)?;
    // the memory labels survive mixing unchanged; keep only C and M
    let mut keep = vec!["C"];
    keep.extend(m.iter().copied());
    out.marginal(&keep)
}

pub fn fisher_triple(
    state: &GaussianState,
    roles: &Roles,
    eta: Eta,
    opts: &CheckOptions,
) -> Result<FisherTriple> {
    let out = mixed_output(state, roles, eta, opts)?;
    let m = roles.memory();
    Ok(FisherTriple {
        j_a: fisher_conditional(state, &[roles.a.as_str()], &m, opts.fisher)?.value,
        j_b: fisher_conditional(state, &[roles.b.as_str()], &m, opts.fisher)?.value,
        j_c: fisher_conditional(&out, &["C"], &m, opts.fisher)?.value,
    })
}

pub fn entropy_triple(
    state: &GaussianState,
    roles: &Roles,
    eta: Eta,
    opts: &CheckOptions,
) -> Result<EntropyTriple> {
    let out = mixed_output(state, roles, eta, opts)?;
    let m = roles.memory();
    Ok(EntropyTriple {
        s_a: conditional_entropy(state, &[roles.a.as_str()], &m)?,
        s_b: conditional_entropy(state, &[roles.b.as_str()], &m)?,
        s_c: conditional_entropy(&out, &["C"], &m)?,
        n: state.partition().mode_count(&[&roles.a])?,
    })
}

fn recip(j: f64) -> f64 {
    if j.is_infinite() {
        0.0
    } else {
        1.0 / j
    }
}

/// `num/den · j` with `0 · anything = 0` and `positive/0 = ∞`.
fn weighted(num: f64, den: f64, j: f64) -> f64 {
    if num == 0.0 {
        0.0
    } else if den == 0.0 {
        f64::INFINITY
    } else {
        num / den * j
    }
}

/// `x ln(y/x)`, extended by `0` at `x = 0`.
fn xlog(x: f64, y: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else if y == 0.0 {
        f64::NEG_INFINITY
    } else {
        x * (y / x).ln()
    }
}

fn check_lambda(lambda: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(invalid(format!("λ must lie in [0, 1], got {lambda}")));
    }
    Ok(())
}

/// Stam form from precomputed Fisher informations:
/// `1/J_C ≥ η/J_A + |1-η|/J_B`, margin `lhs - rhs`.
pub fn stam_report(f: &FisherTriple, eta: Eta) -> InequalityReport {
    let lhs = recip(f.j_c);
    let rhs = eta.value() * recip(f.j_a) + eta.complement() * recip(f.j_b);
    InequalityReport::new("stam", Some(eta.value()), None, lhs, rhs, lhs - rhs)
        .witness("J_A", f.j_a)
        .witness("J_B", f.j_b)
        .witness("J_C", f.j_c)
}

/// Linear form: `J_C ≤ (λ²/η) J_A + ((1-λ)²/|1-η|) J_B`, margin `rhs - lhs`.
pub fn stam_linear_report(f: &FisherTriple, eta: Eta, lambda: f64) -> Result<InequalityReport> {
    check_lambda(lambda)?;
    let rhs = weighted(lambda * lambda, eta.value(), f.j_a)
        + weighted((1.0 - lambda).powi(2), eta.complement(), f.j_b);
    let lhs = f.j_c;
    Ok(InequalityReport::new(
        "stam-linear",
        Some(eta.value()),
        Some(lambda),
        lhs,
        rhs,
        gap(rhs, lhs),
    )
    .witness("J_A", f.j_a)
    .witness("J_B", f.j_b)
    .witness("J_C", f.j_c))
}

/// Exponential form: `e^{S_C/n} ≥ η e^{S_A/n} + |1-η| e^{S_B/n}`.
pub fn epi_report(s: &EntropyTriple, eta: Eta) -> InequalityReport {
    let n = s.n as f64;
    let lhs = (s.s_c / n).exp();
    let rhs = eta.value() * (s.s_a / n).exp() + eta.complement() * (s.s_b / n).exp();
    InequalityReport::new("epi", Some(eta.value()), None, lhs, rhs, lhs - rhs)
        .witness("S_A", s.s_a)
        .witness("S_B", s.s_b)
        .witness("S_C", s.s_c)
}

/// Linear form:
/// `S_C/n ≥ λ S_A/n + (1-λ) S_B/n + λ ln(η/λ) + (1-λ) ln(|1-η|/(1-λ))`.
pub fn epi_linear_report(s: &EntropyTriple, eta: Eta, lambda: f64) -> Result<InequalityReport> {
    check_lambda(lambda)?;
    let n = s.n as f64;
    let lhs = s.s_c / n;
    let rhs = lambda * s.s_a / n
        + (1.0 - lambda) * s.s_b / n
        + xlog(lambda, eta.value())
        + xlog(1.0 - lambda, eta.complement());
    Ok(InequalityReport::new(
        "epi-linear",
        Some(eta.value()),
        Some(lambda),
        lhs,
        rhs,
        gap(lhs, rhs),
    )
    .witness("S_A", s.s_a)
    .witness("S_B", s.s_b)
    .witness("S_C", s.s_c))
}

/// The `λ` minimizing the linear Stam right-hand side:
/// `(η/J_A) / (η/J_A + |1-η|/J_B)`.
pub fn optimal_lambda_stam(j_a: f64, j_b: f64, eta: Eta) -> f64 {
    let u = eta.value() * recip(j_a);
    let w = eta.complement() * recip(j_b);
    if u + w > 0.0 {
        u / (u + w)
    } else {
        eta.value() / (eta.value() + eta.complement())
    }
}

/// The `λ` maximizing the linear EPI right-hand side:
/// `η e^{S_A/n} / (η e^{S_A/n} + |1-η| e^{S_B/n})`.
pub fn optimal_lambda_epi(s_a: f64, s_b: f64, n: usize, eta: Eta) -> f64 {
    let n = n as f64;
    // shift both exponents by the larger one to stay finite
    let top = (s_a / n).max(s_b / n);
    let u = eta.value() * (s_a / n - top).exp();
    let w = eta.complement() * (s_b / n - top).exp();
    u / (u + w)
}

pub fn stam_check(
    state: &GaussianState,
    roles: &Roles,
    eta: Eta,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    Ok(stam_report(&fisher_triple(state, roles, eta, opts)?, eta))
}

/// `λ = None` uses [`optimal_lambda_stam`].
pub fn stam_linear_check(
    state: &GaussianState,
    roles: &Roles,
    eta: Eta,
    lambda: Option<f64>,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    let f = fisher_triple(state, roles, eta, opts)?;
    let lambda = lambda.unwrap_or_else(|| optimal_lambda_stam(f.j_a, f.j_b, eta));
    stam_linear_report(&f, eta, lambda)
}

pub fn epi_check(
    state: &GaussianState,
    roles: &Roles,
    eta: Eta,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    Ok(epi_report(&entropy_triple(state, roles, eta, opts)?, eta))
}

/// `λ = None` uses [`optimal_lambda_epi`].
pub fn epi_linear_check(
    state: &GaussianState,
    roles: &Roles,
    eta: Eta,
    lambda: Option<f64>,
    opts: &CheckOptions,
) -> Result<InequalityReport> {
    let s = entropy_triple(state, roles, eta, opts)?;
    let lambda = lambda.unwrap_or_else(|| optimal_lambda_epi(s.s_a, s.s_b, s.n, eta));
    epi_linear_report(&s, eta, lambda)
}

/// Outcome of comparing the tightest linear form against the exponential
/// form of one inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LegendreComparison {
    /// Tightest linear margin over the λ grid plus the closed-form optimum.
    pub linear_margin: f64,
    pub linear_lambda: f64,
    /// The exponential-form margin mapped onto the linear scale.
    pub dual_margin: f64,
}

impl LegendreComparison {
    pub fn gap(&self) -> f64 {
        gap(self.linear_margin, self.dual_margin).abs()
    }
}

fn lambda_grid(extra: f64) -> impl Iterator<Item = f64> {
    let last = (LAMBDA_GRID_POINTS - 1) as f64;
    (0..LAMBDA_GRID_POINTS)
        .map(move |i| i as f64 / last)
        .chain(std::iter::once(extra))
}

/// Minimizes the linear EPI margin over `λ` and compares it with
/// `ln(e^{S_C/n}) - ln(η e^{S_A/n} + |1-η| e^{S_B/n})`, the exponential margin
/// in logarithmic form. The two coincide by convex duality.
pub fn epi_legendre(s: &EntropyTriple, eta: Eta) -> Result<LegendreComparison> {
    let star = optimal_lambda_epi(s.s_a, s.s_b, s.n, eta);
    let mut best = (f64::INFINITY, star);
    for lambda in lambda_grid(star) {
        let m = epi_linear_report(s, eta, lambda)?.margin;
        if m < best.0 {
            best = (m, lambda);
        }
    }
    let n = s.n as f64;
    let top = (s.s_a / n).max(s.s_b / n);
    let log_rhs = top
        + (eta.value() * (s.s_a / n - top).exp() + eta.complement() * (s.s_b / n - top).exp()).ln();
    Ok(LegendreComparison {
        linear_margin: best.0,
        linear_lambda: best.1,
        dual_margin: s.s_c / n - log_rhs,
    })
}

/// Minimizes the linear Stam margin over `λ` and compares it with
/// `H - J_C`, where `H = 1/(η/J_A + |1-η|/J_B)` is the minimum of the linear
/// right-hand side. This equals the Stam margin times `J_C · H`.
pub fn stam_legendre(f: &FisherTriple, eta: Eta) -> Result<LegendreComparison> {
    let star = optimal_lambda_stam(f.j_a, f.j_b, eta);
    let mut best = (f64::INFINITY, star);
    for lambda in lambda_grid(star) {
        let m = stam_linear_report(f, eta, lambda)?.margin;
        if m < best.0 {
            best = (m, lambda);
        }
    }
    let denom = eta.value() * recip(f.j_a) + eta.complement() * recip(f.j_b);
    let h = if denom > 0.0 {
        1.0 / denom
    } else {
        f64::INFINITY
    };
    Ok(LegendreComparison {
        linear_margin: best.0,
        linear_lambda: best.1,
        dual_margin: gap(h, f.j_c),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{
        random_conditionally_independent, sharp_sequence, thermal, two_mode_squeezed, CiBlocks,
    };
    use approx::assert_relative_eq;

    fn eta(v: f64) -> Eta {
        Eta::new(v).unwrap()
    }

    fn thermal_pair(nu_a: f64, nu_b: f64) -> GaussianState {
        thermal(nu_a, 1)
            .unwrap()
            .tensor(&thermal(nu_b, 1).unwrap().relabel("A", "B").unwrap())
            .unwrap()
    }

    #[test]
    fn symmetric_thermal_equality() {
        let s = thermal_pair(1.0, 1.0);
        let roles = Roles::standard(&s);
        let opts = CheckOptions::default();
        let stam = stam_check(&s, &roles, eta(0.5), &opts).unwrap();
        assert!(stam.margin.abs() <= 1e-9);
        assert_relative_eq!(stam.witnesses["J_C"], 3f64.ln(), epsilon = 1e-12);
        let epi = epi_check(&s, &roles, eta(0.5), &opts).unwrap();
        assert!(epi.margin.abs() <= 1e-9);
        let lin = epi_linear_check(&s, &roles, eta(0.5), Some(0.5), &opts).unwrap();
        assert!(lin.margin.abs() <= 1e-9);
    }

    #[test]
    fn identity_and_swap_limits() {
        let s = thermal_pair(1.2, 2.5);
        let roles = Roles::standard(&s);
        let opts = CheckOptions::default();
        assert!(
            stam_check(&s, &roles, eta(1.0), &opts)
                .unwrap()
                .margin
                .abs()
                < 1e-12
        );
        assert!(epi_check(&s, &roles, eta(0.0), &opts).unwrap().margin.abs() < 1e-12);
        let lin = stam_linear_check(&s, &roles, eta(1.0), Some(1.0), &opts).unwrap();
        assert!(lin.margin.abs() < 1e-12);
    }

    #[test]
    fn optimal_lambdas_reproduce_exponential_forms() {
        let s = thermal_pair(1.2, 2.5);
        let roles = Roles::standard(&s);
        let opts = CheckOptions::default();
        for &e in &[0.3, 0.8, 1.6] {
            let et = entropy_triple(&s, &roles, eta(e), &opts).unwrap();
            let leg = epi_legendre(&et, eta(e)).unwrap();
            assert!(leg.gap() < 1e-12);
            let ft = fisher_triple(&s, &roles, eta(e), &opts).unwrap();
            let leg = stam_legendre(&ft, eta(e)).unwrap();
            assert!(leg.gap() < 1e-12);
            let stam = stam_report(&ft, eta(e));
            let h = 1.0 / stam.rhs;
            assert_relative_eq!(
                leg.dual_margin,
                stam.margin * ft.j_c * h,
                max_relative = 1e-9
            );
            // closed form for the Stam λ in terms of J
            let lam = optimal_lambda_stam(ft.j_a, ft.j_b, eta(e));
            let other = e * ft.j_b / (e * ft.j_b + (1.0 - e).abs() * ft.j_a);
            assert_relative_eq!(lam, other, epsilon = 1e-14);
        }
    }

    #[test]
    fn random_fixtures_hold() {
        let opts = CheckOptions::default();
        for seed in 0..20 {
            let s = random_conditionally_independent(seed, CiBlocks::symmetric(1, 1, 3.0)).unwrap();
            let roles = Roles::standard(&s);
            for &e in &[0.0, 0.3, 1.0, 2.0] {
                assert!(
                    stam_check(&s, &roles, eta(e), &opts).unwrap().holds(1e-9),
                    "seed {seed} η {e}"
                );
                assert!(
                    epi_check(&s, &roles, eta(e), &opts).unwrap().holds(1e-9),
                    "seed {seed} η {e}"
                );
                assert!(
                    epi_linear_check(&s, &roles, eta(e), Some(e.min(1.0)), &opts)
                        .unwrap()
                        .holds(1e-9)
                );
            }
        }
    }

    #[test]
    fn sharp_fixture_stam() {
        let (aa, bb) = sharp_sequence(2.0, 3.0, 50).unwrap();
        let s = aa.tensor(&bb).unwrap();
        let roles = Roles::new("A", "B", &["A'", "B'"]);
        let r = stam_check(&s, &roles, eta(0.7), &CheckOptions::default()).unwrap();
        assert!(r.holds(1e-9));
    }

    #[test]
    fn entangled_inputs_rejected() {
        let s = two_mode_squeezed(1.0).unwrap().relabel("A'", "B").unwrap();
        let err =
            epi_check(&s, &Roles::standard(&s), eta(0.5), &CheckOptions::default()).unwrap_err();
        assert!(matches!(err, Error::ConditionalDependence { .. }));
    }

    #[test]
    fn lambda_range_enforced() {
        let s = thermal_pair(1.0, 1.0);
        assert!(epi_linear_check(
            &s,
            &Roles::standard(&s),
            eta(0.5),
            Some(1.5),
            &CheckOptions::default()
        )
        .is_err());
    }
}

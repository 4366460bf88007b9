//! The classical conditional entropy-power inequality for jointly Gaussian
//! real vectors `A`, `B` (dimension `k` each) and `M` (dimension `m`).
//!
//! Covariances are laid out as `[A, B, M]`. With `C = √η A + √|1-η| B`,
//! the check is `e^{2S(C|M)/k} ≥ η e^{2S(A|M)/k} + |1-η| e^{2S(B|M)/k}`.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::channels::Eta;
use crate::error::{invalid, Error, Result};

use super::report::InequalityReport;

const CROSS_TOL: f64 = 1e-10;
const PROPORTIONAL_TOL: f64 = 1e-9;

/// Report plus whether the fixture sits in the equality case.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassicalEpiOutcome {
    pub report: InequalityReport,
    /// `Σ_{B|M} = c Σ_{A|M}` for some `c > 0`.
    pub proportional: bool,
}

/// `Σ_XX - Σ_XM Σ_MM⁻¹ Σ_MX` for index sets `x` and `m`.
fn schur(sigma: &DMatrix<f64>, x: &[usize], m: &[usize]) -> Result<DMatrix<f64>> {
    let sxx = sigma.select_rows(x).select_columns(x);
    if m.is_empty() {
        return Ok(sxx);
    }
    let smm = sigma.select_rows(m).select_columns(m);
    let sxm = sigma.select_rows(x).select_columns(m);
    let chol = smm
        .cholesky()
        .ok_or_else(|| invalid("Σ_MM is not positive definite"))?;
    Ok(&sxx - &sxm * chol.solve(&sxm.transpose()))
}

fn log_det_pd(m: &DMatrix<f64>, what: &str) -> Result<f64> {
    let chol = m
        .clone()
        .cholesky()
        .ok_or_else(|| invalid(format!("{what} is not positive definite")))?;
    Ok(2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>())
}

/// Differential entropy `½ ln((2πe)^k det Σ)` in nats.
pub fn gaussian_entropy(sigma: &DMatrix<f64>) -> Result<f64> {
    let k = sigma.nrows() as f64;
    Ok(0.5
        * (k * (2.0 * std::f64::consts::PI * std::f64::consts::E).ln() + log_det_pd(sigma, "Σ")?))
}

pub fn classical_conditional_epi_check(
    sigma: &DMatrix<f64>,
    k: usize,
    m: usize,
    eta: Eta,
) -> Result<ClassicalEpiOutcome> {
    if k == 0 || sigma.nrows() != 2 * k + m || sigma.ncols() != 2 * k + m {
        return Err(Error::DimensionMismatch {
            expected: 2 * k + m,
            found: sigma.nrows(),
        });
    }
    let asym = (sigma - sigma.transpose()).abs().max();
    if asym > 1e-12 * sigma.norm() {
        return Err(invalid("Σ_ABM is not symmetric"));
    }
    let sigma = (sigma + sigma.transpose()) * 0.5;
    log_det_pd(&sigma, "Σ_ABM")?;

    let a: Vec<usize> = (0..k).collect();
    let b: Vec<usize> = (k..2 * k).collect();
    let ab: Vec<usize> = (0..2 * k).collect();
    let mm: Vec<usize> = (2 * k..2 * k + m).collect();
    let cond = schur(&sigma, &ab, &mm)?;
    let cross = cond.view((0, k), (k, k)).abs().max();
    if cross > CROSS_TOL * sigma.norm().max(1.0) {
        return Err(Error::ConditionalDependence {
            cmi: cross,
            tol: CROSS_TOL,
        });
    }
    let sa = schur(&sigma, &a, &mm)?;
    let sb = schur(&sigma, &b, &mm)?;
    let sc = &sa * eta.value() + &sb * eta.complement();

    let kf = k as f64;
    let (ha, hb) = (gaussian_entropy(&sa)?, gaussian_entropy(&sb)?);
    let hc = gaussian_entropy(&sc)?;
    let power = |h: f64| (2.0 * h / kf).exp();
    let lhs = power(hc);
    let rhs = eta.value() * power(ha) + eta.complement() * power(hb);

    let c = sb.trace() / sa.trace();
    let proportional = (&sb - &sa * c).abs().max() <= PROPORTIONAL_TOL * sb.abs().max();

    let report = InequalityReport::new(
        "classical-epi",
        Some(eta.value()),
        None,
        lhs,
        rhs,
        lhs - rhs,
    )
    .witness("S_A", ha)
    .witness("S_B", hb)
    .witness("S_C", hc);
    Ok(ClassicalEpiOutcome {
        report,
        proportional,
    })
}

fn random_spd<R: Rng + ?Sized>(rng: &mut R, d: usize) -> DMatrix<f64> {
    let g = DMatrix::<f64>::from_fn(d, d, |_, _| rng.sample(StandardNormal));
    &g * g.transpose() + DMatrix::identity(d, d) * 0.1
}

/// Joint covariance of `A = K_A M + N_A`, `B = K_B M + N_B` with
/// independent noises of covariance `P` and `Q`.
fn assemble(
    sigma_m: &DMatrix<f64>,
    ka: &DMatrix<f64>,
    kb: &DMatrix<f64>,
    p: &DMatrix<f64>,
    q: &DMatrix<f64>,
) -> DMatrix<f64> {
    let k = p.nrows();
    let m = sigma_m.nrows();
    let mut s = DMatrix::zeros(2 * k + m, 2 * k + m);
    let ka_sm = ka * sigma_m;
    let kb_sm = kb * sigma_m;
    s.view_mut((0, 0), (k, k))
        .copy_from(&(&ka_sm * ka.transpose() + p));
    s.view_mut((k, k), (k, k))
        .copy_from(&(&kb_sm * kb.transpose() + q));
    let ab = &ka_sm * kb.transpose();
    s.view_mut((0, k), (k, k)).copy_from(&ab);
    s.view_mut((k, 0), (k, k)).copy_from(&ab.transpose());
    s.view_mut((0, 2 * k), (k, m)).copy_from(&ka_sm);
    s.view_mut((2 * k, 0), (m, k)).copy_from(&ka_sm.transpose());
    s.view_mut((k, 2 * k), (k, m)).copy_from(&kb_sm);
    s.view_mut((2 * k, k), (m, k)).copy_from(&kb_sm.transpose());
    s.view_mut((2 * k, 2 * k), (m, m)).copy_from(sigma_m);
    s
}

/// Random `Σ_ABM` in which `A` and `B` are conditionally independent given
/// `M` by construction.
pub fn random_classical_ci(seed: u64, k: usize, m: usize) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma_m = random_spd(&mut rng, m);
    let ka = DMatrix::from_fn(k, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let kb = DMatrix::from_fn(k, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let p = random_spd(&mut rng, k);
    let q = random_spd(&mut rng, k);
    assemble(&sigma_m, &ka, &kb, &p, &q)
}

/// Like [`random_classical_ci`] but with `Σ_{B|M} = c Σ_{A|M}`, the equality
/// case.
pub fn proportional_classical_ci(seed: u64, k: usize, m: usize, c: f64) -> DMatrix<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let sigma_m = random_spd(&mut rng, m);
    let ka = DMatrix::from_fn(k, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let kb = DMatrix::from_fn(k, m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let p = random_spd(&mut rng, k);
    let q = &p * c;
    assemble(&sigma_m, &ka, &kb, &p, &q)
}

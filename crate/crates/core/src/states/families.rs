//! Named state families: vacuum, thermal, two-mode squeezed, purified
//! thermal and the asymptotically optimal sequence for the conditional EPI.

use nalgebra::DMatrix;

use crate::error::{invalid, Result};
use crate::symplectic::CovarianceMatrix;

use super::{GaussianState, Partition, Subsystem};

/// Vacuum on `n` modes, labelled `"A"`.
pub fn vacuum(n: usize) -> Result<GaussianState> {
    thermal(0.5, n)
}

/// Thermal state with covariance `ν I` on `n` modes, labelled `"A"`.
pub fn thermal(nu: f64, n: usize) -> Result<GaussianState> {
    if !(nu >= 0.5) || !nu.is_finite() {
        return Err(invalid(format!("thermal state needs ν ≥ 1/2, got {nu}")));
    }
    if n == 0 {
        return Err(invalid("thermal state needs at least one mode"));
    }
    GaussianState::centered(
        CovarianceMatrix::scaled_identity(n, nu),
        Partition::single("A", n),
    )
}

/// 4×4 covariance `[[a I, c Z], [c Z, b I]]` with `Z = diag(1, -1)`.
pub fn squeezed_pair_covariance(diag_a: f64, diag_b: f64, off: f64) -> DMatrix<f64> {
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        diag_a, 0.0,    off,    0.0,
        0.0,    diag_a, 0.0,    -off,
        off,    0.0,    diag_b, 0.0,
        0.0,    -off,   0.0,    diag_b,
    ]);
    m
}

/// `x² - c² - 1/4` evaluated with error-free squares.
fn purity_defect(x: f64, c: f64) -> f64 {
    let px = x * x;
    let ex = x.mul_add(x, -px);
    let pc = c * c;
    let ec = c.mul_add(c, -pc);
    ((px - pc) - 0.25) + (ex - ec)
}

/// `√(ν² - 1/4)` rounded so that the stored pair is never below the
/// uncertainty bound.
fn pure_pair_offdiag(nu: f64) -> f64 {
    let mut c = ((nu - 0.5) * (nu + 0.5)).sqrt();
    while c > 0.0 && purity_defect(nu, c) < 0.0 {
        c = c.next_down();
    }
    c
}

/// Two-mode squeezed vacuum with thermal marginals `ν I`, labels `"A"` and
/// `"A'"`. Its covariance is
///
/// ```text
/// [ ν      0      √(ν²-¼)  0       ]
/// [ 0      ν      0       -√(ν²-¼) ]
/// [ √(ν²-¼) 0     ν        0       ]
/// [ 0     -√(ν²-¼) 0       ν       ]
/// ```
///
/// The off-diagonal entry is rounded toward zero when needed so the stored
/// matrix satisfies `ν² - c² ≥ 1/4` exactly.
pub fn two_mode_squeezed(nu: f64) -> Result<GaussianState> {
    purify_thermal(nu, 1)
}

/// `m` copies of [`two_mode_squeezed`], laid out as `A = 0..m`,
/// `A' = m..2m`; mode `j` of `A` is paired with mode `m + j` of `A'`.
pub fn purify_thermal(nu: f64, m: usize) -> Result<GaussianState> {
    if !(nu >= 0.5) || !nu.is_finite() {
        return Err(invalid(format!("purification needs ν ≥ 1/2, got {nu}")));
    }
    if m == 0 {
        return Err(invalid("purification needs at least one mode"));
    }
    let c = pure_pair_offdiag(nu);
    let pair = squeezed_pair_covariance(nu, nu, c);
    let mut cov = DMatrix::zeros(4 * m, 4 * m);
    for j in 0..m {
        let idx = [2 * j, 2 * j + 1, 2 * (m + j), 2 * (m + j) + 1];
        for (r, &ir) in idx.iter().enumerate() {
            for (s, &is) in idx.iter().enumerate() {
                cov[(ir, is)] = pair[(r, s)];
            }
        }
    }
    let partition = Partition::new(
        vec![
            Subsystem::new("A", (0..m).collect()),
            Subsystem::new("A'", (m..2 * m).collect()),
        ],
        2 * m,
    )?;
    GaussianState::centered(CovarianceMatrix::new(cov)?, partition)
}

/// The pair `(γ_AA'^{(k)}, γ_BB'^{(k)})` whose product saturates the
/// conditional EPI as `k → ∞`.
///
/// `σ_AA'^{(k)} = k · [[ (k/a) I, √(k²/a² - 1) Z ], [ √(k²/a² - 1) Z, (k/a) I ]]`
/// and likewise for `b`. Both have symplectic spectrum `(k, k)`, and as
/// `k → ∞`, `S(A|A') → 1 + ln a`. Labels are `A, A'` and `B, B'`.
pub fn sharp_sequence(a: f64, b: f64, k: u64) -> Result<(GaussianState, GaussianState)> {
    for (name, v) in [("a", a), ("b", b)] {
        if !(v > 0.0) || !v.is_finite() {
            return Err(invalid(format!("sharp sequence needs {name} > 0, got {v}")));
        }
    }
    let kf = k as f64;
    if k == 0 || kf < a.max(b) {
        return Err(invalid(format!(
            "sharp sequence index k = {k} must be at least max(a, b) = {}",
            a.max(b)
        )));
    }
    let block = |scale: f64, main: &str, aux: &str| -> Result<GaussianState> {
        let x = kf / scale;
        let c = ((x - 1.0) * (x + 1.0)).sqrt();
        let cov = squeezed_pair_covariance(kf * x, kf * x, kf * c);
        GaussianState::centered(
            CovarianceMatrix::new(cov)?,
            Partition::contiguous(&[(main, 1), (aux, 1)])?,
        )
    };
    Ok((block(a, "A", "A'")?, block(b, "B", "B'")?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{conditional_entropy, entropy, g};
    use crate::symplectic::symplectic_eigenvalues;
    use approx::assert_relative_eq;

    #[test]
    fn thermal_entropy_and_errors() {
        assert!(entropy(&vacuum(2).unwrap(), &["A"]).unwrap() < 1e-12);
        let t = thermal(1.0, 1).unwrap();
        assert_relative_eq!(
            entropy(&t, &["A"]).unwrap(),
            0.954_771_252_442_219_2,
            epsilon = 1e-12
        );
        let t3 = thermal(1.0, 3).unwrap();
        assert_relative_eq!(
            entropy(&t3, &["A"]).unwrap(),
            3.0 * g(0.5).unwrap(),
            epsilon = 1e-12
        );
        assert!(thermal(0.49, 1).is_err());
        assert!(thermal(1.0, 0).is_err());
    }

    #[test]
    fn two_mode_squeezed_layout() {
        let s = two_mode_squeezed(0.5).unwrap();
        assert_eq!(s.cov().matrix(), &DMatrix::identity(4, 4).scale(0.5));
        let s = two_mode_squeezed(1.0).unwrap();
        let m = s.cov().matrix();
        assert_relative_eq!(m[(0, 2)], 3f64.sqrt() / 2.0, epsilon = 1e-15);
        assert_relative_eq!(m[(1, 3)], -(3f64.sqrt()) / 2.0, epsilon = 1e-15);
        assert_eq!(m[(0, 0)], 1.0);
        assert!(two_mode_squeezed(0.3).is_err());
    }

    #[test]
    fn two_mode_squeezed_conditional_entropy() {
        for &nu in &[0.75, 1.0, 2.0, 10.0] {
            let s = two_mode_squeezed(nu).unwrap();
            let c = conditional_entropy(&s, &["A"], &["A'"]).unwrap();
            assert_relative_eq!(c, -g(nu - 0.5).unwrap(), epsilon = 1e-9);
        }
    }

    #[test]
    fn purity_defect_never_negative() {
        for &nu in &[0.5000001, 0.51, 1.0, 3.3, 1e3, 123_456.7, 1e6, 1e8] {
            let c = pure_pair_offdiag(nu);
            assert!(purity_defect(nu, c) >= 0.0, "ν = {nu}");
        }
    }

    #[test]
    fn purify_thermal_two_modes() {
        let s = purify_thermal(2.0, 2).unwrap();
        assert!(entropy(&s, &["A", "A'"]).unwrap().abs() < 1e-9);
        assert_relative_eq!(
            entropy(&s, &["A"]).unwrap(),
            2.0 * g(1.5).unwrap(),
            epsilon = 1e-12
        );
        let a_prime = s.subsystem_cov(&["A'"]).unwrap();
        assert_eq!(a_prime, CovarianceMatrix::scaled_identity(2, 2.0));
        assert_eq!(
            purify_thermal(1.3, 1).unwrap(),
            two_mode_squeezed(1.3).unwrap()
        );
    }

    #[test]
    fn sharp_sequence_structure() {
        let (aa, bb) = sharp_sequence(2.0, 3.0, 5).unwrap();
        let nu = symplectic_eigenvalues(aa.cov()).unwrap();
        assert_relative_eq!(nu[0], 5.0, epsilon = 1e-12);
        assert_relative_eq!(nu[1], 5.0, epsilon = 1e-12);
        assert_eq!(
            aa.subsystem_cov(&["A'"]).unwrap(),
            CovarianceMatrix::scaled_identity(1, 12.5)
        );
        assert_eq!(
            bb.subsystem_cov(&["B'"]).unwrap(),
            CovarianceMatrix::scaled_identity(1, 25.0 / 3.0)
        );
        assert!(sharp_sequence(2.0, 3.0, 2).is_err());
        assert!(sharp_sequence(-1.0, 3.0, 5).is_err());
    }

    #[test]
    fn sharp_sequence_conditional_entropy_at_k10() {
        let (aa, _) = sharp_sequence(2.0, 3.0, 10).unwrap();
        let s = conditional_entropy(&aa, &["A"], &["A'"]).unwrap();
        let expected = 2.0 * g(9.5).unwrap() - g(49.5).unwrap();
        assert_relative_eq!(s, expected, epsilon = 1e-10);
    }
}

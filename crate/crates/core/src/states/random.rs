//! Seeded fixture generators.
//!
//! All randomness flows from a `ChaCha8Rng` seeded with `seed_from_u64`, so a
//! seed reproduces the same bits on every platform.

use nalgebra::{Complex, DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::symplectic::SymplecticMatrix;

use super::{GaussianState, Partition, Subsystem};

/// Squeezing parameters are drawn from `[-MAX_SQUEEZE, MAX_SQUEEZE]`.
pub const MAX_SQUEEZE: f64 = 2.0;

/// Haar-random passive (orthogonal and symplectic) transformation on `n`
/// modes, from the QR factorization of a complex Ginibre matrix.
pub fn random_orthogonal_symplectic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymplecticMatrix {
    let z = DMatrix::<Complex<f64>>::from_fn(n, n, |_, _| {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = rng.sample(StandardNormal);
        Complex::new(re, im)
    });
    let qr = z.qr();
    let mut u = qr.q();
    let r = qr.r();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 {
            d / d.norm()
        } else {
            Complex::new(1.0, 0.0)
        };
        for i in 0..n {
            u[(i, j)] *= phase;
        }
    }
    let mut o = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        for k in 0..n {
            let (x, y) = (u[(j, k)].re, u[(j, k)].im);
            o[(2 * j, 2 * k)] = x;
            o[(2 * j, 2 * k + 1)] = -y;
            o[(2 * j + 1, 2 * k)] = y;
            o[(2 * j + 1, 2 * k + 1)] = x;
        }
    }
    SymplecticMatrix::from_trusted(o)
}

/// `O₁ · diag(e^{z_1}, e^{-z_1}, ...) · O₂` with passive `O₁, O₂` and
/// `|z_j| ≤ 2`.
pub fn random_symplectic<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymplecticMatrix {
    let o1 = random_orthogonal_symplectic(rng, n);
    let mut squeeze = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        let z = rng.random_range(-MAX_SQUEEZE..=MAX_SQUEEZE);
        squeeze[(2 * j, 2 * j)] = z.exp();
        squeeze[(2 * j + 1, 2 * j + 1)] = (-z).exp();
    }
    let o2 = random_orthogonal_symplectic(rng, n);
    SymplecticMatrix::from_trusted(o1.matrix() * squeeze * o2.matrix())
}

/// Covariance `S (⊕ ν_j I₂) Sᵀ` and a mean uniform in `[-1, 1]^{2n}`.
pub(crate) fn draw_moments<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    nu_min: f64,
    nu_max: f64,
) -> (DMatrix<f64>, DVector<f64>) {
    let mut d = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        let nu = if nu_max > nu_min {
            rng.random_range(nu_min..=nu_max)
        } else {
            nu_min
        };
        d[(2 * j, 2 * j)] = nu;
        d[(2 * j + 1, 2 * j + 1)] = nu;
    }
    let s = random_symplectic(rng, n);
    let cov = s.matrix() * d * s.matrix().transpose();
    let cov = (&cov + cov.transpose()) * 0.5;
    let mean = DVector::from_fn(2 * n, |_, _| rng.random_range(-1.0..=1.0));
    (cov, mean)
}

fn check_nu_range(nu_min: f64, nu_max: f64) -> Result<()> {
    if !(nu_min >= 0.5) || !(nu_max >= nu_min) || !nu_max.is_finite() {
        return Err(invalid(format!(
            "symplectic eigenvalue range [{nu_min}, {nu_max}] must satisfy 1/2 ≤ min ≤ max < ∞"
        )));
    }
    Ok(())
}

/// Random state on `n` modes: a random symplectic applied to a thermal
/// product with each `ν_j` uniform in `[1/2, ν_max]`, then displaced by a mean
/// uniform in `[-1, 1]`. The same seed gives the same state bit for bit.
pub fn random_state(
    seed: u64,
    n: usize,
    partition: Partition,
    nu_max: f64,
) -> Result<GaussianState> {
    random_state_in(seed, n, partition, 0.5, nu_max)
}

/// [`random_state`] with `ν_j` drawn from `[ν_min, ν_max]`.
pub fn random_state_in(
    seed: u64,
    n: usize,
    partition: Partition,
    nu_min: f64,
    nu_max: f64,
) -> Result<GaussianState> {
    check_nu_range(nu_min, nu_max)?;
    if n == 0 || partition.total_modes() != n {
        return Err(invalid(format!(
            "partition covers {} modes, expected n = {n} ≥ 1",
            partition.total_modes()
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cov, mean) = draw_moments(&mut rng, n, nu_min, nu_max);
    GaussianState::rebuild(mean, cov, partition)
}

/// Block sizes for [`random_conditionally_independent`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CiBlocks {
    pub a: usize,
    pub b: usize,
    pub m1: usize,
    pub m2: usize,
    pub nu_max: f64,
}

impl CiBlocks {
    /// `n` modes each for `A` and `B`, `m` memory modes on each side.
    pub fn symmetric(n: usize, m: usize, nu_max: f64) -> Self {
        Self {
            a: n,
            b: n,
            m1: m,
            m2: m,
            nu_max,
        }
    }
}

/// `ρ_{AM₁} ⊗ ρ_{BM₂}` with both factors from [`random_state`], laid out as
/// `[A, M₁, B, M₂]` and labelled `A`, `B`, `M = M₁ ∪ M₂`.
pub fn random_conditionally_independent(seed: u64, blocks: CiBlocks) -> Result<GaussianState> {
    let CiBlocks {
        a,
        b,
        m1,
        m2,
        nu_max,
    } = blocks;
    if a == 0 || b == 0 {
        return Err(invalid("A and B need at least one mode each"));
    }
    check_nu_range(0.5, nu_max)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (cov1, mean1) = draw_moments(&mut rng, a + m1, 0.5, nu_max);
    let (cov2, mean2) = draw_moments(&mut rng, b + m2, 0.5, nu_max);
    let n1 = a + m1;
    let total = n1 + b + m2;
    let mut cov = DMatrix::zeros(2 * total, 2 * total);
    cov.view_mut((0, 0), (2 * n1, 2 * n1)).copy_from(&cov1);
    cov.view_mut((2 * n1, 2 * n1), (2 * (b + m2), 2 * (b + m2)))
        .copy_from(&cov2);
    let mut mean = DVector::zeros(2 * total);
    mean.rows_mut(0, 2 * n1).copy_from(&mean1);
    mean.rows_mut(2 * n1, 2 * (b + m2)).copy_from(&mean2);
    let memory: Vec<usize> = (a..n1).chain(n1 + b..total).collect();
    let partition = Partition::new(
        vec![
            Subsystem::new("A", (0..a).collect()),
            Subsystem::new("B", (n1..n1 + b).collect()),
            Subsystem::new("M", memory),
        ],
        total,
    )?;
    GaussianState::rebuild(mean, cov, partition)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{conditional_mutual_information, entropy};
    use crate::symplectic::{is_valid_covariance, symplectic_residual};

    #[test]
    fn passive_and_active_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for n in 1..5 {
            let o = random_orthogonal_symplectic(&mut rng, n);
            assert!(symplectic_residual(o.matrix()) < 1e-12);
            let o_ot = o.matrix() * o.matrix().transpose();
            assert!((o_ot - DMatrix::identity(2 * n, 2 * n)).abs().max() < 1e-12);
            let s = random_symplectic(&mut rng, n);
            assert!(symplectic_residual(s.matrix()) < 1e-10 * s.matrix().norm_squared());
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let p = Partition::contiguous(&[("A", 2), ("B", 1)]).unwrap();
        let s1 = random_state(99, 3, p.clone(), 4.0).unwrap();
        let s2 = random_state(99, 3, p.clone(), 4.0).unwrap();
        assert_eq!(s1, s2);
        let s3 = random_state(100, 3, p, 4.0).unwrap();
        assert_ne!(s1, s3);
    }

    #[test]
    fn pure_when_nu_max_is_half() {
        let s = random_state(3, 2, Partition::single("A", 2), 0.5).unwrap();
        assert!(entropy(&s, &["A"]).unwrap() < 1e-9);
        assert!(is_valid_covariance(s.cov(), 1e-9).valid);
    }

    #[test]
    fn conditionally_independent_by_construction() {
        for seed in 0..20 {
            let s = random_conditionally_independent(seed, CiBlocks::symmetric(1, 1, 3.0)).unwrap();
            let i = conditional_mutual_information(&s, &["A"], &["B"], &["M"]).unwrap();
            assert!(i.abs() <= 1e-8, "seed {seed}: {i}");
        }
        let s = random_conditionally_independent(5, CiBlocks::symmetric(2, 0, 3.0)).unwrap();
        assert_eq!(s.partition().get("M").unwrap().modes.len(), 0);
        let i = conditional_mutual_information::<&str>(&s, &["A"], &["B"], &[]).unwrap();
        assert!(i.abs() <= 1e-8);
    }

    #[test]
    fn rejects_bad_ranges() {
        assert!(random_state(1, 1, Partition::single("A", 1), 0.4).is_err());
        assert!(random_state(1, 2, Partition::single("A", 1), 1.0).is_err());
    }
}

//! Phase-space linear algebra.
//!
//! Everything here works on dense real `2n × 2n` matrices in the interleaved
//! quadrature ordering `(q1, p1, q2, p2, ...)`. The symplectic form is
//! `Δ = ⊕ [[0, 1], [-1, 0]]`, covariance matrices use the convention where
//! the vacuum is `I/2`, and a Gaussian unitary acts as `σ ↦ S σ Sᵀ`,
//! `r ↦ S r`.

use nalgebra::{DMatrix, DVector};

use crate::error::{invalid, Error, Result};
use crate::tolerances::{PAIRING_REL_TOL, SYMMETRY_REL_TOL, SYMPLECTIC_REL_TOL};

/// The symplectic form `Δ` on `n` modes.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticForm {
    modes: usize,
    matrix: DMatrix<f64>,
}

impl SymplecticForm {
    pub fn new(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(invalid("symplectic form needs at least one mode"));
        }
        Ok(Self {
            modes,
            matrix: omega(modes),
        })
    }

    pub fn modes(&self) -> usize {
        self.modes
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }
}

/// `Δ` for `n ≥ 1` modes.
pub fn symplectic_form(n: usize) -> Result<SymplecticForm> {
    SymplecticForm::new(n)
}

/// Unchecked `Δ`, also defined for zero modes.
pub(crate) fn omega(modes: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(2 * modes, 2 * modes);
    for k in 0..modes {
        m[(2 * k, 2 * k + 1)] = 1.0;
        m[(2 * k + 1, 2 * k)] = -1.0;
    }
    m
}

/// The time-reversal matrix `T = ⊕ diag(1, -1)`: leaves every `q` alone and
/// flips every `p`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeReversal {
    matrix: DMatrix<f64>,
}

impl TimeReversal {
    pub fn new(modes: usize) -> Result<Self> {
        if modes == 0 {
            return Err(invalid("time reversal needs at least one mode"));
        }
        let diag = DVector::from_fn(2 * modes, |i, _| if i % 2 == 0 { 1.0 } else { -1.0 });
        Ok(Self {
            matrix: DMatrix::from_diagonal(&diag),
        })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Apply `T` to a phase-space vector without forming the matrix.
    pub fn apply(&self, x: &DVector<f64>) -> DVector<f64> {
        flip_momenta(x)
    }
}

pub(crate) fn flip_momenta(x: &DVector<f64>) -> DVector<f64> {
    DVector::from_fn(x.len(), |i, _| if i % 2 == 0 { x[i] } else { -x[i] })
}

/// A real symmetric `2n × 2n` matrix of quadrature second moments.
///
/// Construction checks shape and symmetry only. Heisenberg validity is a
/// separate question answered by [`is_valid_covariance`]; states enforce it.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix(DMatrix<f64>);

impl CovarianceMatrix {
    /// Accepts a square, even-sized, finite matrix that is symmetric within
    /// `1e-12 · ‖σ‖_F`, and stores its exact symmetric part.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(invalid(format!(
                "covariance must be square, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        if !m.nrows().is_multiple_of(2) {
            return Err(invalid(format!(
                "covariance dimension {} is odd; quadratures come in (q, p) pairs",
                m.nrows()
            )));
        }
        if m.iter().any(|x| !x.is_finite()) {
            return Err(invalid("covariance has non-finite entries"));
        }
        let asym = (&m - m.transpose()).abs().max();
        if asym > SYMMETRY_REL_TOL * m.norm() {
            return Err(invalid(format!(
                "covariance is not symmetric (max |σij - σji| = {asym:e})"
            )));
        }
        let sym = (&m + m.transpose()) * 0.5;
        Ok(Self(sym))
    }

    /// `c · I` on `n` modes. `c = 1/2` is the vacuum.
    pub fn scaled_identity(modes: usize, c: f64) -> Self {
        Self(DMatrix::identity(2 * modes, 2 * modes) * c)
    }

    pub fn vacuum(modes: usize) -> Self {
        Self::scaled_identity(modes, 0.5)
    }

    pub fn modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.0
    }

    /// Symmetrizes and wraps a matrix the caller produced from valid
    /// covariances through exact-in-theory operations.
    pub(crate) fn from_trusted(m: DMatrix<f64>) -> Self {
        let sym = (&m + m.transpose()) * 0.5;
        Self(sym)
    }
}

/// A real `2n × 2n` matrix with `S Δ Sᵀ = Δ`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymplecticMatrix(DMatrix<f64>);

impl SymplecticMatrix {
    /// Checks `‖S Δ Sᵀ - Δ‖_max ≤ 1e-10 · ‖S‖²_F`.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() || !m.nrows().is_multiple_of(2) || m.nrows() == 0 {
            return Err(invalid(format!(
                "symplectic matrix must be square with even positive size, got {}x{}",
                m.nrows(),
                m.ncols()
            )));
        }
        let residual = symplectic_residual(&m);
        let scale = m.norm_squared().max(1.0);
        if residual > SYMPLECTIC_REL_TOL * scale {
            return Err(Error::NumericalDegeneracy {
                what: "symplectic condition S Δ Sᵀ = Δ",
                residual,
            });
        }
        Ok(Self(m))
    }

    pub fn identity(modes: usize) -> Self {
        Self(DMatrix::identity(2 * modes, 2 * modes))
    }

    pub fn modes(&self) -> usize {
        self.0.nrows() / 2
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.0
    }

    /// `self · other`, i.e. apply `other` first.
    pub fn compose(&self, other: &SymplecticMatrix) -> Result<SymplecticMatrix> {
        if self.0.nrows() != other.0.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.0.nrows(),
                found: other.0.nrows(),
            });
        }
        Ok(Self(&self.0 * &other.0))
    }

    /// Block-diagonal `self ⊕ other`.
    pub fn direct_sum(&self, other: &SymplecticMatrix) -> SymplecticMatrix {
        Self(block_diag(&self.0, &other.0))
    }

    pub(crate) fn from_trusted(m: DMatrix<f64>) -> Self {
        Self(m)
    }
}

/// Max-norm of `S Δ Sᵀ - Δ`.
pub fn symplectic_residual(s: &DMatrix<f64>) -> f64 {
    let d = omega(s.nrows() / 2);
    (s * &d * s.transpose() - d).abs().max()
}

pub(crate) fn block_diag(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    let (ra, ca) = a.shape();
    let (rb, cb) = b.shape();
    let mut m = DMatrix::zeros(ra + rb, ca + cb);
    m.view_mut((0, 0), (ra, ca)).copy_from(a);
    m.view_mut((ra, ca), (rb, cb)).copy_from(b);
    m
}

/// `σ₁ ⊕ σ₂`: the covariance of a product state.
pub fn direct_sum(a: &CovarianceMatrix, b: &CovarianceMatrix) -> CovarianceMatrix {
    CovarianceMatrix(block_diag(&a.0, &b.0))
}

/// Symplectic eigenvalues of `σ`, in descending order.
///
/// The values are the moduli of the eigenvalues `±iν_k` of `Δ⁻¹σ`. For a
/// positive definite `σ = L Lᵀ` they are computed as the singular values of
/// the antisymmetric matrix `Lᵀ Δ L`, which shares that spectrum and keeps
/// the computation inside orthogonally-stable kernels. Semidefinite input
/// falls back to the general real eigensolve of `Δ⁻¹σ`. Either way the
/// spectrum comes out doubled and is paired by magnitude; a pair that
/// disagrees by more than `1e-8` relative is a [`Error::NumericalDegeneracy`].
pub fn symplectic_eigenvalues(sigma: &CovarianceMatrix) -> Result<Vec<f64>> {
    let n = sigma.modes();
    if n == 0 {
        return Ok(Vec::new());
    }
    let doubled = match sigma.0.clone().cholesky() {
        Some(chol) => {
            let l = chol.l();
            let k = l.transpose() * omega(n) * &l;
            let k = (&k - k.transpose()) * 0.5;
            k.svd(false, false)
                .singular_values
                .iter()
                .copied()
                .collect()
        }
        None => general_symplectic_moduli(&sigma.0)?,
    };
    pair_moduli(doubled)
}

/// Moduli of the eigenvalues of `Δ⁻¹σ` from a general real eigensolve,
/// after checking they are imaginary up to `1e-9` relative.
fn general_symplectic_moduli(sigma: &DMatrix<f64>) -> Result<Vec<f64>> {
    let n = sigma.nrows() / 2;
    // Δ⁻¹ = -Δ
    let m = -omega(n) * sigma;
    let eig = m.complex_eigenvalues();
    let scale = eig.iter().map(|z| z.norm()).fold(0.0_f64, f64::max);
    let worst_real = eig.iter().map(|z| z.re.abs()).fold(0.0_f64, f64::max);
    if worst_real > 1e-9 * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NumericalDegeneracy {
            what: "imaginary spectrum of Δ⁻¹σ",
            residual: worst_real,
        });
    }
    Ok(eig.iter().map(|z| z.im.abs()).collect())
}

fn pair_moduli(mut moduli: Vec<f64>) -> Result<Vec<f64>> {
    moduli.sort_by(|a, b| b.total_cmp(a));
    let scale = moduli
        .first()
        .copied()
        .unwrap_or(0.0)
        .max(f64::MIN_POSITIVE);
    let mut out = Vec::with_capacity(moduli.len() / 2);
    for pair in moduli.chunks_exact(2) {
        let residual = (pair[0] - pair[1]).abs();
        if residual > PAIRING_REL_TOL * pair[0].max(scale * 1e-3) {
            return Err(Error::NumericalDegeneracy {
                what: "±iν pairing of the symplectic spectrum",
                residual,
            });
        }
        out.push(0.5 * (pair[0] + pair[1]));
    }
    Ok(out)
}

/// Outcome of the uncertainty-principle gate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Validity {
    pub valid: bool,
    /// Smallest symplectic eigenvalue, `NaN` when the spectrum could not be
    /// computed.
    pub min_symplectic_eigenvalue: f64,
    /// Smallest ordinary eigenvalue of `σ`.
    pub min_eigenvalue: f64,
}

/// `σ` is a quantum covariance iff it is positive definite and every
/// symplectic eigenvalue is at least `1/2 - tol`.
pub fn is_valid_covariance(sigma: &CovarianceMatrix, tol: f64) -> Validity {
    if sigma.dim() == 0 {
        return Validity {
            valid: true,
            min_symplectic_eigenvalue: f64::INFINITY,
            min_eigenvalue: f64::INFINITY,
        };
    }
    let min_eigenvalue = sigma
        .0
        .clone()
        .symmetric_eigenvalues()
        .iter()
        .copied()
        .fold(f64::INFINITY, f64::min);
    let min_symplectic_eigenvalue = symplectic_eigenvalues(sigma)
        .ok()
        .and_then(|nu| nu.last().copied())
        .unwrap_or(f64::NAN);
    let positive = sigma.0.clone().cholesky().is_some();
    Validity {
        valid: positive && min_symplectic_eigenvalue >= 0.5 - tol,
        min_symplectic_eigenvalue,
        min_eigenvalue,
    }
}

/// Quadrature indices `(2j, 2j+1)` of the given modes, in order.
pub fn quadratures_of(modes: &[usize]) -> Vec<usize> {
    modes.iter().flat_map(|&m| [2 * m, 2 * m + 1]).collect()
}

fn check_whole_modes(indices: &[usize], dim: usize) -> Result<()> {
    if !indices.len().is_multiple_of(2) {
        return Err(invalid("restriction selects half a mode"));
    }
    let mut seen = vec![false; dim];
    for pair in indices.chunks_exact(2) {
        let (q, p) = (pair[0], pair[1]);
        if q % 2 != 0 || p != q + 1 {
            return Err(invalid(format!(
                "indices ({q}, {p}) are not the (q, p) pair of one mode"
            )));
        }
        if p >= dim {
            return Err(invalid(format!("quadrature index {p} out of range {dim}")));
        }
        if seen[q] {
            return Err(invalid(format!("mode {} selected twice", q / 2)));
        }
        seen[q] = true;
    }
    Ok(())
}

/// Principal submatrix on whole modes: the covariance of a partial trace.
///
/// `indices` lists quadratures as consecutive `(2j, 2j+1)` pairs; their order
/// sets the mode order of the result.
pub fn restrict(sigma: &CovarianceMatrix, indices: &[usize]) -> Result<CovarianceMatrix> {
    check_whole_modes(indices, sigma.dim())?;
    Ok(CovarianceMatrix(
        sigma.0.select_rows(indices).select_columns(indices),
    ))
}

/// The mean-vector counterpart of [`restrict`].
pub fn restrict_mean(mean: &DVector<f64>, indices: &[usize]) -> Result<DVector<f64>> {
    check_whole_modes(indices, mean.len())?;
    Ok(mean.select_rows(indices))
}

/// `(S σ Sᵀ, S r)`.
pub fn apply_symplectic(
    s: &SymplecticMatrix,
    sigma: &CovarianceMatrix,
    mean: &DVector<f64>,
) -> Result<(CovarianceMatrix, DVector<f64>)> {
    if s.0.nrows() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: s.0.nrows(),
            found: sigma.dim(),
        });
    }
    if mean.len() != sigma.dim() {
        return Err(Error::DimensionMismatch {
            expected: sigma.dim(),
            found: mean.len(),
        });
    }
    let out = &s.0 * &sigma.0 * s.0.transpose();
    Ok((CovarianceMatrix::from_trusted(out), &s.0 * mean))
}

/// Embeds a symplectic matrix acting on `targets` (mode indices, in the
/// matrix's own mode order) into the identity on `total` modes.
pub(crate) fn embed(s: &DMatrix<f64>, targets: &[usize], total: usize) -> DMatrix<f64> {
    let quads = quadratures_of(targets);
    let mut full = DMatrix::identity(2 * total, 2 * total);
    for (i, &qi) in quads.iter().enumerate() {
        for (j, &qj) in quads.iter().enumerate() {
            full[(qi, qj)] = s[(i, j)];
        }
    }
    full
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn form_one_and_two_modes() {
        let d1 = symplectic_form(1).unwrap();
        assert_eq!(
            d1.matrix(),
            &DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0])
        );
        let d2 = symplectic_form(2).unwrap();
        assert_eq!(
            d2.matrix().view((2, 2), (2, 2)),
            d1.matrix().view((0, 0), (2, 2))
        );
        assert_eq!(
            d2.matrix().view((0, 2), (2, 2)),
            DMatrix::<f64>::zeros(2, 2)
        );
        assert!(symplectic_form(0).is_err());
    }

    #[test]
    fn form_is_antisymmetric_and_squares_to_minus_identity() {
        for n in 1..6 {
            let d = symplectic_form(n).unwrap();
            let m = d.matrix();
            assert_eq!(m + m.transpose(), DMatrix::zeros(2 * n, 2 * n));
            assert_eq!(m * m, -DMatrix::<f64>::identity(2 * n, 2 * n));
        }
    }

    #[test]
    fn time_reversal_squares_to_identity() {
        let t = TimeReversal::new(3).unwrap();
        assert_eq!(t.matrix() * t.matrix(), DMatrix::<f64>::identity(6, 6));
        let x = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]);
        assert_eq!(t.apply(&x), t.matrix() * &x);
    }

    #[test]
    fn vacuum_spectrum() {
        let nu = symplectic_eigenvalues(&CovarianceMatrix::vacuum(1)).unwrap();
        assert_eq!(nu.len(), 1);
        assert_relative_eq!(nu[0], 0.5, epsilon = 1e-15);
    }

    #[test]
    fn squeezed_diagonal_spectrum() {
        // Δ⁻¹ diag(2, 1/2) has eigenvalues ±i·√(2 · 1/2) = ±i.
        let sigma =
            CovarianceMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.5])))
                .unwrap();
        let nu = symplectic_eigenvalues(&sigma).unwrap();
        assert_relative_eq!(nu[0], 1.0, epsilon = 1e-14);
    }

    #[test]
    fn spectrum_is_descending() {
        let sigma = CovarianceMatrix::new(DMatrix::from_diagonal(&DVector::from_vec(vec![
            0.7, 0.7, 3.0, 3.0, 1.5, 1.5,
        ])))
        .unwrap();
        let nu = symplectic_eigenvalues(&sigma).unwrap();
        assert_relative_eq!(nu[0], 3.0, epsilon = 1e-14);
        assert_relative_eq!(nu[1], 1.5, epsilon = 1e-14);
        assert_relative_eq!(nu[2], 0.7, epsilon = 1e-14);
    }

    #[test]
    fn semidefinite_input_uses_general_route() {
        // rank-one covariance: det = 0, so ν = 0
        let sigma =
            CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 0.0])).unwrap();
        let nu = symplectic_eigenvalues(&sigma).unwrap();
        assert!(nu[0].abs() < 1e-12);
        let v = is_valid_covariance(&sigma, 1e-9);
        assert!(!v.valid);
    }

    #[test]
    fn non_symmetric_rejected() {
        let m = DMatrix::from_row_slice(2, 2, &[1.0, 0.1, 0.0, 1.0]);
        assert!(matches!(
            CovarianceMatrix::new(m),
            Err(Error::InvalidArgument(_))
        ));
        let odd = DMatrix::<f64>::identity(3, 3);
        assert!(CovarianceMatrix::new(odd).is_err());
    }

    #[test]
    fn validity_gate() {
        let v = is_valid_covariance(&CovarianceMatrix::vacuum(2), 1e-9);
        assert!(v.valid);
        assert_relative_eq!(v.min_symplectic_eigenvalue, 0.5, epsilon = 1e-15);

        let v = is_valid_covariance(&CovarianceMatrix::scaled_identity(1, 0.4), 1e-9);
        assert!(!v.valid);
        assert_relative_eq!(v.min_symplectic_eigenvalue, 0.4, epsilon = 1e-15);

        // -I has |eigenvalues| of Δ⁻¹σ equal to 1 but is not positive.
        let v = is_valid_covariance(&CovarianceMatrix::scaled_identity(1, -1.0), 1e-9);
        assert!(!v.valid);
        assert!(v.min_eigenvalue < 0.0);
    }

    #[test]
    fn restrict_whole_modes_only() {
        let sigma = CovarianceMatrix::new(DMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                1.0 + i as f64
            } else {
                0.1
            }
        }))
        .unwrap();
        let all = restrict(&sigma, &[0, 1, 2, 3]).unwrap();
        assert_eq!(all, sigma);
        let second = restrict(&sigma, &[2, 3]).unwrap();
        assert_eq!(second.matrix()[(0, 0)], 3.0);
        assert!(restrict(&sigma, &[0]).is_err());
        assert!(restrict(&sigma, &[1, 2]).is_err());
        assert!(restrict(&sigma, &[0, 1, 0, 1]).is_err());
        assert!(restrict(&sigma, &[4, 5]).is_err());
        let r = DVector::from_vec(vec![1.0, 2.0, 3.0, 4.0]);
        assert_eq!(restrict_mean(&r, &[2, 3]).unwrap().as_slice(), &[3.0, 4.0]);
    }

    #[test]
    fn apply_identity_is_noop() {
        let sigma = CovarianceMatrix::scaled_identity(2, 1.3);
        let r = DVector::from_vec(vec![0.1, 0.2, 0.3, 0.4]);
        let (s2, r2) = apply_symplectic(&SymplecticMatrix::identity(2), &sigma, &r).unwrap();
        assert_eq!(s2, sigma);
        assert_eq!(r2, r);
        assert!(apply_symplectic(&SymplecticMatrix::identity(1), &sigma, &r).is_err());
    }

    #[test]
    fn symplectic_check_rejects_non_symplectic() {
        let m = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 2.0]));
        assert!(SymplecticMatrix::new(m).is_err());
        let sq = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.5]));
        assert!(SymplecticMatrix::new(sq).is_ok());
    }

    #[test]
    fn embed_places_blocks() {
        let sq = DMatrix::from_diagonal(&DVector::from_vec(vec![2.0, 0.5]));
        let full = embed(&sq, &[1], 2);
        assert_eq!(full[(2, 2)], 2.0);
        assert_eq!(full[(3, 3)], 0.5);
        assert_eq!(full[(0, 0)], 1.0);
    }
}

//! Gaussian channels in phase space.
//!
//! The two-input mixing map `ℬ_η` is a beam-splitter for `η ≤ 1` and a
//! two-mode squeezer for `η ≥ 1`; both regimes take a single parameter
//! [`Eta`]. The heat semigroup adds `t I` on a subsystem. General channels
//! are described by a symplectic dilation together with an environment state
//! ([`ChannelSpec`]), so every channel built here is completely positive by
//! construction.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::states::random::draw_moments;
use crate::states::{random_symplectic, thermal, GaussianState, Partition, Subsystem};
use crate::symplectic::{embed, flip_momenta, CovarianceMatrix, SymplecticMatrix};

/// The mixing parameter `η ≥ 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Eta(f64);

impl Eta {
    pub fn new(eta: f64) -> Result<Self> {
        if !(eta >= 0.0) || !eta.is_finite() {
            return Err(invalid(format!(
                "η must be a finite nonnegative number, got {eta}"
            )));
        }
        Ok(Self(eta))
    }

    pub fn value(self) -> f64 {
        self.0
    }

    /// `η ≤ 1`.
    pub fn is_beamsplitter(self) -> bool {
        self.0 <= 1.0
    }

    /// `η ≥ 1`.
    pub fn is_squeezer(self) -> bool {
        self.0 >= 1.0
    }

    /// `|1 - η|`, the weight of the second input.
    pub fn complement(self) -> f64 {
        (1.0 - self.0).abs()
    }
}

impl TryFrom<f64> for Eta {
    type Error = Error;
    fn try_from(v: f64) -> Result<Self> {
        Self::new(v)
    }
}

impl From<Eta> for f64 {
    fn from(e: Eta) -> f64 {
        e.0
    }
}

/// Symplectic matrix of `Û_η` on `4n` quadratures, inputs ordered `[A, B]`
/// and outputs `[C, D]`, each `n` modes.
///
/// For `η ≤ 1`: `R_C = √η R_A + √(1-η) R_B`, `R_D = -√(1-η) R_A + √η R_B`.
/// For `η ≥ 1`: `Q_C = √η Q_A + √(η-1) Q_B`, `P_C = √η P_A - √(η-1) P_B`,
/// `Q_D = √(η-1) Q_A + √η Q_B`, `P_D = -√(η-1) P_A + √η P_B`.
pub fn mixing_symplectic(eta: Eta, n: usize) -> Result<SymplecticMatrix> {
    if n == 0 {
        return Err(invalid("mixing needs at least one mode per input"));
    }
    let e = eta.value();
    let a = e.sqrt();
    let b = eta.complement().sqrt();
    let mut s = DMatrix::zeros(4 * n, 4 * n);
    for j in 0..n {
        let (qa, pa) = (2 * j, 2 * j + 1);
        let (qb, pb) = (2 * n + 2 * j, 2 * n + 2 * j + 1);
        // output C sits where A was, D where B was
        let (qc, pc, qd, pd) = (qa, pa, qb, pb);
        if eta.is_beamsplitter() {
            for (c, x, y) in [(qc, qa, qb), (pc, pa, pb)] {
                s[(c, x)] = a;
                s[(c, y)] = b;
            }
            for (d, x, y) in [(qd, qa, qb), (pd, pa, pb)] {
                s[(d, x)] = -b;
                s[(d, y)] = a;
            }
        } else {
            s[(qc, qa)] = a;
            s[(qc, qb)] = b;
            s[(pc, pa)] = a;
            s[(pc, pb)] = -b;
            s[(qd, qa)] = b;
            s[(qd, qb)] = a;
            s[(pd, pa)] = -b;
            s[(pd, pb)] = a;
        }
    }
    Ok(SymplecticMatrix::from_trusted(s))
}

/// Applies `ℬ_η` to the subsystems labelled `a` and `b`, leaving every other
/// label untouched. The output carries label `"C"` in place of `a`, followed by
/// the bystanders in partition order, then `"D"` when `keep_d` is set.
pub fn apply_mixing(
    state: &GaussianState,
    a: &str,
    b: &str,
    eta: Eta,
    keep_d: bool,
) -> Result<GaussianState> {
    let ma = state.partition().modes_of(&[a])?;
    let mb = state.partition().modes_of(&[b])?;
    if ma.len() != mb.len() {
        return Err(invalid(format!(
            "`{a}` has {} modes but `{b}` has {}; ℬ_η needs equal mode counts",
            ma.len(),
            mb.len()
        )));
    }
    for out in ["C", "D"] {
        if state
            .partition()
            .labels()
            .any(|l| l == out && l != a && l != b)
        {
            return Err(invalid(format!(
                "bystander label `{out}` collides with an output label"
            )));
        }
    }
    let n = ma.len();
    let s = mixing_symplectic(eta, n)?;
    let targets: Vec<usize> = ma.iter().chain(&mb).copied().collect();
    let full = embed(s.matrix(), &targets, state.modes());
    let cov = &full * state.cov().matrix() * full.transpose();
    let mean = &full * state.mean();

    let parts = state
        .partition()
        .subsystems()
        .iter()
        .map(|p| {
            let label = if p.label == a {
                "C"
            } else if p.label == b {
                "D"
            } else {
                p.label.as_str()
            };
            Subsystem::new(label, p.modes.clone())
        })
        .collect();
    let mixed = GaussianState::rebuild(mean, cov, Partition::new(parts, state.modes())?)?;
    let mut order: Vec<&str> = vec!["C"];
    order.extend(state.partition().labels().filter(|&l| l != a && l != b));
    if keep_d {
        order.push("D");
    }
    mixed.marginal(&order)
}

/// `ℬ_η` on the subsystems labelled `"A"` and `"B"`.
pub fn apply_beamsplitter(state: &GaussianState, eta: Eta, keep_d: bool) -> Result<GaussianState> {
    apply_mixing(state, "A", "B", eta, keep_d)
}

/// Mean of the `C` output for inputs with means `x` (on A) and `y` (on B):
/// `√η x + √(1-η) y` for `η ≤ 1`, `√η x + √(η-1) T y` for `η ≥ 1`.
pub fn mixed_mean(eta: Eta, x: &DVector<f64>, y: &DVector<f64>) -> DVector<f64> {
    let y = if eta.is_beamsplitter() {
        y.clone()
    } else {
        flip_momenta(y)
    };
    x * eta.value().sqrt() + y * eta.complement().sqrt()
}

fn check_time(t: f64) -> Result<()> {
    if !(t >= 0.0) || !t.is_finite() {
        return Err(invalid(format!(
            "time must be finite and nonnegative, got {t}"
        )));
    }
    Ok(())
}

/// `𝒩(t)` on the listed subsystems: `σ_sub → σ_sub + t I`, mean unchanged.
pub fn heat_semigroup<S: AsRef<str>>(
    state: &GaussianState,
    labels: &[S],
    t: f64,
) -> Result<GaussianState> {
    check_time(t)?;
    let quads = state.quadratures(labels)?;
    let mut cov = state.cov().matrix().clone();
    for &q in &quads {
        cov[(q, q)] += t;
    }
    GaussianState::rebuild(state.mean().clone(), cov, state.partition().clone())
}

/// Shifts the mean of the listed subsystems by `x`.
pub fn displace<S: AsRef<str>>(
    state: &GaussianState,
    labels: &[S],
    x: &DVector<f64>,
) -> Result<GaussianState> {
    let quads = state.quadratures(labels)?;
    if x.len() != quads.len() {
        return Err(Error::DimensionMismatch {
            expected: quads.len(),
            found: x.len(),
        });
    }
    let mut mean = state.mean().clone();
    for (&q, &v) in quads.iter().zip(x.iter()) {
        mean[q] += v;
    }
    GaussianState::new(mean, state.cov().clone(), state.partition().clone())
}

/// Averages the state over Gaussian displacements of the listed subsystems
/// with covariance `N ⪰ 0`: `σ_sub → σ_sub + N`.
pub fn add_noise<S: AsRef<str>>(
    state: &GaussianState,
    labels: &[S],
    noise: &DMatrix<f64>,
) -> Result<GaussianState> {
    let quads = state.quadratures(labels)?;
    if noise.nrows() != quads.len() || noise.ncols() != quads.len() {
        return Err(Error::DimensionMismatch {
            expected: quads.len(),
            found: noise.nrows(),
        });
    }
    let sym = CovarianceMatrix::new(noise.clone())?;
    let min = sym.matrix().clone().symmetric_eigenvalues().min();
    if min < -1e-12 * sym.matrix().norm().max(1.0) {
        return Err(invalid(format!(
            "noise covariance is not positive semidefinite (λ_min = {min:e})"
        )));
    }
    let mut cov = state.cov().matrix().clone();
    for (i, &qi) in quads.iter().enumerate() {
        for (j, &qj) in quads.iter().enumerate() {
            cov[(qi, qj)] += sym.matrix()[(i, j)];
        }
    }
    GaussianState::rebuild(state.mean().clone(), cov, state.partition().clone())
}

/// Largest entrywise gap between the covariances and means of two states on
/// the same modes.
pub fn max_entry_gap(x: &GaussianState, y: &GaussianState) -> Result<f64> {
    if x.modes() != y.modes() {
        return Err(Error::DimensionMismatch {
            expected: x.modes(),
            found: y.modes(),
        });
    }
    let c = (x.cov().matrix() - y.cov().matrix()).abs().max();
    let m = if x.modes() == 0 {
        0.0
    } else {
        (x.mean() - y.mean()).abs().max()
    };
    Ok(c.max(m))
}

/// `𝒩(t) ∘ 𝒩(s) = 𝒩(s + t)` entrywise within `1e-12`.
pub fn semigroup_compose_check<S: AsRef<str>>(
    s: f64,
    t: f64,
    state: &GaussianState,
    labels: &[S],
) -> Result<bool> {
    let two_steps = heat_semigroup(&heat_semigroup(state, labels, s)?, labels, t)?;
    let one_step = heat_semigroup(state, labels, s + t)?;
    Ok(max_entry_gap(&two_steps, &one_step)? <= 1e-12)
}

/// Entrywise gap between `ℬ_η ∘ (𝒩_A(s) ⊗ 𝒩_B(t))` and
/// `𝒩_C(ηs + |1-η|t) ∘ ℬ_η` on a state with subsystems `A` and `B`.
pub fn heat_compatibility_gap(state: &GaussianState, eta: Eta, s: f64, t: f64) -> Result<f64> {
    let heated = heat_semigroup(&heat_semigroup(state, &["A"], s)?, &["B"], t)?;
    let lhs = apply_beamsplitter(&heated, eta, false)?;
    let rhs = heat_semigroup(
        &apply_beamsplitter(state, eta, false)?,
        &["C"],
        eta.value() * s + eta.complement() * t,
    )?;
    max_entry_gap(&lhs, &rhs)
}

/// A channel acting on one labelled subsystem and the identity elsewhere.
pub trait GaussianChannel {
    /// Applies `Φ ⊗ I` to `state`, consuming subsystem `input` and producing
    /// subsystem `output` in its place.
    fn apply(&self, state: &GaussianState, input: &str, output: &str) -> Result<GaussianState>;
}

/// A Gaussian channel given by a symplectic dilation on system ⊕ environment,
/// an environment state, and the dilation-local indices of the modes kept
/// as output.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelSpec {
    dilation: SymplecticMatrix,
    env: GaussianState,
    keep: Vec<usize>,
}

impl ChannelSpec {
    /// `keep` indexes the dilation's modes: the first `modes - env.modes()`
    /// are the system, the rest are the environment.
    pub fn new(dilation: SymplecticMatrix, env: GaussianState, keep: Vec<usize>) -> Result<Self> {
        let total = dilation.modes();
        if env.modes() > total {
            return Err(invalid(format!(
                "environment has {} modes but the dilation acts on {total}",
                env.modes()
            )));
        }
        if total == env.modes() {
            return Err(invalid("the dilation leaves no modes for the system"));
        }
        let mut seen = vec![false; total];
        for &k in &keep {
            if k >= total || std::mem::replace(&mut seen[k], true) {
                return Err(invalid(format!(
                    "keep index {k} is out of range or repeated"
                )));
            }
        }
        Ok(Self {
            dilation,
            env,
            keep,
        })
    }

    /// The identity channel on `n` modes.
    pub fn identity(n: usize) -> Result<Self> {
        let env = GaussianState::centered(
            CovarianceMatrix::new(DMatrix::zeros(0, 0))?,
            Partition::new(vec![], 0)?,
        )?;
        Self::new(SymplecticMatrix::identity(n), env, (0..n).collect())
    }

    /// `ρ_A ↦ ℬ_η(ρ_A ⊗ ρ_env)`, with the environment playing the role of `B`.
    pub fn beamsplitter_with_env(eta: Eta, env: GaussianState) -> Result<Self> {
        let n = env.modes();
        Self::new(mixing_symplectic(eta, n)?, env, (0..n).collect())
    }

    /// The same map realized with a thermal environment `ν I`.
    pub fn thermal_beamsplitter(eta: Eta, env_nu: f64, n: usize) -> Result<Self> {
        Self::beamsplitter_with_env(eta, thermal(env_nu, n)?)
    }

    pub fn dilation(&self) -> &SymplecticMatrix {
        &self.dilation
    }

    pub fn env(&self) -> &GaussianState {
        &self.env
    }

    pub fn keep(&self) -> &[usize] {
        &self.keep
    }

    /// Input mode count.
    pub fn input_modes(&self) -> usize {
        self.dilation.modes() - self.env.modes()
    }

    pub fn output_modes(&self) -> usize {
        self.keep.len()
    }
}

/// Attaches the environment, applies the dilation to `input ⊕ env` and
/// keeps the requested modes under the label `output`.
pub fn apply_channel(
    spec: &ChannelSpec,
    state: &GaussianState,
    input: &str,
    output: &str,
) -> Result<GaussianState> {
    let targets_in = state.partition().modes_of(&[input])?;
    if targets_in.len() != spec.input_modes() {
        return Err(Error::DimensionMismatch {
            expected: spec.input_modes(),
            found: targets_in.len(),
        });
    }
    if output != input && state.partition().contains(output) {
        return Err(invalid(format!(
            "output label `{output}` already names a subsystem"
        )));
    }
    let n = state.modes();
    let m = spec.env.modes();
    let total = n + m;

    let mut cov = DMatrix::zeros(2 * total, 2 * total);
    cov.view_mut((0, 0), (2 * n, 2 * n))
        .copy_from(state.cov().matrix());
    cov.view_mut((2 * n, 2 * n), (2 * m, 2 * m))
        .copy_from(spec.env.cov().matrix());
    let mut mean = DVector::zeros(2 * total);
    mean.rows_mut(0, 2 * n).copy_from(state.mean());
    mean.rows_mut(2 * n, 2 * m).copy_from(spec.env.mean());

    let targets: Vec<usize> = targets_in.iter().copied().chain(n..total).collect();
    let full = embed(spec.dilation.matrix(), &targets, total);
    let cov = &full * cov * full.transpose();
    let mean = &full * mean;

    const DISCARD: &str = "\u{0}discard";
    let kept: Vec<usize> = spec.keep.iter().map(|&k| targets[k]).collect();
    let mut owned = vec![false; total];
    let mut parts = Vec::new();
    let mut order = Vec::new();
    for p in state.partition().subsystems() {
        if p.label == input {
            parts.push(Subsystem::new(output, kept.clone()));
            order.push(output.to_string());
            kept.iter().for_each(|&k| owned[k] = true);
        } else {
            parts.push(Subsystem::new(p.label.clone(), p.modes.clone()));
            order.push(p.label.clone());
            p.modes.iter().for_each(|&k| owned[k] = true);
        }
    }
    parts.push(Subsystem::new(
        DISCARD,
        (0..total).filter(|&k| !owned[k]).collect(),
    ));
    let joint = GaussianState::rebuild(mean, cov, Partition::new(parts, total)?)?;
    joint.marginal(&order)
}

impl GaussianChannel for ChannelSpec {
    fn apply(&self, state: &GaussianState, input: &str, output: &str) -> Result<GaussianState> {
        apply_channel(self, state, input, output)
    }
}

/// The heat semigroup `𝒩(t)` as a channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeatChannel {
    pub t: f64,
}

impl GaussianChannel for HeatChannel {
    fn apply(&self, state: &GaussianState, input: &str, output: &str) -> Result<GaussianState> {
        let heated = heat_semigroup(state, &[input], self.t)?;
        if input == output {
            Ok(heated)
        } else {
            heated.relabel(input, output)
        }
    }
}

/// A random dilation on `n` system modes plus `env_modes` environment modes,
/// a random environment, and the first `n` modes kept.
pub fn random_channel<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    env_modes: usize,
    nu_max: f64,
) -> Result<ChannelSpec> {
    if n == 0 {
        return Err(invalid("random channel needs at least one system mode"));
    }
    let dilation = random_symplectic(rng, n + env_modes);
    let env = if env_modes == 0 {
        GaussianState::centered(
            CovarianceMatrix::new(DMatrix::zeros(0, 0))?,
            Partition::new(vec![], 0)?,
        )?
    } else {
        let (cov, mean) = draw_moments(rng, env_modes, 0.5, nu_max);
        GaussianState::new(
            mean,
            CovarianceMatrix::new(cov)?,
            Partition::single("E", env_modes),
        )?
    };
    ChannelSpec::new(dilation, env, (0..n).collect())
}

/// Channel description used by configuration files and the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ChannelConfig {
    Identity,
    Heat {
        t: f64,
    },
    Beamsplitter {
        eta: f64,
        #[serde(default = "vacuum_nu")]
        env_nu: f64,
    },
}

fn vacuum_nu() -> f64 {
    0.5
}

impl ChannelConfig {
    /// Instantiates the channel for `n` input modes.
    pub fn build(&self, n: usize) -> Result<Box<dyn GaussianChannel + Send + Sync>> {
        Ok(match *self {
            ChannelConfig::Identity => Box::new(ChannelSpec::identity(n)?),
            ChannelConfig::Heat { t } => {
                check_time(t)?;
                Box::new(HeatChannel { t })
            }
            ChannelConfig::Beamsplitter { eta, env_nu } => Box::new(
                ChannelSpec::thermal_beamsplitter(Eta::new(eta)?, env_nu, n)?,
            ),
        })
    }
}

use std::path::Path;

use gauss_epi::campaign::{run_campaign, run_check, CampaignConfig, CampaignSummary};
use gauss_epi::channels::{ChannelConfig, Eta, GaussianChannel, HeatChannel};
use gauss_epi::inequalities::{
    capacity_bound, capacity_bound_for_env, lower_bound_scan, scaling_residual, sharp_convergence,
    sharp_limits, CheckOptions, InequalityReport, Roles, SharpRow,
};
use gauss_epi::states::{
    conditional_mutual_information, energy, entropy, thermal, vacuum, CiBlocks, StateFile,
};
use gauss_epi::symplectic::{is_valid_covariance, symplectic_eigenvalues};
use gauss_epi::{CovarianceMatrix, Error, GaussianState};
use nalgebra::DMatrix;
use serde::Serialize;

use crate::output::{write_reports, write_table};
use crate::{CampaignArgs, CheckArgs, Failure, Outcome, SweepKind, ToleranceArgs, ValidateArgs};

fn config(msg: impl Into<String>) -> Failure {
    Failure::Config(msg.into())
}

fn require_finite_nonneg(name: &str, v: f64) -> Result<(), Failure> {
    if !(v >= 0.0 && v.is_finite()) {
        return Err(config(format!(
            "--{name} must be finite and nonnegative, got {v}"
        )));
    }
    Ok(())
}

fn require_lambda(lambda: Option<f64>) -> Result<(), Failure> {
    match lambda {
        Some(l) if !(0.0..=1.0).contains(&l) => {
            Err(config(format!("--lambda must lie in [0, 1], got {l}")))
        }
        _ => Ok(()),
    }
}

fn require_nonempty<T>(name: &str, grid: &[T]) -> Result<(), Failure> {
    if grid.is_empty() {
        return Err(config(format!("--{name} is empty")));
    }
    Ok(())
}

fn read_state_file(path: &Path) -> Result<StateFile, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config(format!("cannot read {}: {e}", path.display())))?;
    StateFile::from_json(&text).map_err(|e| config(format!("{}: {e}", path.display())))
}

fn load_state(path: &Path, tol_valid: f64) -> Result<GaussianState, Failure> {
    require_finite_nonneg("tol-valid", tol_valid)?;
    Ok(read_state_file(path)?.to_state(tol_valid)?)
}

fn options(t: &ToleranceArgs) -> Result<CheckOptions, Failure> {
    require_finite_nonneg("tol", t.tol)?;
    require_finite_nonneg("tol-ci", t.tol_ci)?;
    Ok(CheckOptions {
        tol_ci: t.tol_ci,
        fisher: t.fisher.into(),
    })
}

#[derive(Serialize)]
struct SubsystemRow {
    label: String,
    modes: usize,
    entropy: f64,
    energy: Option<f64>,
}

#[derive(Serialize)]
struct ValidityReport {
    valid: bool,
    min_symplectic_eigenvalue: f64,
    symplectic_eigenvalues: Vec<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    subsystems: Vec<SubsystemRow>,
    #[serde(skip_serializing_if = "Option::is_none")]
    entropy: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    conditional_mutual_information: Option<f64>,
}

pub fn validate(args: &ValidateArgs) -> Outcome {
    require_finite_nonneg("tol", args.tol)?;
    let file = read_state_file(&args.input)?;
    let state = match file.to_state(args.tol) {
        Ok(s) => s,
        Err(Error::InvalidCovariance {
            min_symplectic_eigenvalue,
        }) => {
            let rows: Vec<f64> = file.cov.iter().flatten().copied().collect();
            let dim = file.cov.len();
            let cov = CovarianceMatrix::new(DMatrix::from_row_slice(dim, dim, &rows))?;
            let report = ValidityReport {
                valid: false,
                min_symplectic_eigenvalue,
                symplectic_eigenvalues: symplectic_eigenvalues(&cov).unwrap_or_default(),
                subsystems: Vec::new(),
                entropy: None,
                conditional_mutual_information: None,
            };
            let row = SubsystemRow {
                label: "(whole state)".into(),
                modes: file.modes,
                entropy: f64::NAN,
                energy: None,
            };
            write_table(&args.output, &report, [row])?;
            return Err(Failure::Domain(format!(
                "invalid covariance: minimum symplectic eigenvalue {min_symplectic_eigenvalue}"
            )));
        }
        Err(e) => return Err(e.into()),
    };

    let spectrum = symplectic_eigenvalues(state.cov())?;
    let validity = is_valid_covariance(state.cov(), args.tol);
    let mut subsystems = Vec::new();
    for sub in state.partition().subsystems() {
        let label = [sub.label.as_str()];
        let n = sub.modes.len();
        subsystems.push(SubsystemRow {
            label: sub.label.clone(),
            modes: n,
            entropy: if n == 0 {
                0.0
            } else {
                entropy(&state, &label)?
            },
            energy: if n == 0 {
                None
            } else {
                Some(energy(&state, &label)?)
            },
        });
    }
    let p = state.partition();
    let cmi = if p.contains("A") && p.contains("B") {
        let m: &[&str] = if p.contains("M") { &["M"] } else { &[] };
        Some(conditional_mutual_information(&state, &["A"], &["B"], m)?)
    } else {
        None
    };
    let labels: Vec<&str> = p.labels().collect();
    let report = ValidityReport {
        valid: validity.valid,
        min_symplectic_eigenvalue: validity.min_symplectic_eigenvalue,
        symplectic_eigenvalues: spectrum,
        entropy: Some(entropy(&state, &labels)?),
        conditional_mutual_information: cmi,
        subsystems,
    };
    write_table(&args.output, &report, &report.subsystems)?;
    Ok(validity.valid)
}

fn roles_for(state: &GaussianState, a: &str, b: &str, m: &Option<Vec<String>>) -> Roles {
    match m {
        Some(list) => {
            let refs: Vec<&str> = list
                .iter()
                .map(String::as_str)
                .filter(|s| !s.is_empty())
                .collect();
            Roles::new(a, b, &refs)
        }
        None => {
            let m: &[&str] = if state.partition().contains("M") {
                &["M"]
            } else {
                &[]
            };
            Roles::new(a, b, m)
        }
    }
}

pub fn check(args: &CheckArgs) -> Outcome {
    let eta = Eta::new(args.eta).map_err(|e| config(e.to_string()))?;
    require_lambda(args.lambda)?;
    let opts = options(&args.tol)?;
    let state = load_state(&args.input, args.tol_valid)?;
    let roles = roles_for(
        &state,
        &args.roles.a_label,
        &args.roles.b_label,
        &args.roles.m_labels,
    );
    let report = run_check(args.check.into(), &state, &roles, eta, args.lambda, &opts)?;
    let holds = report.holds(args.tol.tol);
    write_reports(&args.output, &report, std::slice::from_ref(&report))?;
    if !holds {
        eprintln!(
            "inequality violated: margin {} < -{}",
            report.margin, args.tol.tol
        );
    }
    Ok(holds)
}

#[derive(Serialize)]
struct CampaignJson<'a> {
    check: &'static str,
    seed: u64,
    trials: usize,
    summary: CampaignSummary,
    reports: &'a [InequalityReport],
}

pub fn campaign(args: &CampaignArgs) -> Outcome {
    if args.trials == 0 {
        return Err(config("--trials must be at least 1"));
    }
    if args.modes == 0 {
        return Err(config("--modes must be at least 1"));
    }
    if !(args.nu_max >= 0.5 && args.nu_max.is_finite()) {
        return Err(config(format!(
            "--nu-max must be finite and at least 1/2, got {}",
            args.nu_max
        )));
    }
    require_lambda(args.lambda)?;
    let eta_grid = args
        .eta_grid
        .clone()
        .unwrap_or_else(CampaignConfig::default_eta_grid);
    require_nonempty("eta-grid", &eta_grid)?;
    for &e in &eta_grid {
        Eta::new(e).map_err(|err| config(err.to_string()))?;
    }
    let mut cfg = CampaignConfig::new(
        args.check.into(),
        args.seed,
        args.trials,
        CiBlocks::symmetric(args.modes, args.memory, args.nu_max),
    );
    cfg.eta_grid = eta_grid;
    cfg.lambda = args.lambda;
    cfg.options = options(&args.tol)?;
    cfg.tol = args.tol.tol;

    let out = run_campaign(&cfg)?;
    let json = CampaignJson {
        check: cfg.check.name(),
        seed: cfg.seed,
        trials: cfg.trials,
        summary: out.summary,
        reports: &out.reports,
    };
    write_reports(&args.output, &json, &out.reports)?;
    let s = out.summary;
    eprintln!(
        "{} rows, min margin {:e}, median margin {:e}, {} below -{:e}",
        s.rows, s.min_margin, s.median_margin, s.failures, cfg.tol
    );
    Ok(out.all_hold())
}

#[derive(Serialize)]
struct ScalingRow {
    t: f64,
    conditional_entropy: f64,
    residual: f64,
    note: Option<String>,
}

#[derive(Serialize)]
struct LowerBoundRow {
    nu: f64,
    conditional_entropy: f64,
    note: Option<String>,
}

#[derive(Serialize)]
struct SharpCsvRow {
    k: u64,
    s_a: f64,
    s_b: f64,
    s_c: f64,
    limit_a: f64,
    limit_b: f64,
    limit_c: f64,
    residual_a: f64,
    residual_b: f64,
    residual_c: f64,
    note: Option<String>,
}

#[derive(Serialize)]
struct CapacityRow {
    eta: f64,
    energy: f64,
    bound: f64,
    note: Option<String>,
}

fn skipped(e: impl std::fmt::Display) -> Option<String> {
    Some(format!("skipped: {e}"))
}

pub fn sweep(kind: &SweepKind) -> Outcome {
    match kind {
        SweepKind::Scaling {
            input,
            a_label,
            m_labels,
            t_grid,
            tol_valid,
            output,
        } => {
            require_nonempty("t-grid", t_grid)?;
            let state = match input {
                Some(path) => load_state(path, *tol_valid)?,
                None => vacuum(1)?,
            };
            let m: Vec<&str> = match m_labels {
                Some(list) => list
                    .iter()
                    .map(String::as_str)
                    .filter(|s| !s.is_empty())
                    .collect(),
                None if state.partition().contains("M") => vec!["M"],
                None => Vec::new(),
            };
            let a = [a_label.as_str()];
            let n = state.partition().mode_count(&a)? as f64;
            let rows: Vec<ScalingRow> = t_grid
                .iter()
                .map(|&t| match scaling_residual(&state, &a, &m, t) {
                    Ok(r) => ScalingRow {
                        t,
                        conditional_entropy: r + n * t.ln() + n,
                        residual: r,
                        note: None,
                    },
                    Err(e) => ScalingRow {
                        t,
                        conditional_entropy: f64::NAN,
                        residual: f64::NAN,
                        note: skipped(e),
                    },
                })
                .collect();
            write_table(output, &rows, &rows)?;
            Ok(true)
        }
        SweepKind::Sharp {
            a,
            b,
            eta,
            k_grid,
            output,
        } => {
            let eta = Eta::new(*eta).map_err(|e| config(e.to_string()))?;
            if !(*a > 0.0 && *b > 0.0 && a.is_finite() && b.is_finite()) {
                return Err(config(format!(
                    "--a and --b must be positive, got {a} and {b}"
                )));
            }
            require_nonempty("k-grid", k_grid)?;
            let (la, lb, lc) = sharp_limits(*a, *b, eta);
            let rows: Vec<SharpRow> = sharp_convergence(*a, *b, eta, k_grid)?;
            let csv_rows = rows.iter().map(|r| SharpCsvRow {
                k: r.k,
                s_a: r.s_a,
                s_b: r.s_b,
                s_c: r.s_c,
                limit_a: la,
                limit_b: lb,
                limit_c: lc,
                residual_a: r.residual_a,
                residual_b: r.residual_b,
                residual_c: r.residual_c,
                note: r.note.clone(),
            });
            write_table(output, &rows, csv_rows)?;
            Ok(true)
        }
        SweepKind::LowerBound {
            channel,
            t,
            modes,
            nu_grid,
            output,
        } => {
            if *modes == 0 {
                return Err(config("--modes must be at least 1"));
            }
            require_nonempty("nu-grid", nu_grid)?;
            if let Some(w) = nu_grid.windows(2).find(|w| !(w[1] > w[0])) {
                return Err(config(format!(
                    "--nu-grid must be strictly increasing ({} then {})",
                    w[0], w[1]
                )));
            }
            let channel: Box<dyn GaussianChannel + Send + Sync> = match channel {
                Some(text) => {
                    let cfg: ChannelConfig = serde_json::from_str(text)
                        .map_err(|e| config(format!("--channel: {e}")))?;
                    cfg.build(*modes)
                        .map_err(|e| config(format!("--channel: {e}")))?
                }
                None => {
                    require_finite_nonneg("t", *t)?;
                    Box::new(HeatChannel { t: *t })
                }
            };
            let rows: Vec<LowerBoundRow> = nu_grid
                .iter()
                .map(
                    |&nu| match lower_bound_scan(channel.as_ref(), *modes, &[nu]) {
                        Ok(points) => LowerBoundRow {
                            nu,
                            conditional_entropy: points[0].1,
                            note: None,
                        },
                        Err(e) => LowerBoundRow {
                            nu,
                            conditional_entropy: f64::NAN,
                            note: skipped(e),
                        },
                    },
                )
                .collect();
            write_table(output, &rows, &rows)?;
            Ok(true)
        }
        SweepKind::Capacity {
            eta,
            energy,
            env_nu,
            e0,
            s0,
            modes,
            output,
        } => {
            require_nonempty("eta", eta)?;
            require_nonempty("energy", energy)?;
            if *modes == 0 {
                return Err(config("--modes must be at least 1"));
            }
            let etas = eta
                .iter()
                .map(|&e| Eta::new(e).map_err(|err| config(err.to_string())))
                .collect::<Result<Vec<_>, _>>()?;
            let env = match (e0, s0) {
                (Some(_), Some(_)) => None,
                _ => Some(thermal(*env_nu, *modes).map_err(|e| config(format!("--env-nu: {e}")))?),
            };
            let mut rows = Vec::new();
            for &et in &etas {
                for &e in energy {
                    let bound = match (&env, e0, s0) {
                        (Some(env), _, _) => capacity_bound_for_env(et, e, env),
                        (None, Some(e0), Some(s0)) => capacity_bound(et, e, *e0, *s0, *modes),
                        _ => unreachable!("clap requires --e0 and --s0 together"),
                    };
                    rows.push(match bound {
                        Ok(bound) => CapacityRow {
                            eta: et.value(),
                            energy: e,
                            bound,
                            note: None,
                        },
                        Err(err) => CapacityRow {
                            eta: et.value(),
                            energy: e,
                            bound: f64::NAN,
                            note: skipped(err),
                        },
                    });
                }
            }
            write_table(output, &rows, &rows)?;
            Ok(true)
        }
    }
}

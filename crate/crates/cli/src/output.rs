use std::io::Write;

use gauss_epi::inequalities::InequalityReport;
use serde::Serialize;

use crate::{Failure, Format, OutputArgs};

/// The fixed CSV layout of an inequality report.
#[derive(Serialize)]
struct ReportRow<'a> {
    check: &'a str,
    seed: Option<u64>,
    eta: Option<f64>,
    lambda: Option<f64>,
    lhs: f64,
    rhs: f64,
    margin: f64,
}

impl<'a> From<&'a InequalityReport> for ReportRow<'a> {
    fn from(r: &'a InequalityReport) -> Self {
        Self {
            check: &r.check,
            seed: r.seed,
            eta: r.params.eta,
            lambda: r.params.lambda,
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
        }
    }
}

fn csv_bytes<R: Serialize>(rows: impl IntoIterator<Item = R>) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row)
            .map_err(|e| Failure::Config(format!("CSV output: {e}")))?;
    }
    w.into_inner()
        .map_err(|e| Failure::Config(format!("CSV output: {e}")))
}

fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| Failure::Config(format!("JSON output: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}

fn emit(args: &OutputArgs, bytes: &[u8]) -> Result<(), Failure> {
    match &args.out {
        Some(path) => std::fs::write(path, bytes)
            .map_err(|e| Failure::Config(format!("cannot write {}: {e}", path.display()))),
        None => std::io::stdout()
            .write_all(bytes)
            .map_err(|e| Failure::Config(format!("cannot write to stdout: {e}"))),
    }
}

/// Writes `json` or, in CSV mode, one line per element of `rows`.
pub fn write_table<J, R>(
    args: &OutputArgs,
    json: &J,
    rows: impl IntoIterator<Item = R>,
) -> Result<(), Failure>
where
    J: Serialize + ?Sized,
    R: Serialize,
{
    let bytes = match args.format {
        Format::Json => json_bytes(json)?,
        Format::Csv => csv_bytes(rows)?,
    };
    emit(args, &bytes)
}

/// Reports in the fixed `check,seed,eta,lambda,lhs,rhs,margin` layout, or
/// `json` verbatim.
pub fn write_reports<J: Serialize + ?Sized>(
    args: &OutputArgs,
    json: &J,
    reports: &[InequalityReport],
) -> Result<(), Failure> {
    write_table(args, json, reports.iter().map(ReportRow::from))
}

//! Report rows and their CSV/JSON encodings.
//!
//! CSV columns: `model,grid,k,lambda_k,multiplicity,oracle,abs_error,residual,ms`.
//! Optional values are written as empty fields. JSON output wraps the rows in
//! `{"schema": 1, "version", "config", "rows"}`; each JSON row also carries
//! `status` (`"ok"`, `"contract"` or the solver error).
//!
//! Verification CSV columns: `check,value,tolerance,pass,params`, with params
//! as `name=value` pairs joined by `;`.

use std::io::Write;

use gapminmax_core::verify::VerificationReport;
use serde::Serialize;

use crate::config::{ExperimentConfig, Format};
use crate::error::Result;

pub const SCHEMA: u32 = 1;
pub const CSV_HEADER: [&str; 9] = ["model", "grid", "k", "lambda_k", "multiplicity", "oracle", "abs_error", "residual", "ms"];
pub const CHECK_HEADER: [&str; 5] = ["check", "value", "tolerance", "pass", "params"];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub model: String,
    pub grid: usize,
    pub k: usize,
    pub lambda_k: Option<f64>,
    pub multiplicity: Option<usize>,
    pub oracle: Option<f64>,
    pub abs_error: Option<f64>,
    pub residual: Option<f64>,
    pub ms: f64,
    pub status: String,
}

impl ReportRow {
    pub fn passed(&self) -> bool {
        self.status == "ok"
    }

    /// Sets the oracle value and the error against it together.
    pub fn with_oracle(mut self, oracle: Option<f64>) -> Self {
        self.oracle = oracle;
        self.abs_error = match (oracle, self.lambda_k) {
            (Some(o), Some(l)) => Some((l - o).abs()),
            _ => None,
        };
        if self.abs_error.is_none() {
            self.oracle = None;
        }
        self
    }

    fn csv_record(&self) -> [String; 9] {
        [
            self.model.clone(),
            self.grid.to_string(),
            self.k.to_string(),
            opt(self.lambda_k),
            self.multiplicity.map(|m| m.to_string()).unwrap_or_default(),
            opt(self.oracle),
            opt(self.abs_error),
            opt(self.residual),
            format!("{:.3}", self.ms),
        ]
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(num).unwrap_or_default()
}

/// Shortest round-trip text; scientific outside `[1e-4, 1e6)`.
pub fn num(x: f64) -> String {
    let a = x.abs();
    if x == 0.0 || !x.is_finite() || (1e-4..1e6).contains(&a) {
        x.to_string()
    } else {
        format!("{x:e}")
    }
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    version: &'static str,
    config: &'a ExperimentConfig,
    #[serde(flatten)]
    body: T,
}

#[derive(Serialize)]
struct Rows<'a> {
    rows: &'a [ReportRow],
}

#[derive(Serialize)]
struct Checks<'a> {
    checks: &'a [VerificationReport],
}

pub fn write_rows(out: &mut dyn Write, format: Format, config: &ExperimentConfig, rows: &[ReportRow]) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CSV_HEADER)?;
            for r in rows {
                w.write_record(r.csv_record())?;
            }
            w.flush().map_err(csv::Error::from)?;
        }
        Format::Json => write_json(out, config, Rows { rows })?,
    }
    Ok(())
}

pub fn write_checks(
    out: &mut dyn Write,
    format: Format,
    config: &ExperimentConfig,
    checks: &[VerificationReport],
) -> Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(CHECK_HEADER)?;
            for c in checks {
                let params: Vec<String> = c.params.iter().map(|(k, v)| format!("{k}={}", num(*v))).collect();
                w.write_record([
                    c.name.clone(),
                    num(c.value),
                    num(c.tolerance),
                    c.pass.to_string(),
                    params.join(";"),
                ])?;
            }
            w.flush().map_err(csv::Error::from)?;
        }
        Format::Json => write_json(out, config, Checks { checks })?,
    }
    Ok(())
}

fn write_json<T: Serialize>(out: &mut dyn Write, config: &ExperimentConfig, body: T) -> Result<()> {
    let env = Envelope { schema: SCHEMA, version: env!("CARGO_PKG_VERSION"), config, body };
    serde_json::to_writer_pretty(&mut *out, &env)?;
    writeln!(out).map_err(|e| crate::error::Error::Io { context: "writing report".into(), source: e })?;
    Ok(())
}

use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Serialize, Serializer};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Six significant digits in scientific notation with a signed exponent,
/// e.g. `6.66134e-16` or `1.00000e+0`.
fn sci(x: f64) -> String {
    let s = format!("{x:.5e}");
    match s.split_once('e') {
        Some((mantissa, exp)) if !exp.starts_with('-') => format!("{mantissa}e+{exp}"),
        _ => s,
    }
}

/// Writes finite values as raw JSON numbers in [`sci`] form and others as
/// `null`.
fn json_sci<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    match serde_json::Number::from_str(&sci(*x)) {
        Ok(n) if x.is_finite() => n.serialize(s),
        _ => s.serialize_none(),
    }
}

fn json_sci_opt<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
    match x {
        Some(v) => json_sci(v, s),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PositionResult {
    pub position: usize,
    #[serde(serialize_with = "json_sci")]
    pub max_infidelity: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    #[serde(serialize_with = "json_sci")]
    pub deviation: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Outcome of one sweep. Fields serialize in declaration order.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub seed: u64,
    pub trials: usize,
    #[serde(serialize_with = "json_sci")]
    pub tol: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step3: Option<String>,
    /// What `max_infidelity` measures for this command.
    pub metric: String,
    pub positions: Vec<PositionResult>,
    #[serde(
        serialize_with = "json_sci_opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub max_branch_probability_deviation: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub checks: Vec<CheckResult>,
    #[serde(
        serialize_with = "json_sci_opt",
        skip_serializing_if = "Option::is_none"
    )]
    pub wall_time_seconds: Option<f64>,
    pub pass: bool,
}

impl Report {
    /// Human-readable description of the first failing entry, in report order.
    pub fn first_failure(&self) -> Option<String> {
        let tol = sci(self.tol);
        for p in &self.positions {
            if let Some(e) = &p.error {
                return Some(format!("position {}: {e}", p.position));
            }
            if !p.pass {
                return Some(format!(
                    "position {}: {} {} exceeds tol {tol}",
                    p.position,
                    self.metric,
                    sci(p.max_infidelity)
                ));
            }
        }
        if let Some(b) = self.max_branch_probability_deviation {
            if b > self.tol {
                return Some(format!(
                    "branch probability deviation {} exceeds tol {tol}",
                    sci(b)
                ));
            }
        }
        for c in &self.checks {
            if let Some(e) = &c.error {
                return Some(format!("{}: {e}", c.name));
            }
            if !c.pass {
                return Some(format!(
                    "{}: deviation {} exceeds tol {tol}",
                    c.name,
                    sci(c.deviation)
                ));
            }
        }
        None
    }
}

fn verdict(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

/// Serializes `report`; identical reports give identical bytes.
pub fn emit_report(report: &Report, format: Format) -> Result<Vec<u8>, CliError> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(report)?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => emit_csv(report),
        Format::Text => Ok(emit_text(report).into_bytes()),
    }
}

fn emit_csv(report: &Report) -> Result<Vec<u8>, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "command",
        "seed",
        "trials",
        "position",
        "max_infidelity",
        "pass",
    ])?;
    let (seed, trials) = (report.seed.to_string(), report.trials.to_string());
    let mut row = |position: String, value: f64, pass: bool| {
        w.write_record([
            report.command.as_str(),
            &seed,
            &trials,
            &position,
            &sci(value),
            if pass { "true" } else { "false" },
        ])
    };
    for p in &report.positions {
        row(p.position.to_string(), p.max_infidelity, p.pass)?;
    }
    if let Some(b) = report.max_branch_probability_deviation {
        row("branch probability".into(), b, b <= report.tol)?;
    }
    for c in &report.checks {
        row(c.name.clone(), c.deviation, c.pass)?;
    }
    w.into_inner().map_err(|e| CliError::Io(e.into_error()))
}

fn emit_text(report: &Report) -> String {
    let mut out = format!(
        "{} seed={} trials={} tol={}",
        report.command,
        report.seed,
        report.trials,
        sci(report.tol)
    );
    if let Some(l) = report.level {
        let _ = write!(out, " l={l}");
    }
    if let Some(v) = &report.step3 {
        let _ = write!(out, " step3={v}");
    }
    let _ = writeln!(out, "\nmetric: {}", report.metric);
    for p in &report.positions {
        let _ = write!(
            out,
            "position {:>2}  {}  {}",
            p.position,
            sci(p.max_infidelity),
            verdict(p.pass)
        );
        if let Some(e) = &p.error {
            let _ = write!(out, "  ({e})");
        }
        out.push('\n');
    }
    if let Some(b) = report.max_branch_probability_deviation {
        let _ = writeln!(
            out,
            "branch probability deviation  {}  {}",
            sci(b),
            verdict(b <= report.tol)
        );
    }
    for c in &report.checks {
        let _ = write!(out, "{}  {}  {}", c.name, sci(c.deviation), verdict(c.pass));
        if let Some(e) = &c.error {
            let _ = write!(out, "  ({e})");
        }
        out.push('\n');
    }
    if let Some(t) = report.wall_time_seconds {
        let _ = writeln!(out, "wall time {t:.3} s");
    }
    let _ = writeln!(out, "result {}", verdict(report.pass));
    out
}

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use hermite_gap::solver2d::ConvergenceRecord;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::settings::Settings;
use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    Thm1,
    Thm2,
    Sw,
    #[serde(alias = "an")]
    AndrewsNi,
    Gap,
    Dumbbell,
    Jacobian,
    PlaneSpectrum,
    RectangleEquality,
    TExample,
}

impl CheckId {
    pub fn name(self) -> &'static str {
        match self {
            CheckId::Thm1 => "thm1",
            CheckId::Thm2 => "thm2",
            CheckId::Sw => "sw",
            CheckId::AndrewsNi => "andrews_ni",
            CheckId::Gap => "gap",
            CheckId::Dumbbell => "dumbbell",
            CheckId::Jacobian => "jacobian",
            CheckId::PlaneSpectrum => "plane_spectrum",
            CheckId::RectangleEquality => "rectangle_equality",
            CheckId::TExample => "t_example",
        }
    }
}

/// How `margin` is formed from lhs and rhs; pass ⇔ margin ≥ −tolerance
/// (strictly greater for `Above`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Orientation {
    /// lhs ≥ rhs: margin = lhs − rhs.
    AtLeast,
    /// lhs = rhs: margin = −|lhs − rhs|.
    Equal,
    /// lhs > rhs: margin = lhs − rhs, strict.
    Above,
}

impl Orientation {
    pub fn margin(self, lhs: f64, rhs: f64) -> f64 {
        match self {
            Orientation::AtLeast | Orientation::Above => lhs - rhs,
            Orientation::Equal => -(lhs - rhs).abs(),
        }
    }

    pub fn passes(self, margin: f64, tolerance: f64) -> bool {
        match self {
            Orientation::Above => margin > -tolerance,
            _ => margin >= -tolerance,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    /// The check's precondition does not hold; says nothing about the inequality.
    HypothesisNotMet,
    /// Truncation did not converge; not a counterexample.
    Inconclusive,
    Unsupported,
    Error,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check_id: CheckId,
    pub domain_id: String,
    #[serde(deserialize_with = "nan_if_null")]
    pub lhs: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub rhs: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub margin: f64,
    #[serde(deserialize_with = "nan_if_null")]
    pub tolerance: f64,
    pub orientation: Orientation,
    /// margin ≥ −tolerance under the orientation; independent of `status`, so
    /// a hypothesis-not-met report still records whether the numbers agree.
    pub pass: bool,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    /// Named auxiliary quantities (sorted by name).
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, f64>,
    pub evidence: Vec<ConvergenceRecord>,
    pub settings: Settings,
}

/// Undecided reports carry NaN numbers, written as JSON null.
fn nan_if_null<'de, D: serde::Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
    Ok(Option::<f64>::deserialize(d)?.unwrap_or(f64::NAN))
}

impl CheckReport {
    /// A decided check: status from the orientation and tolerance.
    pub fn decided(
        check_id: CheckId,
        domain_id: &str,
        lhs: f64,
        rhs: f64,
        tolerance: f64,
        orientation: Orientation,
        settings: &Settings,
    ) -> Self {
        let margin = orientation.margin(lhs, rhs);
        let pass = orientation.passes(margin, tolerance);
        CheckReport {
            check_id,
            domain_id: domain_id.into(),
            lhs,
            rhs,
            margin,
            tolerance,
            orientation,
            pass,
            status: if pass { Status::Pass } else { Status::Fail },
            note: None,
            details: BTreeMap::new(),
            evidence: Vec::new(),
            settings: settings.clone(),
        }
    }

    /// An undecided check (error, unsupported, …) carrying an explanation.
    pub fn undecided(check_id: CheckId, domain_id: &str, status: Status, note: String, settings: &Settings) -> Self {
        CheckReport {
            check_id,
            domain_id: domain_id.into(),
            lhs: f64::NAN,
            rhs: f64::NAN,
            margin: f64::NAN,
            tolerance: f64::NAN,
            orientation: Orientation::AtLeast,
            pass: false,
            status,
            note: Some(note),
            details: BTreeMap::new(),
            evidence: Vec::new(),
            settings: settings.clone(),
        }
    }

    pub fn with_evidence(mut self, evidence: Vec<ConvergenceRecord>) -> Self {
        self.evidence = evidence;
        self
    }

    pub fn with_detail(mut self, name: &str, value: f64) -> Self {
        self.details.insert(name.into(), value);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    /// Recompute the pass flag from the stored numbers.
    pub fn recomputed_pass(&self) -> bool {
        let margin = self.orientation.margin(self.lhs, self.rhs);
        self.orientation.passes(margin, self.tolerance)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Text,
}

/// Sort reports by (check_id, domain_id); the battery's merge order.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by(|a, b| (a.check_id, &a.domain_id).cmp(&(b.check_id, &b.domain_id)));
}

/// Round to 12 significant digits.
pub fn round12(x: f64) -> f64 {
    if x.is_finite() {
        format!("{x:.11e}").parse().expect("formatted float parses")
    } else {
        x
    }
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let r = round12(n.as_f64().expect("f64 number"));
            *v = serde_json::Number::from_f64(r).map_or(Value::Null, Value::Number);
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => map.values_mut().for_each(round_value),
        _ => {}
    }
}

fn fmt_float(x: f64) -> String {
    if x.is_finite() {
        format!("{}", round12(x))
    } else {
        String::new()
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn status_name(s: Status) -> String {
    serde_json::to_value(s).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

#[derive(Serialize)]
struct Summary {
    total: usize,
    pass: usize,
    fail: usize,
    other: usize,
    exit_code: i32,
}

/// Deterministic serialization: fixed key order, floats at 12 significant digits.
pub fn emit_report(reports: &[CheckReport], format: Format) -> String {
    match format {
        Format::Json => {
            let pass = reports.iter().filter(|r| r.status == Status::Pass).count();
            let fail = reports.iter().filter(|r| r.status == Status::Fail).count();
            let summary = Summary { total: reports.len(), pass, fail, other: reports.len() - pass - fail, exit_code: exit_code(reports) };
            let mut doc = serde_json::json!({ "reports": reports, "summary": summary });
            round_value(&mut doc);
            let mut s = serde_json::to_string_pretty(&doc).expect("reports serialize");
            s.push('\n');
            s
        }
        Format::Csv => {
            let mut s = String::from("check_id,domain_id,lhs,rhs,margin,tolerance,orientation,status,note\n");
            for r in reports {
                let orientation = serde_json::to_value(r.orientation).ok();
                let _ = writeln!(
                    s,
                    "{},{},{},{},{},{},{},{},{}",
                    r.check_id.name(),
                    csv_field(&r.domain_id),
                    fmt_float(r.lhs),
                    fmt_float(r.rhs),
                    fmt_float(r.margin),
                    fmt_float(r.tolerance),
                    orientation.as_ref().and_then(Value::as_str).unwrap_or(""),
                    status_name(r.status),
                    csv_field(r.note.as_deref().unwrap_or("")),
                );
            }
            s
        }
        Format::Text => {
            let mut s = String::new();
            for r in reports {
                let _ = write!(
                    s,
                    "{:<18} {:<10} {:<24} lhs={} rhs={} margin={} tol={}",
                    status_name(r.status).to_uppercase(),
                    r.check_id.name(),
                    r.domain_id,
                    fmt_float(r.lhs),
                    fmt_float(r.rhs),
                    fmt_float(r.margin),
                    fmt_float(r.tolerance)
                );
                if let Some(note) = &r.note {
                    let _ = write!(s, "  ({note})");
                }
                s.push('\n');
            }
            let _ = writeln!(
                s,
                "{} checks, {} passed, {} failed",
                reports.len(),
                reports.iter().filter(|r| r.status == Status::Pass).count(),
                reports.iter().filter(|r| r.status == Status::Fail).count()
            );
            s
        }
    }
}

/// 1 if any check failed, else 2 if any errored, else 0. Hypothesis-not-met,
/// inconclusive and unsupported checks never change the code.
pub fn exit_code(reports: &[CheckReport]) -> i32 {
    if reports.iter().any(|r| r.status == Status::Fail) {
        1
    } else if reports.iter().any(|r| r.status == Status::Error) {
        2
    } else {
        0
    }
}

/// Write to `out`, or stdout when absent.
pub fn write_output(text: &str, out: Option<&Path>) -> Result<(), CliError> {
    match out {
        Some(path) => {
            if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir).map_err(|source| CliError::Io { path: dir.to_path_buf(), source })?;
            }
            std::fs::write(path, text).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

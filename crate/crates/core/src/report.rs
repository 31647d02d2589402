//! Verification records, run manifests and report serialization.

use std::fmt;
use std::path::PathBuf;

use crate::json::{format_float, Json};
use crate::numerics::C64;

pub const TOOL_VERSION: &str = concat!("pbphase ", env!("CARGO_PKG_VERSION"));

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// A known, documented discrepancy. Does not fail a run.
    Flagged,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Flagged => "flagged",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One measured identity.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckRecord {
    pub check_id: String,
    pub anchor: String,
    pub max_deviation: f64,
    pub tolerance: f64,
    pub status: Status,
    /// A representative computed value (e.g. the cycle phase), when useful.
    pub observed: Option<C64>,
}

impl CheckRecord {
    /// Pass iff `max_deviation <= tolerance`. NaN deviations fail.
    pub fn measured(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        max_deviation: f64,
        tolerance: f64,
    ) -> Self {
        let status = if max_deviation <= tolerance {
            Status::Pass
        } else {
            Status::Fail
        };
        Self {
            check_id: check_id.into(),
            anchor: anchor.into(),
            max_deviation,
            tolerance,
            status,
            observed: None,
        }
    }

    /// Like [`measured`](Self::measured), but an excess deviation is a known
    /// discrepancy and is flagged instead of failed.
    pub fn known_discrepancy(
        check_id: impl Into<String>,
        anchor: impl Into<String>,
        max_deviation: f64,
        tolerance: f64,
    ) -> Self {
        let mut rec = Self::measured(check_id, anchor, max_deviation, tolerance);
        if rec.status == Status::Fail && max_deviation.is_finite() {
            rec.status = Status::Flagged;
        }
        rec
    }

    /// Boolean check recorded as deviation 0 (holds) or 1 (violated).
    pub fn holds(check_id: impl Into<String>, anchor: impl Into<String>, ok: bool) -> Self {
        Self::measured(check_id, anchor, if ok { 0.0 } else { 1.0 }, 0.5)
    }

    pub fn with_observed(mut self, value: C64) -> Self {
        self.observed = Some(value);
        self
    }

    pub fn is_fail(&self) -> bool {
        self.status == Status::Fail
    }

    pub fn to_json(&self) -> Json {
        Json::obj([
            ("check_id", Json::str(&self.check_id)),
            ("paper_anchor", Json::str(&self.anchor)),
            ("max_deviation", Json::Num(self.max_deviation)),
            ("tolerance", Json::Num(self.tolerance)),
            ("status", Json::str(self.status.as_str())),
            ("observed", self.observed.map_or(Json::Null, Json::complex)),
        ])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Suite {
    PbCore,
    Gdo,
    Evolution,
    CrossModule,
}

impl Suite {
    pub const ALL: [Suite; 4] = [Suite::PbCore, Suite::Gdo, Suite::Evolution, Suite::CrossModule];

    pub fn as_str(self) -> &'static str {
        match self {
            Suite::PbCore => "pb-core",
            Suite::Gdo => "gdo",
            Suite::Evolution => "evolution",
            Suite::CrossModule => "cross-module",
        }
    }

    pub fn parse(name: &str) -> Option<Suite> {
        Suite::ALL.into_iter().find(|s| s.as_str() == name)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Pretty,
}

impl Format {
    pub fn as_str(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Pretty => "pretty",
        }
    }
}

/// Where the deformation profile comes from.
#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSource {
    Linear,
    File(PathBuf),
}

impl ProfileSource {
    pub fn label(&self) -> String {
        match self {
            ProfileSource::Linear => "linear".to_string(),
            ProfileSource::File(p) => p.display().to_string(),
        }
    }
}

/// Parameters of one CLI run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub dim: usize,
    pub theta0: f64,
    pub eta: f64,
    pub omega: f64,
    pub profile: ProfileSource,
    pub suites: Vec<Suite>,
    pub seed: u64,
    pub format: Format,
}

impl Default for RunManifest {
    fn default() -> Self {
        Self {
            dim: 2,
            theta0: 0.0,
            eta: 0.5,
            omega: 1.0,
            profile: ProfileSource::Linear,
            suites: Suite::ALL.to_vec(),
            seed: 0,
            format: Format::Json,
        }
    }
}

impl RunManifest {
    pub fn to_json(&self) -> Json {
        Json::obj([
            ("dim", Json::Int(self.dim as i64)),
            ("theta0", Json::Num(self.theta0)),
            ("eta", Json::Num(self.eta)),
            ("omega", Json::Num(self.omega)),
            ("profile", Json::str(self.profile.label())),
            (
                "suites",
                Json::Arr(self.suites.iter().map(|s| Json::str(s.as_str())).collect()),
            ),
            ("seed", Json::Int(self.seed as i64)),
            ("format", Json::str(self.format.as_str())),
        ])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub manifest: RunManifest,
    pub records: Vec<CheckRecord>,
    pub tool_version: String,
}

impl VerificationReport {
    pub fn new(manifest: RunManifest, records: Vec<CheckRecord>) -> Self {
        Self {
            manifest,
            records,
            tool_version: TOOL_VERSION.to_string(),
        }
    }

    pub fn count(&self, status: Status) -> usize {
        self.records.iter().filter(|r| r.status == status).count()
    }

    pub fn has_failures(&self) -> bool {
        self.records.iter().any(CheckRecord::is_fail)
    }

    pub fn record(&self, check_id: &str) -> Option<&CheckRecord> {
        self.records.iter().find(|r| r.check_id == check_id)
    }

    pub fn to_json(&self) -> Json {
        Json::obj([
            ("tool_version", Json::str(&self.tool_version)),
            ("manifest", self.manifest.to_json()),
            (
                "summary",
                Json::obj([
                    ("pass", Json::Int(self.count(Status::Pass) as i64)),
                    ("fail", Json::Int(self.count(Status::Fail) as i64)),
                    ("flagged", Json::Int(self.count(Status::Flagged) as i64)),
                ]),
            ),
            (
                "records",
                Json::Arr(self.records.iter().map(CheckRecord::to_json).collect()),
            ),
        ])
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("check_id,paper_anchor,max_deviation,tolerance,status\n");
        for r in &self.records {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                csv_field(&r.check_id),
                csv_field(&r.anchor),
                format_float(r.max_deviation),
                format_float(r.tolerance),
                r.status
            ));
        }
        out
    }

    pub fn to_pretty(&self) -> String {
        let width = self.records.iter().map(|r| r.check_id.len()).max().unwrap_or(8);
        let mut out = format!(
            "{} | dim={} theta0={} eta={} omega={}\n",
            self.tool_version,
            self.manifest.dim,
            self.manifest.theta0,
            self.manifest.eta,
            self.manifest.omega
        );
        for r in &self.records {
            out.push_str(&format!(
                "{:<7} {:<width$}  dev={:<10.3e} tol={:.1e}  [{}]\n",
                r.status.as_str().to_uppercase(),
                r.check_id,
                r.max_deviation,
                r.tolerance,
                r.anchor,
            ));
        }
        out.push_str(&format!(
            "{} pass, {} fail, {} flagged\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Flagged)
        ));
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json().render(),
            Format::Csv => self.to_csv(),
            Format::Pretty => self.to_pretty(),
        }
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

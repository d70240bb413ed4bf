//! Check records and the suite report, in text and JSON.

use std::time::Instant;

use gca_core::Report;
use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct Record {
    pub name: String,
    pub status: Status,
    pub residual_term_count: usize,
    pub residual: Option<String>,
    /// `None` for seeded runs, whose reports must be reproducible byte for byte
    pub wall_time_ms: Option<u64>,
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "kebab-case")]
pub struct SuiteReport {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub input_digest: String,
    pub checks: Vec<Record>,
}

pub type CheckFn = Box<dyn Fn() -> Result<Report, String> + Send + Sync>;

/// A named group of checks; each entry of its report becomes one record.
pub struct Check {
    pub name: String,
    pub run: CheckFn,
}

impl Check {
    pub fn new<E: ToString>(name: impl Into<String>, f: impl Fn() -> Result<Report, E> + Send + Sync + 'static) -> Check {
        Check { name: name.into(), run: Box::new(move || f().map_err(|e| e.to_string())) }
    }
}

pub fn digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let hex: String = hash.iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}

fn records(check: &Check, timed: bool) -> Vec<Record> {
    let start = Instant::now();
    let out = (check.run)();
    let ms = timed.then(|| start.elapsed().as_millis() as u64);
    match out {
        Err(e) => vec![Record {
            name: check.name.clone(),
            status: Status::Error,
            residual_term_count: 0,
            residual: Some(e),
            wall_time_ms: ms,
        }],
        Ok(r) if r.entries.is_empty() => vec![Record {
            name: check.name.clone(),
            status: Status::Pass,
            residual_term_count: 0,
            residual: None,
            wall_time_ms: ms,
        }],
        Ok(r) => r
            .entries
            .into_iter()
            .map(|e| Record {
                name: format!("{}: {}", check.name, e.name),
                status: if e.passed { Status::Pass } else { Status::Fail },
                residual_term_count: e.residual_terms,
                residual: e.residual,
                wall_time_ms: ms,
            })
            .collect(),
    }
}

/// Runs the checks on the current rayon pool; records come back sorted by name.
pub fn run_checks(checks: &[Check], timed: bool) -> Vec<Record> {
    let mut out: Vec<Record> = checks.par_iter().flat_map_iter(|c| records(c, timed)).collect();
    out.sort_by(|a, b| a.name.cmp(&b.name));
    out
}

impl SuiteReport {
    pub fn new(command: &str, input: &[u8], checks: Vec<Record>) -> SuiteReport {
        SuiteReport {
            tool: "ssw".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            input_digest: digest(input),
            checks,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("ssw {} {} ({})\n", self.version, self.command, self.input_digest);
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS ",
                Status::Fail => "FAIL ",
                Status::Error => "ERROR",
            };
            match c.wall_time_ms {
                Some(ms) => s.push_str(&format!("{tag} {} [{ms} ms]\n", c.name)),
                None => s.push_str(&format!("{tag} {}\n", c.name)),
            }
            if let Some(r) = &c.residual {
                if c.status != Status::Pass {
                    s.push_str(&format!("      residual ({} terms): {r}\n", c.residual_term_count));
                }
            }
        }
        s.push_str(&format!(
            "{} passed, {} failed, {} errors\n",
            self.count(Status::Pass),
            self.count(Status::Fail),
            self.count(Status::Error)
        ));
        s
    }
}

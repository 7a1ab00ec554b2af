use serde::Serialize;
use serde_json::Value as Json;

use crate::parse::Format;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub line: usize,
    pub status: Status,
    pub details: Json,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Json>,
    /// A `replay` statement reproducing the failure.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub replay: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Context {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub seed: u64,
    pub context: Context,
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn new(seed: u64, context: Context) -> Self {
        Report { version: VERSION.to_string(), seed, context, results: vec![] }
    }

    pub fn all_passed(&self) -> bool {
        self.results.iter().all(|r| r.status == Status::Pass)
    }

    pub fn count(&self, s: Status) -> usize {
        self.results.iter().filter(|r| r.status == s).count()
    }
}

/// JSON goes through `serde_json::Value`, whose maps are ordered, so keys
/// come out sorted.
pub fn emit_report(r: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let v = serde_json::to_value(r).expect("reports serialize");
            let mut s = serde_json::to_string_pretty(&v).expect("values serialize");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut s = format!("chu {} seed {}", r.version, r.seed);
            if let Some(p) = r.context.p {
                s += &format!(" p={p}");
            }
            if let Some(n) = r.context.n {
                s += &format!(" n={n}");
            }
            s.push('\n');
            for c in &r.results {
                let tag = match c.status {
                    Status::Pass => "PASS ",
                    Status::Fail => "FAIL ",
                    Status::Error => "ERROR",
                };
                s += &format!("{tag} {:>4}  {}  {}\n", c.line, c.name, c.details);
                if let Some(replay) = &c.replay {
                    s += &format!("      {replay}\n");
                }
            }
            s += &format!(
                "{} passed, {} failed, {} errors\n",
                r.count(Status::Pass),
                r.count(Status::Fail),
                r.count(Status::Error)
            );
            s
        }
    }
}

use serde::{Deserialize, Serialize};

/// One assertion of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    /// The mathematical statement being tested.
    pub anchor: String,
    pub pass: bool,
    pub measured: serde_json::Value,
    pub bound: serde_json::Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    pub fn new(
        name: impl Into<String>,
        anchor: impl Into<String>,
        pass: bool,
        measured: impl Serialize,
        bound: impl Serialize,
    ) -> Self {
        Check {
            name: name.into(),
            anchor: anchor.into(),
            pass,
            measured: serde_json::to_value(measured).unwrap_or(serde_json::Value::Null),
            bound: serde_json::to_value(bound).unwrap_or(serde_json::Value::Null),
            detail: None,
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

/// Wall-clock timings; kept out of the summary so reruns stay byte-identical.
#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub stages_ms: Vec<(String, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub experiment: String,
    pub command: String,
    pub seed: u64,
    pub all_pass: bool,
    pub checks: Vec<Check>,
    pub files: Vec<String>,
}

impl RunSummary {
    pub fn new(experiment: &str, command: &str, seed: u64, checks: Vec<Check>, files: Vec<String>) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        RunSummary { experiment: experiment.into(), command: command.into(), seed, all_pass, checks, files }
    }

    pub fn failed(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

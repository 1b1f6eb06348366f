use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    /// Not applicable to this input.
    Skip,
    /// Reported without affecting the verdict.
    Info,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Timing {
    pub wall_secs: f64,
}

/// Machine- and human-readable record of one command run.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub version: &'static str,
    pub inputs: BTreeMap<&'static str, Value>,
    pub outputs: BTreeMap<&'static str, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing: Option<Timing>,
    pub checks: Vec<Check>,
    pub passed: bool,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        RunReport {
            command: command.into(),
            version: env!("CARGO_PKG_VERSION"),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            timing: None,
            checks: Vec::new(),
            passed: true,
        }
    }

    pub fn input(&mut self, key: &'static str, value: impl Into<Value>) {
        self.inputs.insert(key, value.into());
    }

    pub fn output(&mut self, key: &'static str, value: impl Into<Value>) {
        self.outputs.insert(key, value.into());
    }

    pub fn check(&mut self, name: &'static str, status: CheckStatus, detail: impl Into<String>) {
        if status == CheckStatus::Fail {
            self.passed = false;
        }
        self.checks.push(Check {
            name,
            status,
            detail: detail.into(),
        });
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} (jeqp {})", self.command, self.version);
        for (k, v) in self.inputs.iter().chain(&self.outputs) {
            let _ = writeln!(s, "  {k}: {}", plain(v));
        }
        if let Some(t) = &self.timing {
            let _ = writeln!(s, "  wall: {:.3}s", t.wall_secs);
        }
        for c in &self.checks {
            let status = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skip => "SKIP",
                CheckStatus::Info => "INFO",
            };
            let _ = writeln!(s, "{status:<5} {:<12} {}", c.name, c.detail);
        }
        let _ = writeln!(s, "result: {}", if self.passed { "pass" } else { "fail" });
        s
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

//! Structured run reports.
//!
//! Every command emits one JSON object: the command name, input file
//! digests, the parameters that influence the numbers, a results payload,
//! and a list of named checks with measured gaps. Everything except
//! `elapsed_ms` is reproducible bit-for-bit from inputs plus parameters.

use serde_json::{Map, Value};
use sha2::{Digest, Sha256};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECKS_FAILED: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_PARSE: i32 = 3;

pub struct Check {
    pub name: &'static str,
    pub status: CheckStatus,
}

pub enum CheckStatus {
    Measured { pass: bool, gap: f64 },
    Skipped { reason: String },
}

impl Check {
    pub fn measured(name: &'static str, pass: bool, gap: f64) -> Self {
        Self {
            name,
            status: CheckStatus::Measured { pass, gap },
        }
    }

    pub fn skipped(name: &'static str, reason: impl Into<String>) -> Self {
        Self {
            name,
            status: CheckStatus::Skipped {
                reason: reason.into(),
            },
        }
    }

    pub fn passed(&self) -> bool {
        match &self.status {
            CheckStatus::Measured { pass, .. } => *pass,
            CheckStatus::Skipped { .. } => true,
        }
    }
}

pub struct RunReport {
    pub command: &'static str,
    pub inputs: Map<String, Value>,
    pub parameters: Map<String, Value>,
    pub results: Value,
    pub checks: Vec<Check>,
    /// Headline number for `--quiet` output.
    pub headline: Value,
}

impl RunReport {
    pub fn new(command: &'static str) -> Self {
        Self {
            command,
            inputs: Map::new(),
            parameters: Map::new(),
            results: Value::Null,
            checks: Vec::new(),
            headline: Value::Null,
        }
    }

    pub fn input(&mut self, name: &str, path: &str, bytes: &[u8]) {
        let digest = Sha256::digest(bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.insert(
            name.to_string(),
            serde_json::json!({ "path": path, "sha256": hex }),
        );
    }

    pub fn parameter(&mut self, name: &str, value: impl Into<Value>) {
        self.parameters.insert(name.to_string(), value.into());
    }

    pub fn all_checks_pass(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.all_checks_pass() {
            EXIT_OK
        } else {
            EXIT_CHECKS_FAILED
        }
    }

    pub fn to_json(&self, elapsed_ms: f64) -> Value {
        let checks: Vec<Value> = self
            .checks
            .iter()
            .map(|c| match &c.status {
                CheckStatus::Measured { pass, gap } => {
                    serde_json::json!({ "name": c.name, "pass": pass, "gap": gap })
                }
                CheckStatus::Skipped { reason } => {
                    serde_json::json!({ "name": c.name, "skipped": reason })
                }
            })
            .collect();
        serde_json::json!({
            "command": self.command,
            "inputs": self.inputs,
            "parameters": self.parameters,
            "results": self.results,
            "checks": checks,
            "elapsed_ms": elapsed_ms,
        })
    }
}

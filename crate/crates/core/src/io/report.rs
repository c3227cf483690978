//! JSON report documents.

use std::path::Path;

use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    UndecidedAtBound,
}

impl Verdict {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::UndecidedAtBound => 2,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<(String, String)>,
    pub verdict: Verdict,
    pub invariants: Map<String, Value>,
    pub assumptions: Vec<String>,
    pub exhaustive: Option<bool>,
    pub elapsed_ms: u128,
}

pub fn digest(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            command: command.to_string(),
            inputs: Vec::new(),
            verdict: Verdict::Pass,
            invariants: Map::new(),
            assumptions: Vec::new(),
            exhaustive: None,
            elapsed_ms: 0,
        }
    }

    pub fn input(&mut self, path: &Path, bytes: &[u8]) {
        self.inputs.push((path.display().to_string(), digest(bytes)));
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        let v = serde_json::to_value(value).map_err(|e| crate::Error::Internal(e.to_string()))?;
        self.invariants.insert(key.to_string(), v);
        Ok(())
    }

    pub fn assume(&mut self, a: impl Into<String>) {
        let a = a.into();
        if !self.assumptions.contains(&a) {
            self.assumptions.push(a);
        }
    }

    pub fn to_value(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "inputs": self.inputs.iter().map(|(p, d)| json!({"path": p, "sha256": d})).collect::<Vec<_>>(),
            "verdict": self.verdict,
            "invariants": self.invariants,
            "assumptions": self.assumptions,
            "exhaustive": self.exhaustive,
            "timing": {"elapsed_ms": self.elapsed_ms as u64},
        })
    }

    pub fn render(&self, pretty: bool) -> String {
        let v = self.to_value();
        if pretty {
            serde_json::to_string_pretty(&v).expect("json values always serialize")
        } else {
            v.to_string()
        }
    }
}

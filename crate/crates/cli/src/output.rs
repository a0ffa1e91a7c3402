use std::collections::BTreeMap;
use std::fmt::Write;

use qhalg::report::{Check, Report};
use serde_json::{json, Value};

pub struct Outcome {
    pub command: String,
    pub digest: String,
    pub checks: Vec<Check>,
    pub values: BTreeMap<String, Value>,
    pub lines: Vec<String>,
}

impl Outcome {
    pub fn new(command: &str, digest: String) -> Self {
        Self {
            command: command.to_string(),
            digest,
            checks: Vec::new(),
            values: BTreeMap::new(),
            lines: Vec::new(),
        }
    }

    pub fn extend(&mut self, prefix: &str, rep: Report) {
        for mut c in rep.checks {
            if !prefix.is_empty() {
                c.name = format!("{prefix}: {}", c.name);
            }
            self.checks.push(c);
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, witness: Option<String>) {
        self.checks.push(Check::new(name, passed, witness));
    }

    pub fn value(&mut self, key: &str, v: Value) {
        self.values.insert(key.to_string(), v);
    }

    pub fn line(&mut self, s: impl Into<String>) {
        self.lines.push(s.into());
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self, as_json: bool) -> String {
        if as_json {
            let checks: Vec<Value> = self
                .checks
                .iter()
                .map(|c| {
                    let mut v = json!({
                        "name": c.name,
                        "status": if c.passed { "pass" } else { "fail" },
                    });
                    if let Some(w) = &c.witness {
                        v["witness"] = json!(w);
                    }
                    v
                })
                .collect();
            let report = json!({
                "command": self.command,
                "input_digest": self.digest,
                "checks": checks,
                "values": self.values,
            });
            return serde_json::to_string_pretty(&report).unwrap() + "\n";
        }
        let mut out = String::new();
        for l in &self.lines {
            writeln!(out, "{l}").unwrap();
        }
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            match &c.witness {
                Some(w) => writeln!(out, "{status}  {} ({w})", c.name).unwrap(),
                None => writeln!(out, "{status}  {}", c.name).unwrap(),
            }
        }
        out
    }
}

use std::fmt::Write as _;

use modcoh::suite::{Check, SuiteReport};
use serde::Serialize;
use serde_json::{Map, Value};

/// Output of one command. The text and JSON renderings carry the same fields.
#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: Map<String, Value>,
    pub results: Map<String, Value>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub suite: Option<SuiteReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<u128>,
}

impl Report {
    pub fn new(command: &str) -> Report {
        Report { command: command.into(), inputs: Map::new(), results: Map::new(), checks: vec![], suite: None, timing_ms: None }
    }

    pub fn input(mut self, key: &str, v: impl Into<Value>) -> Report {
        self.inputs.insert(key.into(), v.into());
        self
    }

    pub fn result(&mut self, key: &str, v: impl Into<Value>) {
        self.results.insert(key.into(), v.into());
    }

    pub fn check(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.suite.as_ref().map_or(true, |s| s.passed)
    }

    pub fn to_json(&self) -> Value {
        let body = serde_json::to_value(self).expect("report serializes");
        modcoh::io::envelope("report", body)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        for (k, v) in &self.inputs {
            let _ = writeln!(s, "input {k}: {}", plain(v));
        }
        for (k, v) in &self.results {
            match v {
                Value::Array(items) if items.iter().all(|x| x.is_string()) && !items.is_empty() => {
                    let _ = writeln!(s, "{k}:");
                    for x in items {
                        let _ = writeln!(s, "  {}", plain(x));
                    }
                }
                _ => {
                    let _ = writeln!(s, "{k}: {}", plain(v));
                }
            }
        }
        for c in &self.checks {
            let _ = writeln!(s, "{}", check_line(c));
        }
        if let Some(r) = &self.suite {
            s.push_str(&suite_text(r));
        }
        if let Some(t) = self.timing_ms {
            let _ = writeln!(s, "timing: {t} ms");
        }
        let _ = writeln!(s, "{}", verdict(self.passed()));
        s
    }
}

pub fn verdict(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

pub fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// `name=value expected=e PASS`
pub fn check_line(c: &Check) -> String {
    match &c.expected {
        Some(e) => format!("{}={} expected={} {}", c.name, c.value, e, verdict(c.passed)),
        None => format!("{}={} {}", c.name, c.value, verdict(c.passed)),
    }
}

pub fn suite_text(r: &SuiteReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "suite {} seed {}", r.level.name(), r.seed);
    for c in &r.criteria {
        let _ = writeln!(s, "{} {}: {} ({} checks)", verdict(c.passed), c.id, c.title, c.checks.len());
        for k in &c.checks {
            let exp = k.expected.as_deref().map(|e| format!(" [expected {e}]")).unwrap_or_default();
            let _ = writeln!(s, "  {} {}: {}{exp}", verdict(k.passed), k.name, k.value);
        }
    }
    s
}

//! One JSON object per command invocation. Keys are sorted, so two runs on
//! the same inputs print identical bytes apart from the `timings_ms` field.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::Serialize;
use serde_json::Value;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Serialize)]
pub struct ReportDocument {
    pub command: String,
    pub inputs: BTreeMap<String, Value>,
    pub results: Value,
    pub pass: bool,
    pub timings_ms: BTreeMap<String, u128>,
    pub tool_version: String,
}

impl ReportDocument {
    pub fn new(command: &str) -> Self {
        ReportDocument {
            command: command.into(),
            inputs: BTreeMap::new(),
            results: Value::Null,
            pass: true,
            timings_ms: BTreeMap::new(),
            tool_version: format!("galrep {TOOL_VERSION}"),
        }
    }

    pub fn input(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        self.inputs.insert(key.into(), serde_json::to_value(v).expect("serializable input"));
        self
    }

    /// Runs `f` and records its wall time under `label`.
    pub fn timed<T>(&mut self, label: &str, f: impl FnOnce() -> T) -> T {
        let t = Instant::now();
        let out = f();
        self.timings_ms.insert(label.into(), t.elapsed().as_millis());
        out
    }

    pub fn set_results(&mut self, v: impl Serialize) {
        self.results = serde_json::to_value(v).expect("serializable results");
    }

    pub fn to_json(&self) -> String {
        // round-trip through Value so nested maps come out key-sorted too
        let v = serde_json::to_value(self).expect("serializable report");
        serde_json::to_string_pretty(&v).unwrap()
    }

    /// The report with timings removed, for determinism comparisons.
    pub fn without_timings(&self) -> String {
        let mut c = self.clone();
        c.timings_ms.clear();
        c.to_json()
    }
}

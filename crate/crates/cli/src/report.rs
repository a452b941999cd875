//! Line-oriented `key=value` reports with an optional JSON block.

use serde_json::{Map, Value};

#[derive(Clone, Debug, Default)]
pub struct Report {
    entries: Vec<(String, Value)>,
    details: Vec<(String, Value)>,
    warnings: Vec<String>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.entries.push((key.into(), value.into()));
        self
    }

    /// An entry shown only in the JSON block.
    pub fn detail(&mut self, key: impl Into<String>, value: impl Into<Value>) -> &mut Self {
        self.details.push((key.into(), value.into()));
        self
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    /// `key=value` lines; with `json`, a blank line and the same entries
    /// as one JSON object.
    pub fn render(&self, json: bool) -> String {
        let mut out = String::new();
        for (k, v) in &self.entries {
            out.push_str(k);
            out.push('=');
            out.push_str(&plain(v));
            out.push('\n');
        }
        if json {
            let obj: Map<String, Value> =
                self.entries.iter().chain(&self.details).cloned().collect();
            out.push('\n');
            out.push_str(
                &serde_json::to_string_pretty(&Value::Object(obj)).expect("json values serialise"),
            );
            out.push('\n');
        }
        out
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::Null => "none".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => items.iter().map(plain).collect::<Vec<_>>().join(","),
        other => other.to_string(),
    }
}

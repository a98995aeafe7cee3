//! Report documents and their plain-text and JSON renderings.

use serde::Serialize;

use super::Format;
use crate::vanest::TraceStep;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Row {
    pub key: String,
    pub value: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportDocument {
    pub tool: String,
    pub command: String,
    pub input: String,
    pub rows: Vec<Row>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub traces: Vec<TraceStep>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl ReportDocument {
    pub fn new(command: &str, input: &str) -> Self {
        Self {
            tool: format!("lgcoh {}", env!("CARGO_PKG_VERSION")),
            command: command.into(),
            input: input.into(),
            rows: Vec::new(),
            traces: Vec::new(),
            timing_ms: None,
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.rows.push(Row { key: key.into(), value: value.into() });
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.rows.iter().find(|r| r.key == key).map(|r| r.value.as_str())
    }

    /// Plain text: a header, one `key = value` line per row (multi-line values
    /// indented below their key), then the trace.
    pub fn to_plain(&self) -> String {
        let mut out = format!("# {}\n# command: {}\n# input: {}\n", self.tool, self.command, self.input);
        for r in &self.rows {
            if r.value.contains('\n') {
                out.push_str(&format!("{} =\n", r.key));
                for line in r.value.lines() {
                    out.push_str(&format!("    {line}\n"));
                }
            } else {
                out.push_str(&format!("{} = {}\n", r.key, r.value));
            }
        }
        if !self.traces.is_empty() {
            out.push_str("trace:\n");
            for (i, t) in self.traces.iter().enumerate() {
                out.push_str(&format!("  {}. {}: {}\n", i + 1, t.label, t.expression));
            }
        }
        if let Some(ms) = self.timing_ms {
            out.push_str(&format!("# time: {ms:.3} ms\n"));
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Plain => self.to_plain(),
            Format::Json => serde_json::to_string_pretty(self).expect("serializable") + "\n",
        }
    }
}

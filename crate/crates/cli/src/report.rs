//! Deterministic report rendering: human tables in text mode, canonical
//! byte-stable JSON in structured mode.

use serde_json::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    Info,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Info => "info",
        }
    }

    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Fail => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputMode {
    Text,
    Structured,
}

/// A finished command result: a machine payload plus pre-rendered text lines.
#[derive(Debug)]
pub struct Report {
    pub command: &'static str,
    pub verdict: Verdict,
    pub payload: Value,
    pub diagnostics: Vec<String>,
    pub text: Vec<String>,
}

impl Report {
    pub fn new(command: &'static str, verdict: Verdict) -> Self {
        Self {
            command,
            verdict,
            payload: Value::Null,
            diagnostics: Vec::new(),
            text: Vec::new(),
        }
    }

    pub fn payload(mut self, payload: Value) -> Self {
        self.payload = payload;
        self
    }

    pub fn diagnostics(mut self, diagnostics: Vec<String>) -> Self {
        self.diagnostics = diagnostics;
        self
    }

    pub fn line(mut self, line: impl Into<String>) -> Self {
        self.text.push(line.into());
        self
    }

    pub fn lines(mut self, lines: impl IntoIterator<Item = String>) -> Self {
        self.text.extend(lines);
        self
    }

    /// Renders to the final byte stream, newline-terminated in both modes.
    pub fn render(&self, mode: OutputMode) -> String {
        match mode {
            OutputMode::Text => {
                let mut out = String::new();
                for line in &self.text {
                    out.push_str(line);
                    out.push('\n');
                }
                if !self.diagnostics.is_empty() {
                    out.push_str("diagnostics:\n");
                    for d in &self.diagnostics {
                        out.push_str("  - ");
                        out.push_str(d);
                        out.push('\n');
                    }
                }
                out.push_str(&format!("verdict: {}\n", self.verdict.as_str()));
                out
            }
            OutputMode::Structured => {
                let body = serde_json::json!({
                    "command": self.command,
                    "verdict": self.verdict.as_str(),
                    "payload": self.payload,
                    "diagnostics": self.diagnostics,
                });
                let mut out = String::new();
                write_canonical(&body, &mut out);
                out.push('\n');
                out
            }
        }
    }
}

/// Canonical serialization: keys in sorted order (the default map is a
/// BTreeMap), reals always in exponent form with 17 significant digits, no
/// whitespace beyond single spaces after separators.
pub fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if let Some(i) = n.as_i64() {
                out.push_str(&i.to_string());
            } else if let Some(u) = n.as_u64() {
                out.push_str(&u.to_string());
            } else {
                out.push_str(&format!("{:.16e}", n.as_f64().expect("number is a float")));
            }
        }
        Value::String(s) => {
            out.push_str(&serde_json::to_string(s).expect("strings always serialize"))
        }
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                out.push_str(&serde_json::to_string(k).expect("strings always serialize"));
                out.push_str(": ");
                write_canonical(item, out);
            }
            out.push('}');
        }
    }
}

/// Left-pads cells so the columns line up; first row is the header.
pub fn aligned_table(rows: &[Vec<String>]) -> Vec<String> {
    if rows.is_empty() {
        return Vec::new();
    }
    let cols = rows.iter().map(|r| r.len()).max().unwrap();
    let mut widths = vec![0usize; cols];
    for row in rows {
        for (i, cell) in row.iter().enumerate() {
            widths[i] = widths[i].max(cell.len());
        }
    }
    rows.iter()
        .map(|row| {
            row.iter()
                .enumerate()
                .map(|(i, cell)| format!("{:>width$}", cell, width = widths[i]))
                .collect::<Vec<_>>()
                .join("  ")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_output_is_sorted_and_fixed_width() {
        let v = serde_json::json!({"z": 1, "a": 0.5, "m": [true, null, "x"]});
        let mut out = String::new();
        write_canonical(&v, &mut out);
        assert_eq!(
            out,
            r#"{"a": 5.0000000000000000e-1, "m": [true, null, "x"], "z": 1}"#
        );
    }

    #[test]
    fn rendering_is_reproducible() {
        let report = Report::new("demo", Verdict::Pass)
            .payload(serde_json::json!({"value": 0.544, "count": 8}));
        assert_eq!(
            report.render(OutputMode::Structured),
            report.render(OutputMode::Structured)
        );
        assert!(report.render(OutputMode::Structured).ends_with('\n'));
    }
}

use serde_json::{json, Map, Value};

/// Outcome classes mapped onto process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success,
    VerificationFailed,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::VerificationFailed => 1,
        }
    }

    pub fn from_pass(pass: bool) -> Self {
        if pass {
            Outcome::Success
        } else {
            Outcome::VerificationFailed
        }
    }
}

pub struct Report {
    pub subcommand: &'static str,
    pub inputs: Value,
    pub results: Value,
    pub verdict: Option<String>,
    pub outcome: Outcome,
}

impl Report {
    pub fn new(subcommand: &'static str, inputs: Value, results: Value) -> Self {
        Self {
            subcommand,
            inputs,
            results,
            verdict: None,
            outcome: Outcome::Success,
        }
    }

    pub fn verdict(mut self, verdict: impl Into<String>, outcome: Outcome) -> Self {
        self.verdict = Some(verdict.into());
        self.outcome = outcome;
        self
    }

    /// Machine-readable form. Object keys are sorted, so output is
    /// byte-stable for equal inputs.
    pub fn to_json(&self) -> String {
        let value = json!({
            "subcommand": self.subcommand,
            "inputs": self.inputs,
            "results": self.results,
            "verdict": self.verdict,
            "exit_code": self.outcome.exit_code(),
        });
        serde_json::to_string_pretty(&value).expect("reports always serialise")
    }

    pub fn to_text(&self) -> String {
        let mut lines = vec![format!("{}:", self.subcommand)];
        flatten("", &self.results, &mut lines);
        if let Some(v) = &self.verdict {
            lines.push(format!("verdict: {v}"));
        }
        lines.join("\n")
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<String>) {
    match v {
        Value::Object(map) => flatten_map(prefix, map, out),
        Value::Array(items) if items.iter().any(|i| i.is_object()) => {
            for (i, item) in items.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), item, out);
            }
        }
        Value::Array(items) => {
            let parts: Vec<String> = items.iter().map(scalar_or_json).collect();
            out.push(format!("  {prefix}: [{}]", parts.join(", ")));
        }
        other => out.push(format!("  {prefix}: {}", scalar(other))),
    }
}

fn scalar_or_json(v: &Value) -> String {
    match v {
        Value::Array(_) | Value::Object(_) => v.to_string(),
        other => scalar(other),
    }
}

fn flatten_map(prefix: &str, map: &Map<String, Value>, out: &mut Vec<String>) {
    for (k, v) in map {
        let key = if prefix.is_empty() {
            k.clone()
        } else {
            format!("{prefix}.{k}")
        };
        flatten(&key, v, out);
    }
}

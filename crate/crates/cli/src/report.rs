//! Report assembly, certificate hashing, and table rendering.

use crate::job::TaskName;
use crate::tasks::Outcome;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};
use std::time::Duration;

pub const TOOL_NAME: &str = "bfunc";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

fn sha256_hex(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

/// Hashes of the raw job text and the canonical result; identical inputs
/// give identical certificates.
pub fn certificate(task: TaskName, outcome: &Outcome, input: &str) -> Value {
    let canonical = serde_json::to_string(&outcome.result).expect("JSON values serialize");
    json!({
        "task": task.as_str(),
        "status": outcome.status.name(),
        "input_sha256": sha256_hex(input.as_bytes()),
        "result_sha256": sha256_hex(canonical.as_bytes()),
        "tool_version": TOOL_VERSION,
    })
}

/// The full report; keys are emitted in sorted order.
pub fn build(task: TaskName, outcome: &Outcome, input: &str, elapsed: Duration) -> Value {
    json!({
        "tool": { "name": TOOL_NAME, "version": TOOL_VERSION },
        "task": task.as_str(),
        "status": outcome.status.name(),
        "exit_code": outcome.status.exit_code(),
        "result": outcome.result,
        "certificate": certificate(task, outcome, input),
        "timing": { "elapsed_ms": elapsed.as_millis() as u64 },
    })
}

fn flatten(prefix: &str, v: &Value, out: &mut Vec<(String, String)>) {
    match v {
        Value::Object(m) => {
            for (k, x) in m {
                let key = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                flatten(&key, x, out);
            }
        }
        Value::Array(a) if a.iter().any(|x| x.is_object()) => {
            for (i, x) in a.iter().enumerate() {
                flatten(&format!("{prefix}[{i}]"), x, out);
            }
        }
        Value::String(s) => out.push((prefix.to_string(), s.clone())),
        other => out.push((prefix.to_string(), other.to_string())),
    }
}

/// Two aligned columns, one leaf value per row.
pub fn table(report: &Value) -> String {
    let mut rows = Vec::new();
    flatten("", report, &mut rows);
    let width = rows.iter().map(|(k, _)| k.chars().count()).max().unwrap_or(0);
    let mut s = String::new();
    for (k, v) in rows {
        s.push_str(&format!("{k:<width$}  {v}\n"));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tasks::Status;

    fn outcome() -> Outcome {
        Outcome {
            status: Status::Success,
            result: json!({ "b": "s + 1", "roots": [{ "root": "-1", "multiplicity": 1 }] }),
        }
    }

    #[test]
    fn certificate_ignores_timing() {
        let a = build(TaskName::Lct, &outcome(), "x", Duration::from_millis(1));
        let b = build(TaskName::Lct, &outcome(), "x", Duration::from_millis(900));
        assert_eq!(a["certificate"], b["certificate"]);
        assert_ne!(a["timing"], b["timing"]);
    }

    #[test]
    fn certificate_tracks_input() {
        let a = certificate(TaskName::Lct, &outcome(), "x");
        let b = certificate(TaskName::Lct, &outcome(), "y");
        assert_ne!(a["input_sha256"], b["input_sha256"]);
        assert_eq!(a["result_sha256"], b["result_sha256"]);
    }

    #[test]
    fn table_flattens_nested_values() {
        let t = table(&json!({ "result": outcome().result }));
        assert!(t.contains("result.roots[0].root"));
        assert!(t.contains("s + 1"));
    }
}

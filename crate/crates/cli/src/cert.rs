//! Certificate assembly and rendering. Verdicts map onto process exit
//! codes; evidence is a JSON value with sorted keys so byte-identical
//! reruns come for free.

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Certified,
    Refuted,
    Inconclusive,
    Unsupported,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Certified => 0,
            Verdict::Refuted => 1,
            Verdict::Inconclusive | Verdict::Unsupported => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::Refuted => "refuted",
            Verdict::Inconclusive => "inconclusive",
            Verdict::Unsupported => "unsupported",
        }
    }
}

/// Input material feeding the digest: the canonicalized argument string
/// plus the raw bytes of every input file, in command-line order.
pub struct InputTrace {
    hasher: Sha256,
}

impl InputTrace {
    pub fn new(pipeline: &str) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(pipeline.as_bytes());
        hasher.update([0]);
        InputTrace { hasher }
    }

    pub fn arg(&mut self, key: &str, value: &str) {
        self.hasher.update(key.as_bytes());
        self.hasher.update([b'=']);
        self.hasher.update(value.as_bytes());
        self.hasher.update([0]);
    }

    pub fn file(&mut self, bytes: &[u8]) {
        self.hasher.update(bytes);
        self.hasher.update([0]);
    }

    pub fn digest(self) -> String {
        format!("sha256:{}", hex::encode(self.hasher.finalize()))
    }
}

pub struct Certificate {
    pub pipeline: String,
    pub input_digest: String,
    pub verdict: Verdict,
    pub evidence: Value,
    pub provenance: Vec<&'static str>,
}

impl Certificate {
    pub fn to_json(&self) -> Value {
        json!({
            "schema_version": SCHEMA_VERSION,
            "tool_version": env!("CARGO_PKG_VERSION"),
            "pipeline": self.pipeline,
            "input_digest": self.input_digest,
            "verdict": self.verdict.as_str(),
            "evidence": self.evidence,
            "provenance": self.provenance,
        })
    }

    pub fn render(&self, tsv: bool) -> String {
        if tsv {
            let mut rows = Vec::new();
            rows.push(("schema_version".to_string(), SCHEMA_VERSION.to_string()));
            rows.push(("tool_version".to_string(), env!("CARGO_PKG_VERSION").to_string()));
            rows.push(("pipeline".to_string(), self.pipeline.clone()));
            rows.push(("input_digest".to_string(), self.input_digest.clone()));
            rows.push(("verdict".to_string(), self.verdict.as_str().to_string()));
            flatten("evidence", &self.evidence, &mut rows);
            rows.push(("provenance".to_string(), self.provenance.join("; ")));
            let mut out = String::new();
            for (k, v) in rows {
                out.push_str(&k);
                out.push('\t');
                out.push_str(&v);
                out.push('\n');
            }
            out
        } else {
            let mut out = serde_json::to_string_pretty(&self.to_json()).expect("serializable");
            out.push('\n');
            out
        }
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("null".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn flatten(prefix: &str, v: &Value, rows: &mut Vec<(String, String)>) {
    if let Some(s) = scalar(v) {
        rows.push((prefix.to_string(), s));
        return;
    }
    match v {
        Value::Array(items) => {
            if let Some(joined) =
                items.iter().map(scalar).collect::<Option<Vec<_>>>().map(|v| v.join(","))
            {
                rows.push((prefix.to_string(), joined));
            } else {
                for (i, item) in items.iter().enumerate() {
                    flatten(&format!("{prefix}.{i}"), item, rows);
                }
            }
        }
        Value::Object(map) => {
            for (k, item) in map {
                flatten(&format!("{prefix}.{k}"), item, rows);
            }
        }
        _ => unreachable!("scalar handled above"),
    }
}

/// Builds an evidence object; plain wrapper keeping call sites terse.
pub fn evidence(fields: Vec<(&str, Value)>) -> Value {
    let mut map = Map::new();
    for (k, v) in fields {
        map.insert(k.to_string(), v);
    }
    Value::Object(map)
}

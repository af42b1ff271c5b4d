//! The JSON report envelope printed by every subcommand.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl InputDigest {
    pub fn of(path: &str, bytes: &[u8]) -> InputDigest {
        let digest = Sha256::digest(bytes);
        let mut hex = String::with_capacity(64);
        for b in digest {
            write!(hex, "{b:02x}").unwrap();
        }
        InputDigest {
            path: path.to_string(),
            sha256: hex,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Ok,
    VerificationFailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Timing {
    pub seconds: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub command: String,
    pub version: String,
    pub status: Status,
    pub inputs: Vec<InputDigest>,
    /// Input element order; it fixes every enumeration and tie-break.
    pub element_order: Vec<String>,
    pub results: Value,
    pub warnings: Vec<String>,
    /// Omitted with `--no-timing` so reports compare byte for byte.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub timing: Option<Timing>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "command: {}", self.command).unwrap();
        writeln!(out, "status: {}", if self.status == Status::Ok { "ok" } else { "verification failed" }).unwrap();
        for i in &self.inputs {
            writeln!(out, "input: {} sha256:{}", i.path, i.sha256).unwrap();
        }
        if let Value::Object(map) = &self.results {
            for (k, v) in map {
                match v {
                    Value::String(s) => writeln!(out, "{k}: {s}").unwrap(),
                    other => writeln!(out, "{k}: {other}").unwrap(),
                }
            }
        }
        for w in &self.warnings {
            writeln!(out, "warning: {w}").unwrap();
        }
        if let Some(t) = &self.timing {
            writeln!(out, "time: {:.3}s", t.seconds).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_of_empty_input() {
        let d = InputDigest::of("x", b"");
        assert_eq!(d.sha256, "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }

    #[test]
    fn round_trip() {
        let r = Report {
            command: "poset check".into(),
            version: "0.1.0".into(),
            status: Status::Ok,
            inputs: vec![InputDigest::of("a.json", b"{}")],
            element_order: vec!["0".into(), "1".into()],
            results: serde_json::json!({"lattice": true}),
            warnings: vec![],
            timing: None,
        };
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back, r);
    }
}

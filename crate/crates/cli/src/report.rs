use serde::{Deserialize, Serialize};
use serde_json::Value;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Unsupported,
    Usage,
}

impl Status {
    pub fn exit_code(self) -> u8 {
        match self {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Inconclusive | Status::Unsupported => 2,
            Status::Usage => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub version: String,
    pub schema: u32,
    pub command: String,
    pub operation: String,
    pub seed: u64,
    pub status: Status,
    pub warnings: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub meta: Meta,
    pub inputs: Value,
    pub results: Vec<Value>,
    pub pass: bool,
}

impl Meta {
    pub fn new(command: &str, operation: &str, seed: u64) -> Meta {
        Meta {
            tool: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            schema: SCHEMA_VERSION,
            command: command.into(),
            operation: operation.into(),
            seed,
            status: Status::Pass,
            warnings: Vec::new(),
            error: None,
            timing_ms: None,
        }
    }
}

/// Status of a result list: any `"pass": false` fails; otherwise any
/// `"inconclusive": true` or `"complete": false` is inconclusive.
pub fn status_of(results: &[Value]) -> Status {
    let flag = |v: &Value, key: &str| v.get(key).and_then(Value::as_bool);
    if results.iter().any(|r| flag(r, "pass") == Some(false)) {
        Status::Fail
    } else if results.iter().any(|r| flag(r, "inconclusive") == Some(true) || flag(r, "complete") == Some(false)) {
        Status::Inconclusive
    } else {
        Status::Pass
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn status_rules() {
        assert_eq!(status_of(&[]), Status::Pass);
        assert_eq!(status_of(&[json!({"pass": true}), json!({"x": 1})]), Status::Pass);
        assert_eq!(status_of(&[json!({"pass": true}), json!({"pass": false, "inconclusive": true})]), Status::Fail);
        assert_eq!(status_of(&[json!({"inconclusive": true})]), Status::Inconclusive);
        assert_eq!(status_of(&[json!({"value": {"complete": false}})]), Status::Pass);
    }
}

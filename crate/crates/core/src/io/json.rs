//! JSON reports, schema 1:
//! `{"schema": 1, "command": ..., "params": {...}, "data": [...]}` with
//! complex numbers as `{"re": x, "im": y}`.

use crate::error::{Error, Result};
use crate::model::ModelParams;
use crate::C64;
use serde_json::{json, Value};
use std::path::Path;

pub const SCHEMA: u32 = 1;

pub fn complex(z: C64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

pub fn params_value(p: &ModelParams) -> Value {
    json!({ "h": p.h, "gamma": p.gamma, "gamma0": p.gamma0, "p": p.p, "s": p.s(), "two_s": p.two_s })
}

/// Non-finite numbers (infinite relaxation times) are written as `null`.
pub fn number(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

pub fn report(command: &str, params: &ModelParams, data: Vec<Value>) -> Value {
    json!({ "schema": SCHEMA, "command": command, "params": params_value(params), "data": data })
}

pub fn to_string(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("JSON values always serialize");
    s.push('\n');
    s
}

pub fn write_json_report(v: &Value, path: &Path) -> Result<()> {
    std::fs::write(path, to_string(v)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn read_json_report(path: &Path) -> Result<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    if v.get("schema").and_then(Value::as_u64) != Some(SCHEMA as u64) {
        return Err(Error::Io(format!("{}: not a schema {SCHEMA} report", path.display())));
    }
    Ok(v)
}

pub fn complex_from(v: &Value) -> Option<C64> {
    Some(C64::new(v.get("re")?.as_f64()?, v.get("im")?.as_f64()?))
}

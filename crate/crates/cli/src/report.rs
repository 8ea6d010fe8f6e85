//! Report assembly and emission: one JSON document per run, with an optional
//! flat CSV export. Keys serialize in sorted order and numbers in shortest
//! round-trip form, so identical configurations produce byte-identical
//! results fields.

use bounds_core::report::LogBase;
use serde::Serialize;
use serde_json::{json, Map, Value};
use std::io::Write;
use std::time::{SystemTime, UNIX_EPOCH};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Serialize)]
pub struct Provenance {
    pub seed: u64,
    pub trials: u64,
    pub timestamp_unix: u64,
    pub artifact_version: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub schema_version: String,
    pub command: String,
    pub inputs: Value,
    pub results: Value,
    pub provenance: Provenance,
}

impl Report {
    pub fn new(command: &str, inputs: Value, results: Value, seed: u64, trials: u64) -> Self {
        Report {
            schema_version: SCHEMA_VERSION.to_string(),
            command: command.to_string(),
            inputs,
            results,
            provenance: Provenance {
                seed,
                trials,
                timestamp_unix: SystemTime::now()
                    .duration_since(UNIX_EPOCH)
                    .map(|d| d.as_secs())
                    .unwrap_or(0),
                artifact_version: env!("CARGO_PKG_VERSION").to_string(),
            },
        }
    }
}

/// An information quantity with its base tag attached. Quantities with
/// mismatched bases refuse to combine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tagged {
    pub value: f64,
    pub base: LogBase,
}

impl Tagged {
    pub fn nats(value: f64) -> Self {
        Tagged {
            value,
            base: LogBase::E,
        }
    }

    pub fn bits(value: f64) -> Self {
        Tagged {
            value,
            base: LogBase::Two,
        }
    }

    pub fn to_json(self) -> Value {
        json!({ "value": self.value, "base": match self.base { LogBase::Two => "two", LogBase::E => "e" } })
    }
}

/// Sum of tagged quantities; errors on mixed bases instead of converting
/// silently.
pub fn sum_tagged(values: &[Tagged]) -> Result<Tagged, String> {
    let first = values
        .first()
        .ok_or_else(|| "cannot sum an empty list of tagged quantities".to_string())?;
    let mut total = 0.0;
    for v in values {
        if v.base != first.base {
            return Err(format!(
                "refusing to sum mismatched bases: {} vs {}",
                first.base.label(),
                v.base.label()
            ));
        }
        total += v.value;
    }
    Ok(Tagged {
        value: total,
        base: first.base,
    })
}

/// Convert every tagged quantity in a results tree to the requested base
/// (presentation only).
pub fn present_in_base(value: &mut Value, base: LogBase) {
    match value {
        Value::Object(map) => {
            let is_tagged = map.len() == 2
                && map.get("value").map(Value::is_number).unwrap_or(false)
                && map.get("base").map(Value::is_string).unwrap_or(false);
            if is_tagged {
                let from = match map["base"].as_str() {
                    Some("two") => LogBase::Two,
                    Some("e") => LogBase::E,
                    _ => return,
                };
                let v = map["value"].as_f64().unwrap_or(f64::NAN);
                let converted = bounds_core::report::convert_base(v, from, base);
                map.insert("value".into(), json!(converted));
                map.insert(
                    "base".into(),
                    json!(match base {
                        LogBase::Two => "two",
                        LogBase::E => "e",
                    }),
                );
            } else {
                for (_, v) in map.iter_mut() {
                    present_in_base(v, base);
                }
            }
        }
        Value::Array(items) => {
            for v in items {
                present_in_base(v, base);
            }
        }
        _ => {}
    }
}

/// Serialize the report as a newline-terminated JSON document.
pub fn to_json_string(report: &Report) -> String {
    let mut s = serde_json::to_string_pretty(report).expect("reports are serializable");
    s.push('\n');
    s
}

/// Flatten the results tree into CSV rows `path,value,units,base`.
pub fn to_csv_string(report: &Report) -> String {
    let mut out = String::from("path,value,units,base\n");
    flatten("results", &report.results, &mut out);
    out
}

fn flatten(path: &str, value: &Value, out: &mut String) {
    match value {
        Value::Object(map) => {
            if let Some((v, base)) = tagged_parts(map) {
                let units = match base {
                    "two" => "bits",
                    "e" => "nats",
                    _ => "",
                };
                out.push_str(&format!("{path},{v},{units},{base}\n"));
                return;
            }
            for (k, v) in map {
                flatten(&format!("{path}.{k}"), v, out);
            }
        }
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&format!("{path}[{i}]"), v, out);
            }
        }
        Value::Number(n) => out.push_str(&format!("{path},{n},,\n")),
        Value::Bool(b) => out.push_str(&format!("{path},{b},,\n")),
        Value::String(s) => out.push_str(&format!("{path},{},,\n", s.replace(',', ";"))),
        Value::Null => {}
    }
}

fn tagged_parts(map: &Map<String, Value>) -> Option<(f64, &str)> {
    if map.len() == 2 {
        let v = map.get("value")?.as_f64()?;
        let b = map.get("base")?.as_str()?;
        return Some((v, b));
    }
    None
}

/// Emit the report to the configured sinks.
pub fn emit(
    report: &Report,
    json_path: Option<&std::path::Path>,
    csv_path: Option<&std::path::Path>,
    stdout: bool,
) -> std::io::Result<()> {
    let json = to_json_string(report);
    if stdout {
        std::io::stdout().write_all(json.as_bytes())?;
    }
    if let Some(path) = json_path {
        std::fs::write(path, &json)?;
    }
    if let Some(path) = csv_path {
        std::fs::write(path, to_csv_string(report))?;
    }
    Ok(())
}

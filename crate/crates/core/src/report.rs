//! Shared report types: named bound values with explicit log-base tags.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Base of the logarithm a quantity was computed in. Information quantities
/// never mix bases silently; conversion happens only at presentation time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LogBase {
    Two,
    E,
}

impl LogBase {
    pub fn label(self) -> &'static str {
        match self {
            LogBase::Two => "bits",
            LogBase::E => "nats",
        }
    }
}

/// Convert a value between log bases.
pub fn convert_base(value: f64, from: LogBase, to: LogBase) -> f64 {
    match (from, to) {
        (LogBase::Two, LogBase::E) => value * std::f64::consts::LN_2,
        (LogBase::E, LogBase::Two) => value / std::f64::consts::LN_2,
        _ => value,
    }
}

/// A named bound value together with the parameters that produced it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenBoundReport {
    pub bound_name: String,
    pub value: f64,
    pub log_base: LogBase,
    pub parameters: BTreeMap<String, f64>,
}

impl GenBoundReport {
    pub fn new(name: &str, value: f64, base: LogBase) -> Self {
        GenBoundReport {
            bound_name: name.to_string(),
            value,
            log_base: base,
            parameters: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: f64) -> Self {
        self.parameters.insert(key.to_string(), value);
        self
    }
}

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
}

impl McEstimate {
    pub fn upper3(&self) -> f64 {
        self.mean + 3.0 * self.std_error
    }

    pub fn lower3(&self) -> f64 {
        self.mean - 3.0 * self.std_error
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_conversion_round_trips() {
        let bits = 4.19;
        let nats = convert_base(bits, LogBase::Two, LogBase::E);
        assert!((nats - bits * std::f64::consts::LN_2).abs() < 1e-15);
        assert!((convert_base(nats, LogBase::E, LogBase::Two) - bits).abs() < 1e-12);
    }
}

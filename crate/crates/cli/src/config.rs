//! Common run options: seed, trials, sinks, and presentation base. Values
//! resolve in precedence order flag > config file > environment > default.

use bounds_core::report::LogBase;
use serde::Deserialize;
use std::path::PathBuf;

/// Strict config-file schema: unknown keys are rejected rather than ignored.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub trials: Option<u64>,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub base: Option<String>,
}

/// Resolved common options.
#[derive(Debug, Clone)]
pub struct CommonOpts {
    pub seed: u64,
    pub trials: Option<u64>,
    pub json: Option<PathBuf>,
    pub csv: Option<PathBuf>,
    pub base: Option<LogBase>,
}

pub fn parse_base(name: &str) -> Result<LogBase, String> {
    match name {
        "bits" => Ok(LogBase::Two),
        "nats" => Ok(LogBase::E),
        other => Err(format!("unknown base {other:?}; expected bits or nats")),
    }
}

/// Merge flags over a configuration file over the BOUNDS_SEED environment
/// variable over defaults.
pub fn resolve(
    seed_flag: Option<u64>,
    trials_flag: Option<u64>,
    json_flag: Option<PathBuf>,
    csv_flag: Option<PathBuf>,
    base_flag: Option<String>,
    file: Option<FileConfig>,
) -> Result<CommonOpts, String> {
    let file = file.unwrap_or_default();
    let env_seed = std::env::var("BOUNDS_SEED")
        .ok()
        .map(|s| {
            s.parse::<u64>()
                .map_err(|_| format!("BOUNDS_SEED must be a 64-bit integer, got {s:?}"))
        })
        .transpose()?;
    let base = match base_flag.or(file.base) {
        Some(name) => Some(parse_base(&name)?),
        None => None,
    };
    Ok(CommonOpts {
        seed: seed_flag.or(file.seed).or(env_seed).unwrap_or(0),
        trials: trials_flag.or(file.trials),
        json: json_flag.or(file.json),
        csv: csv_flag.or(file.csv),
        base,
    })
}

pub fn load_file(path: &std::path::Path) -> Result<FileConfig, String> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
    serde_json::from_str(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_take_precedence_over_file() {
        let file = FileConfig {
            seed: Some(5),
            trials: Some(100),
            json: None,
            csv: None,
            base: Some("nats".into()),
        };
        let opts = resolve(Some(9), None, None, None, None, Some(file)).unwrap();
        assert_eq!(opts.seed, 9);
        assert_eq!(opts.trials, Some(100));
        assert_eq!(opts.base, Some(LogBase::E));
    }

    #[test]
    fn unknown_config_keys_are_rejected() {
        let parsed: Result<FileConfig, _> = serde_json::from_str(r#"{"sed": 3}"#);
        assert!(parsed.is_err());
    }

    #[test]
    fn base_names_parse() {
        assert_eq!(parse_base("bits").unwrap(), LogBase::Two);
        assert_eq!(parse_base("nats").unwrap(), LogBase::E);
        assert!(parse_base("trits").is_err());
    }
}

use std::collections::BTreeMap;
use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::args::{ChooseStrategy, Format, Generator};
use crate::CliError;

/// Option values read from a `--config` file. Keys are the long flag names
/// with underscores.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,

    pub corpus: Option<PathBuf>,
    pub candidates: Option<PathBuf>,
    pub decisions: Option<PathBuf>,
    pub indicators: Option<PathBuf>,
    pub p: Option<f64>,
    pub cue: Option<String>,
    pub quota: Option<f64>,

    pub a: Option<String>,
    pub b: Option<String>,
    pub strategy: Option<ChooseStrategy>,
    pub cue_order: Option<String>,
    pub delta: Option<f64>,
    pub mode: Option<String>,
    pub weights: Option<String>,

    pub env: Option<PathBuf>,
    pub generate: Option<Generator>,
    pub objects: Option<usize>,
    pub correlations: Option<String>,
    pub train_fraction: Option<f64>,
    pub repetitions: Option<usize>,
    pub strategies: Option<String>,

    pub input: Option<PathBuf>,
    pub length: Option<usize>,
    pub baseline: Option<f64>,
    pub multiplier: Option<f64>,
    pub streak_min: Option<usize>,
    pub streak_max: Option<usize>,
    pub sigma: Option<f64>,
    pub min_len: Option<usize>,
    pub penalty: Option<f64>,

    pub papers: Option<u64>,
    pub reviews: Option<u64>,
    pub panel: Option<u64>,
    pub days: Option<u64>,
}

pub fn parse_config(text: &str) -> Result<FileConfig, CliError> {
    toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
}

/// The effective configuration of one run, defaults included. Echoed at the
/// top of every report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub inputs: BTreeMap<&'static str, String>,
    pub out: Option<String>,
    pub parameters: BTreeMap<&'static str, Value>,
}

impl RunConfig {
    pub fn new(command: &'static str, seed: u64) -> Self {
        RunConfig {
            tool: "bbh",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            inputs: BTreeMap::new(),
            out: None,
            parameters: BTreeMap::new(),
        }
    }

    pub fn input(&mut self, role: &'static str, path: &std::path::Path) {
        self.inputs.insert(role, path.display().to_string());
    }

    pub fn param(&mut self, key: &'static str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("parameters serialize to JSON");
        self.parameters.insert(key, v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn key_value_file() {
        let c = parse_config(
            "seed = 7\ncue_order = \"highly_cited_papers,citations:lower\"\n\
             delta = 1.5\nmode = \"relative\"\nweights = \"a=1,b=2\"\nstrategy = \"weighted-linear\"\n\
             format = \"machine\"\n",
        )
        .unwrap();
        assert_eq!(c.seed, Some(7));
        assert_eq!(c.delta, Some(1.5));
        assert_eq!(c.strategy, Some(ChooseStrategy::WeightedLinear));
        assert_eq!(c.format, Some(Format::Machine));
        assert_eq!(parse_config("").unwrap(), FileConfig::default());
    }

    #[test]
    fn unknown_and_mistyped_keys_fail() {
        assert!(parse_config("sede = 1\n").is_err());
        assert!(parse_config("seed = \"one\"\n").is_err());
        assert!(parse_config("seed = -1\n").is_err());
        assert!(parse_config("strategy = \"guess\"\n").is_err());
    }
}

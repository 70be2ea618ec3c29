//! Scenario configuration files.
//!
//! ```toml
//! framework = "s01"            # spm | spm-pair | s01 | spp | ssep, or a run-file id
//! enumeration = [4, 11, 9]     # s01 and ssep only
//! other = []                   # ssep only
//! strategies = ["SPLIT(0)"]
//! universe = "split.universe"  # relative to the config file
//! horizon = 12
//! quiescence = 4
//! search_bound = 64            # optional, bytes per encoded item
//! out = "split.run"            # optional, relative to the config file
//! ```

use std::env;
use std::path::{Path, PathBuf};

use priority_core::frameworks::FrameworkSpec;
use priority_core::scheduler::{RunConfig, StrategyKind, DEFAULT_SEARCH_BOUND};
use serde::Deserialize;

pub const SEARCH_BOUND_VAR: &str = "PRIORITY_ENGINE_SEARCH_BOUND";

#[derive(Clone, Debug, PartialEq, Eq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub framework: String,
    #[serde(default)]
    pub enumeration: Vec<u64>,
    #[serde(default)]
    pub other: Vec<u64>,
    pub strategies: Vec<String>,
    pub universe: Option<PathBuf>,
    pub horizon: usize,
    pub quiescence: usize,
    pub search_bound: Option<usize>,
    pub out: Option<PathBuf>,
}

impl ScenarioConfig {
    pub fn parse(text: &str) -> Result<Self, String> {
        let config: ScenarioConfig = toml::from_str(text).map_err(|e| e.to_string())?;
        config.validate()?;
        Ok(config)
    }

    fn validate(&self) -> Result<(), String> {
        if self.quiescence == 0 {
            return Err("quiescence must be at least 1".into());
        }
        if self.horizon < self.quiescence {
            return Err(format!("horizon {} is below quiescence {}", self.horizon, self.quiescence));
        }
        if self.search_bound == Some(0) {
            return Err("search_bound must be at least 1".into());
        }
        self.framework_spec()?;
        self.kinds()?;
        Ok(())
    }

    pub fn framework_spec(&self) -> Result<FrameworkSpec, String> {
        let needs_none = |spec: FrameworkSpec| {
            if self.enumeration.is_empty() && self.other.is_empty() {
                Ok(spec)
            } else {
                Err(format!("framework {} takes no enumeration", self.framework))
            }
        };
        match self.framework.as_str() {
            "spm" => needs_none(FrameworkSpec::Spm),
            "spm-pair" => needs_none(FrameworkSpec::SpmPair),
            "spp" => needs_none(FrameworkSpec::Spp),
            "s01" if self.other.is_empty() => Ok(FrameworkSpec::S01(self.enumeration.clone())),
            "s01" => Err("framework s01 takes no `other` list".into()),
            "ssep" => Ok(FrameworkSpec::Ssep { enumeration: self.enumeration.clone(), other: self.other.clone() }),
            id => FrameworkSpec::parse_id(id).map_err(|e| e.to_string()),
        }
    }

    pub fn kinds(&self) -> Result<Vec<StrategyKind>, String> {
        self.strategies.iter().map(|s| s.parse()).collect()
    }

    /// Replaces the horizon; quiescence shrinks with it so that a short
    /// horizon reports "not stabilized" rather than a config error.
    pub fn override_horizon(&mut self, horizon: usize) -> Result<(), String> {
        if horizon == 0 {
            return Err("horizon must be at least 1".into());
        }
        self.horizon = horizon;
        self.quiescence = self.quiescence.min(horizon);
        Ok(())
    }

    pub fn run_config(&self, default_search_bound: usize) -> RunConfig {
        RunConfig {
            horizon: self.horizon,
            quiescence: self.quiescence,
            search_bound: self.search_bound.unwrap_or(default_search_bound),
        }
    }

    pub fn universe_path(&self, config_dir: &Path) -> Option<PathBuf> {
        self.universe.as_ref().map(|p| config_dir.join(p))
    }

    pub fn out_path(&self, config_dir: &Path) -> Option<PathBuf> {
        self.out.as_ref().map(|p| config_dir.join(p))
    }
}

/// Search bound used when a config leaves it out.
pub fn default_search_bound() -> Result<usize, String> {
    match env::var(SEARCH_BOUND_VAR) {
        Ok(text) => match text.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(format!("{SEARCH_BOUND_VAR}={text:?} is not a positive integer")),
        },
        Err(env::VarError::NotPresent) => Ok(DEFAULT_SEARCH_BOUND),
        Err(e) => Err(format!("{SEARCH_BOUND_VAR}: {e}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SPLIT: &str = r#"
        framework = "s01"
        enumeration = [4, 11, 9]
        strategies = ["SPLIT(0)", "split(1)"]
        universe = "u.txt"
        horizon = 3
        quiescence = 1
    "#;

    #[test]
    fn parses_and_resolves_paths() {
        let config = ScenarioConfig::parse(SPLIT).unwrap();
        assert_eq!(config.framework_spec().unwrap(), FrameworkSpec::S01(vec![4, 11, 9]));
        assert_eq!(config.kinds().unwrap(), vec![StrategyKind::Split(0), StrategyKind::Split(1)]);
        assert_eq!(config.universe_path(Path::new("/d")), Some(PathBuf::from("/d/u.txt")));
        assert_eq!(config.run_config(64).search_bound, 64);
    }

    #[test]
    fn rejects_bad_shapes() {
        let cases = [
            SPLIT.replace("quiescence = 1", "quiescence = 0"),
            SPLIT.replace("horizon = 3", "horizon = 0"),
            SPLIT.replace("SPLIT(0)", "SPLIT(x)"),
            SPLIT.replace("\"s01\"", "\"nope\""),
            SPLIT.replace("\"s01\"", "\"spm\""),
            format!("{SPLIT}\ncolour = 3"),
        ];
        for text in cases {
            assert!(ScenarioConfig::parse(&text).is_err(), "{text}");
        }
    }

    #[test]
    fn horizon_override_shrinks_quiescence() {
        let mut config = ScenarioConfig::parse(&SPLIT.replace("quiescence = 1", "quiescence = 3")).unwrap();
        config.override_horizon(1).unwrap();
        assert_eq!((config.horizon, config.quiescence), (1, 1));
        assert!(config.override_horizon(0).is_err());
    }
}

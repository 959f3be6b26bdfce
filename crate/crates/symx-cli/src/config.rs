//! Experiment configuration, loadable from TOML or JSON.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use symx::hubbard::LatticeSpec;
use symx::noise::NoiseKind;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum LatticeChoice {
    #[serde(rename = "2x2")]
    TwoByTwo,
    #[serde(rename = "2x3")]
    TwoByThree,
}

impl LatticeChoice {
    pub fn spec(self) -> LatticeSpec {
        match self {
            LatticeChoice::TwoByTwo => LatticeSpec::two_by_two(),
            LatticeChoice::TwoByThree => LatticeSpec::two_by_three(),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            LatticeChoice::TwoByTwo => "2x2",
            LatticeChoice::TwoByThree => "2x3",
        }
    }
}

impl std::str::FromStr for LatticeChoice {
    type Err = CliError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "2x2" => Ok(LatticeChoice::TwoByTwo),
            "2x3" => Ok(LatticeChoice::TwoByThree),
            other => Err(CliError::Config(format!("unknown lattice '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub lattice: LatticeChoice,
    pub noise: NoiseKind,
    /// Mean-circuit-error-count grid, ascending.
    pub mu_grid: Vec<f64>,
    /// Candidate circuit seeds; the energy filter decides acceptance.
    pub seeds: Vec<u64>,
    /// Keep circuits with |ideal energy| above this.
    pub energy_filter: f64,
    /// Named expansion schemes (see the scheme-name grammar in the README).
    pub schemes: Vec<String>,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            lattice: LatticeChoice::TwoByTwo,
            noise: NoiseKind::Depolarising2Q,
            mu_grid: vec![0.5, 1.0, 1.5, 2.0],
            seeds: (0..32).collect(),
            energy_filter: 0.5,
            schemes: vec![
                "unmit".into(),
                "ver-{down}".into(),
                "ver-{tot}".into(),
                "ver-full".into(),
                "exp-{down}".into(),
                "exp-{tot}".into(),
                "exp-{down,tot}".into(),
                "exp-{up,down,tot}".into(),
            ],
            out_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let config: ExperimentConfig = match path.extension().and_then(|e| e.to_str()) {
            Some("json") => serde_json::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
            _ => toml::from_str(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        if self.mu_grid.is_empty() {
            return Err(CliError::Config("mu grid must be non-empty".into()));
        }
        if self.mu_grid.windows(2).any(|w| w[1] <= w[0]) {
            return Err(CliError::Config("mu grid must be strictly ascending".into()));
        }
        if self.mu_grid.iter().any(|m| *m < 0.0) {
            return Err(CliError::Config("mu values must be non-negative".into()));
        }
        let mut sorted = self.seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != self.seeds.len() {
            return Err(CliError::Config("seeds must be distinct".into()));
        }
        if self.seeds.is_empty() {
            return Err(CliError::Config("need at least one seed".into()));
        }
        if self.schemes.is_empty() {
            return Err(CliError::Config("need at least one scheme".into()));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toml_round_trip_and_validation() {
        let config = ExperimentConfig::default();
        let text = toml::to_string(&config).unwrap();
        let back: ExperimentConfig = toml::from_str(&text).unwrap();
        assert_eq!(back.schemes, config.schemes);
        assert_eq!(back.lattice, config.lattice);
        back.validate().unwrap();
    }

    #[test]
    fn bad_grids_rejected() {
        let mut config = ExperimentConfig::default();
        config.mu_grid = vec![1.0, 0.5];
        assert!(config.validate().is_err());
        config.mu_grid = vec![];
        assert!(config.validate().is_err());
        config.mu_grid = vec![1.0];
        config.seeds = vec![3, 3];
        assert!(config.validate().is_err());
    }
}

use clap::ValueEnum;
use serde::Serialize;
use ssum_core::repsolver::{Preset, SolverConfig};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Algorithm {
    Bruteforce,
    Mitm,
    Ss,
    Rep,
    RepP4,
    Budget,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bruteforce => "bruteforce",
            Algorithm::Mitm => "mitm",
            Algorithm::Ss => "ss",
            Algorithm::Rep => "rep",
            Algorithm::RepP4 => "rep-p4",
            Algorithm::Budget => "budget",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum Format {
    #[default]
    Text,
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Default)]
pub enum PresetName {
    Paper,
    #[default]
    Desk,
}

impl PresetName {
    pub fn name(self) -> &'static str {
        match self {
            PresetName::Paper => "paper",
            PresetName::Desk => "desk",
        }
    }
}

impl From<PresetName> for Preset {
    fn from(p: PresetName) -> Self {
        match p {
            PresetName::Paper => Preset::Paper,
            PresetName::Desk => Preset::Desk,
        }
    }
}

/// Per-constant replacements for the preset values.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub mu: Option<f64>,
    pub lambda0: Option<f64>,
    pub eps0: Option<f64>,
    /// Block count `c` of the sparsity OV engine.
    pub blocks: Option<usize>,
    pub crossover: Option<usize>,
    pub product_cap: Option<usize>,
    pub prime_scale: Option<f64>,
    pub residue_trials: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub seed: u64,
    /// Outer repetitions `R` for the solvers, row count for experiments.
    pub trials: Option<usize>,
    pub preset: PresetName,
    pub overrides: Overrides,
    pub format: Format,
    /// Space budget exponent; only meaningful for [`Algorithm::Budget`].
    pub budget_exponent: Option<f64>,
    /// Adds wall time to records, which makes them non-reproducible.
    pub timing: bool,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            algorithm: Algorithm::Rep,
            seed: 0,
            trials: None,
            preset: PresetName::Desk,
            overrides: Overrides::default(),
            format: Format::Text,
            budget_exponent: None,
            timing: false,
        }
    }
}

impl ExperimentConfig {
    /// Preset constants with the overrides applied, checked against their ranges.
    pub fn solver_config(&self) -> Result<SolverConfig, CliError> {
        let mut c = match self.preset {
            PresetName::Paper => SolverConfig::paper(),
            PresetName::Desk => SolverConfig::desk(),
        };
        let o = &self.overrides;
        if let Some(v) = o.mu {
            c.mu = v;
        }
        if let Some(v) = o.lambda0 {
            c.lambda0 = v;
        }
        if let Some(v) = o.eps0 {
            c.eps0 = v;
        }
        if let Some(v) = o.blocks {
            c.blocks = v;
        }
        if let Some(v) = o.crossover {
            c.crossover = v;
        }
        if let Some(v) = o.product_cap {
            c.product_cap = v;
        }
        if let Some(v) = o.prime_scale {
            c.prime_scale = v;
        }
        if let Some(v) = o.residue_trials {
            c.residue_trials = v;
        }
        if let Some(r) = self.trials {
            c.repetitions = r;
        }
        if c.crossover == 0 || c.product_cap == 0 {
            return Err(CliError::Usage("crossover and cap must be positive".into()));
        }
        c.validate().map_err(|e| CliError::Usage(e.to_string()))?;
        match (self.algorithm, self.budget_exponent) {
            (Algorithm::Budget, None) => return Err(CliError::Usage("--algo budget needs --budget".into())),
            (a, Some(_)) if a != Algorithm::Budget => {
                return Err(CliError::Usage(format!("--budget does not apply to --algo {}", a.name())))
            }
            _ => {}
        }
        Ok(c)
    }
}

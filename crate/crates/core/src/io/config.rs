//! JSON run configurations. Every field has a default, so a config file only
//! needs the values it changes; command-line flags override the file.

use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::montecarlo::BumpSpec;
use crate::sampling::MAX_LEVELS;
use crate::verify::{EtaVariant, ParamSet};

pub fn load_json<T: DeserializeOwned>(path: impl AsRef<Path>) -> Result<T> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
}

fn check_common(levels: u32, resolution: usize, n_values: &[i32]) -> Result<()> {
    if levels > MAX_LEVELS {
        return Err(Error::LevelsOutOfRange {
            got: levels,
            max: MAX_LEVELS,
        });
    }
    if resolution < 8 {
        return Err(Error::Config("resolution must be >= 8".into()));
    }
    if n_values.is_empty() || n_values.iter().any(|&n| n < 1) {
        return Err(Error::Config(
            "n_values must be nonempty and positive".into(),
        ));
    }
    Ok(())
}

/// One path: winding field, heatmap and normalized areas.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SimulateConfig {
    pub seed: u64,
    pub levels: u32,
    pub resolution: usize,
    pub n_values: Vec<i32>,
    pub pgm_scale: u32,
    pub mark_curve: bool,
}

impl Default for SimulateConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            levels: 16,
            resolution: 1024,
            n_values: vec![1, 2, 4, 8, 16],
            pgm_scale: 8,
            mark_curve: false,
        }
    }
}

impl SimulateConfig {
    pub fn validate(&self) -> Result<()> {
        check_common(self.levels, self.resolution, &self.n_values)?;
        if self.pgm_scale == 0 {
            return Err(Error::Config("pgm_scale must be >= 1".into()));
        }
        Ok(())
    }
}

/// Decomposition, additivity and discrepancy checks on one path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    pub seed: u64,
    pub levels: u32,
    pub resolution: usize,
    /// Threshold `N` of the sandwich.
    pub n: i32,
    /// Subdivision count `T`.
    pub t: usize,
    /// Pair threshold `M`.
    pub m: i32,
    /// Thresholds for the discrepancy table.
    pub n_values: Vec<i32>,
    pub params: ParamSet,
    pub eta_variant: EtaVariant,
    pub bump: BumpSpec,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            seed: 1,
            levels: 14,
            resolution: 1024,
            n: 12,
            t: 2,
            m: 2,
            n_values: vec![4, 8, 16],
            params: ParamSet::default(),
            eta_variant: EtaVariant::default(),
            bump: BumpSpec::default(),
        }
    }
}

impl VerifyConfig {
    pub fn validate(&self) -> Result<()> {
        check_common(self.levels, self.resolution, &self.n_values)?;
        if self.t == 0 || self.m < 1 || self.n < 1 {
            return Err(Error::Config("N, T and M must be >= 1".into()));
        }
        if (self.t as i64) * (self.m as i64 + 1) >= self.n as i64 {
            return Err(Error::Precondition(format!(
                "T(M+1) = {} must be < N = {}",
                self.t as i64 * (self.m as i64 + 1),
                self.n
            )));
        }
        let steps = 1usize << self.levels;
        if !steps.is_multiple_of(self.t) {
            return Err(Error::NotDivisible {
                parts: self.t,
                steps,
            });
        }
        if self.bump.width.is_nan() || self.bump.width <= 0.0 {
            return Err(Error::Config("bump width must be positive".into()));
        }
        self.params.ensure_valid()
    }
}

/// Pairs of independent paths from the origin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConjectureConfig {
    pub master_seed: u64,
    pub replicates: usize,
    pub levels: u32,
    pub resolution: usize,
    pub n_values: Vec<i32>,
    #[serde(skip_serializing)]
    pub threads: usize,
}

impl Default for ConjectureConfig {
    fn default() -> Self {
        Self {
            master_seed: 1,
            replicates: 16,
            levels: 16,
            resolution: 1024,
            n_values: vec![2, 4, 8, 16],
            threads: 1,
        }
    }
}

impl ConjectureConfig {
    pub fn validate(&self) -> Result<()> {
        check_common(self.levels, self.resolution, &self.n_values)?;
        if self.replicates == 0 {
            return Err(Error::Config("replicates must be >= 1".into()));
        }
        Ok(())
    }
}

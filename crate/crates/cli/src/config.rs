//! Run configuration read from a TOML file. Every key has a default.

use std::path::Path;

use fracwave::blowup::AmplitudeSweep;
use fracwave::data::DataPreset;
use fracwave::duhamel::StepperConfig;
use fracwave::group::GroupId;
use serde::Deserialize;

use crate::CliError;

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub group: GroupId,
    /// Spectral truncation `Λ`.
    pub truncation: f64,
    pub alpha: f64,
    pub p: f64,
    pub epsilon: f64,
    /// End time of `solve` and `kg-solve`.
    pub t_end: f64,
    /// Trajectory rows are written every this many steps.
    pub sample_every: usize,
    pub seed: Option<u64>,
    pub u0: DataPreset,
    pub u1: DataPreset,
    pub mass: DataPreset,
    pub stepper: StepperConfig,
    pub sweep: AmplitudeSweep,
    pub kato: KatoConfig,
    pub verify: VerifyConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: GroupId::Torus1,
            truncation: 4.0,
            alpha: 0.5,
            p: 2.0,
            epsilon: 1.0,
            t_end: 1.0,
            sample_every: 1,
            seed: None,
            u0: DataPreset::Constant { value: 1.0 },
            u1: DataPreset::Zero,
            mass: DataPreset::Constant { value: 1.0 },
            stepper: StepperConfig::default(),
            sweep: AmplitudeSweep {
                eps_min: 2f64.powi(-10),
                eps_max: 0.125,
                count: 8,
            },
            kato: KatoConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct KatoConfig {
    pub p: f64,
    pub a: f64,
    pub q: f64,
    #[serde(rename = "B")]
    pub big_b: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "T0")]
    pub t0: f64,
    #[serde(rename = "F0")]
    pub f0: f64,
    #[serde(rename = "F1")]
    pub f1: f64,
    /// Size constant for the `T₁ ≥ C₀ A^{−(p−1)/(2M)}` condition.
    #[serde(rename = "C0")]
    pub c0: f64,
    pub threshold: f64,
    pub horizon: f64,
}

impl Default for KatoConfig {
    fn default() -> Self {
        KatoConfig {
            p: 2.0,
            a: 1.0,
            q: 0.0,
            big_b: 1.0,
            r: 1.0,
            t0: 1.0,
            f0: 1.0,
            f1: 1.0,
            c0: 0.0,
            threshold: 1e8,
            horizon: 1e4,
        }
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct VerifyConfig {
    /// Random fields per transform check.
    pub fields: usize,
    /// Step of the energy-drift check.
    pub energy_h: f64,
    pub energy_tol: f64,
    /// Held-out randomized parameter sets per Kato cell.
    pub kato_instances: usize,
    /// Instances per cell used to calibrate `C₀`.
    pub kato_calibration: usize,
    pub jensen_fields: usize,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            fields: 20,
            energy_h: 1e-3,
            energy_tol: 1e-6,
            kato_instances: 40,
            kato_calibration: 2000,
            jensen_fields: 1000,
        }
    }
}

fn is_random(p: &DataPreset) -> bool {
    matches!(p, DataPreset::Random { .. } | DataPreset::Range { .. })
}

impl RunConfig {
    pub fn load(path: Option<&Path>, seed: Option<u64>) -> Result<Self, CliError> {
        let mut cfg = match path {
            None => RunConfig::default(),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    CliError::Usage(format!("cannot read config {}: {e}", p.display()))
                })?;
                toml::from_str(&text)
                    .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", p.display())))?
            }
        };
        if seed.is_some() {
            cfg.seed = seed;
        }
        Ok(cfg)
    }

    /// Seed for data generation; required when any preset is random.
    pub fn data_seed(&self, presets: &[&DataPreset]) -> Result<u64, CliError> {
        match self.seed {
            Some(s) => Ok(s),
            None if presets.iter().any(|p| is_random(p)) => Err(CliError::Usage(
                "random data presets need a seed (config `seed` or --seed)".into(),
            )),
            None => Ok(0),
        }
    }
}

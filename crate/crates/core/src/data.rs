//! Seeded initial data and mass fields.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{GridField, Harmonics, SpectralField};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Complex coefficients uniform in the unit square, damped by
/// `(1 + λ²)^{-decay/2}`.
pub fn random_spectral(harmonics: &Harmonics, rng: &mut impl Rng, decay: f64) -> SpectralField {
    let mut f = harmonics.zero_spectral();
    for i in 0..harmonics.modes().len() {
        let damp = (1.0 + harmonics.modes().modes()[i].lambda_sq).powf(-decay / 2.0);
        for c in f.block_mut(i) {
            *c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * damp;
        }
    }
    f
}

/// Real band-limited field with grid maximum 1.
pub fn random_real(harmonics: &Harmonics, rng: &mut impl Rng, decay: f64) -> Result<GridField> {
    loop {
        let g = harmonics.inverse(&random_spectral(harmonics, rng, decay))?;
        let re = GridField::from_real(&g.real_parts());
        let m = re.max_abs();
        if m > 0.0 {
            return Ok(re.scaled(1.0 / m));
        }
    }
}

/// Band-limited field with values in `[lo, hi]`.
pub fn random_in_range(
    harmonics: &Harmonics,
    rng: &mut impl Rng,
    decay: f64,
    lo: f64,
    hi: f64,
) -> Result<GridField> {
    if !(lo <= hi) {
        return Err(Error::InvalidParameter(format!("empty range [{lo}, {hi}]")));
    }
    let g = random_real(harmonics, rng, decay)?;
    let (mid, half) = ((lo + hi) / 2.0, (hi - lo) / 2.0);
    Ok(g.map(|v| Complex64::new(mid + half * v.re, 0.0)))
}

/// Named data presets accepted in configuration files.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DataPreset {
    Zero,
    Constant {
        value: f64,
    },
    /// Real band-limited field scaled to grid maximum `amplitude`.
    Random {
        #[serde(default = "one")]
        amplitude: f64,
        #[serde(default = "one")]
        decay: f64,
    },
    /// Band-limited field with values in `[lo, hi]`.
    Range {
        lo: f64,
        hi: f64,
        #[serde(default = "one")]
        decay: f64,
    },
}

fn one() -> f64 {
    1.0
}

impl DataPreset {
    pub fn build(&self, harmonics: &Harmonics, rng: &mut impl Rng) -> Result<GridField> {
        let n = harmonics.grid_len();
        match *self {
            DataPreset::Zero => Ok(GridField::zeros(n)),
            DataPreset::Constant { value } => Ok(GridField::constant(n, value)),
            DataPreset::Random { amplitude, decay } => {
                Ok(random_real(harmonics, rng, decay)?.scaled(amplitude))
            }
            DataPreset::Range { lo, hi, decay } => random_in_range(harmonics, rng, decay, lo, hi),
        }
    }
}

use std::sync::Arc;

use num_complex::Complex64;

use super::ModeSet;
use crate::error::{Error, Result};

/// Function values sampled on a quadrature grid.
#[derive(Clone, Debug, PartialEq)]
pub struct GridField {
    values: Vec<Complex64>,
}

impl GridField {
    pub fn new(values: Vec<Complex64>) -> Self {
        GridField { values }
    }

    pub fn from_real(values: &[f64]) -> Self {
        GridField {
            values: values.iter().map(|&v| Complex64::new(v, 0.0)).collect(),
        }
    }

    pub fn constant(len: usize, c: f64) -> Self {
        GridField {
            values: vec![Complex64::new(c, 0.0); len],
        }
    }

    pub fn zeros(len: usize) -> Self {
        Self::constant(len, 0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.re).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, s: f64) -> Self {
        GridField {
            values: self.values.iter().map(|v| v * s).collect(),
        }
    }

    /// Pointwise map.
    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> Self {
        GridField {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.values.len() != expected {
            return Err(Error::SizeMismatch {
                expected,
                got: self.values.len(),
            });
        }
        Ok(())
    }
}

/// One `d_ξ × d_ξ` coefficient block per mode, stored row-major in a
/// single buffer laid out by the attached [`ModeSet`].
#[derive(Clone, Debug)]
pub struct SpectralField {
    modes: Arc<ModeSet>,
    data: Vec<Complex64>,
}

impl PartialEq for SpectralField {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.modes, &other.modes) || self.modes == other.modes)
            && self.data == other.data
    }
}

impl SpectralField {
    pub fn zeros(modes: Arc<ModeSet>) -> Self {
        let n = modes.coefficient_count();
        SpectralField {
            modes,
            data: vec![Complex64::new(0.0, 0.0); n],
        }
    }

    pub fn from_data(modes: Arc<ModeSet>, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != modes.coefficient_count() {
            return Err(Error::SizeMismatch {
                expected: modes.coefficient_count(),
                got: data.len(),
            });
        }
        Ok(SpectralField { modes, data })
    }

    pub fn modes(&self) -> &Arc<ModeSet> {
        &self.modes
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    pub fn block(&self, i: usize) -> &[Complex64] {
        &self.data[self.modes.block_range(i)]
    }

    pub fn block_mut(&mut self, i: usize) -> &mut [Complex64] {
        let r = self.modes.block_range(i);
        &mut self.data[r]
    }

    /// Coefficient of the trivial representation.
    pub fn trivial(&self) -> Complex64 {
        self.data[self.modes.offset(self.modes.trivial_position())]
    }

    pub fn set_trivial(&mut self, c: Complex64) {
        let off = self.modes.offset(self.modes.trivial_position());
        self.data[off] = c;
    }

    pub fn same_modes(&self, other: &SpectralField) -> bool {
        Arc::ptr_eq(&self.modes, &other.modes) || self.modes == other.modes
    }

    pub fn check_same_modes(&self, other: &SpectralField) -> Result<()> {
        if self.same_modes(other) {
            Ok(())
        } else {
            Err(Error::ModeSetMismatch)
        }
    }

    /// Multiplies every block by a real scalar depending on its mode.
    pub fn map_modes(&self, f: impl Fn(&super::Mode) -> f64) -> SpectralField {
        let mut out = self.clone();
        for (i, m) in self.modes.modes().iter().enumerate() {
            let s = f(m);
            for c in out.block_mut(i) {
                *c *= s;
            }
        }
        out
    }

    pub fn scaled(&self, s: f64) -> SpectralField {
        SpectralField {
            modes: self.modes.clone(),
            data: self.data.iter().map(|c| c * s).collect(),
        }
    }

    /// `self + s·other`.
    pub fn axpy(&self, s: f64, other: &SpectralField) -> Result<SpectralField> {
        self.check_same_modes(other)?;
        Ok(SpectralField {
            modes: self.modes.clone(),
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b * s)
                .collect(),
        })
    }

    pub fn sub(&self, other: &SpectralField) -> Result<SpectralField> {
        self.axpy(-1.0, other)
    }

    /// Largest coefficient magnitude outside the trivial mode.
    pub fn max_nontrivial(&self) -> f64 {
        let t = self.modes.trivial_position();
        self.modes
            .modes()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != t)
            .flat_map(|(i, _)| self.block(i).iter().map(|c| c.norm()))
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &SpectralField) -> f64 {
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|c| c.re.is_finite() && c.im.is_finite())
    }
}

use std::f64::consts::PI;
use std::io::Write;

use super::quadrature::gauss_legendre;
use super::{enumerate_modes, GridField, GroupId, GroupSpec, ModeIndex};
use crate::error::Result;

/// Product quadrature rule for the normalized Haar measure.
#[derive(Clone, Debug)]
pub struct QuadratureGrid {
    /// Coordinates of every point: torus angles `x_1..x_n`, or Euler
    /// angles `(α, β, γ)` for SU(2).
    pub points: Vec<Vec<f64>>,
    pub weights: Vec<f64>,
    pub(crate) layout: GridLayout,
}

#[derive(Clone, Debug)]
pub(crate) enum GridLayout {
    /// `n` axes with `per_axis` uniform points each, last axis fastest.
    Torus { n: usize, per_axis: usize },
    /// `β` outermost (Gauss-Legendre in `cos β`), then `α`, then `γ`.
    Su2 {
        n_alpha: usize,
        n_beta: usize,
        n_gamma: usize,
        betas: Vec<f64>,
        beta_weights: Vec<f64>,
    },
}

impl QuadratureGrid {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total_weight(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn coordinate_names(&self) -> Vec<String> {
        match &self.layout {
            GridLayout::Torus { n, .. } => (1..=*n).map(|i| format!("x{i}")).collect(),
            GridLayout::Su2 { .. } => vec!["alpha".into(), "beta".into(), "gamma".into()],
        }
    }

    /// One row per point: coordinates, weight, value (real and imaginary part).
    pub fn write_csv<W: Write>(&self, field: &GridField, out: &mut W) -> Result<()> {
        field.check_len(self.len())?;
        let mut header = self.coordinate_names();
        header.extend(["weight".into(), "value".into(), "value_im".into()]);
        writeln!(out, "{}", header.join(","))?;
        for ((p, w), v) in self.points.iter().zip(&self.weights).zip(field.values()) {
            let mut row: Vec<String> = p.iter().map(|c| crate::io::fmt_f64(*c)).collect();
            row.push(crate::io::fmt_f64(*w));
            row.push(crate::io::fmt_f64(v.re));
            row.push(crate::io::fmt_f64(v.im));
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }
}

/// Axis sizes used by [`build_grid`] for a torus: `2·(2K+1)` with `K = ⌊Λ⌋`.
pub(crate) fn torus_points_per_axis(spec: &GroupSpec) -> usize {
    let k = spec.truncation.floor() as usize;
    2 * (2 * k + 1)
}

/// Largest doubled spin admitted by the truncation.
pub(crate) fn su2_max_two_l(spec: &GroupSpec) -> u32 {
    enumerate_modes(spec)
        .iter()
        .filter_map(|m| match m.index {
            ModeIndex::Su2 { two_l } => Some(two_l),
            _ => None,
        })
        .max()
        .unwrap_or(0)
}

/// Builds the product quadrature grid for `spec`.
///
/// Tori get `2·(2⌊Λ⌋+1)` uniform points per axis. SU(2) with maximal spin
/// `L` gets `2(2L+1)` uniform points in `α ∈ [0, 2π)`, `2(4L+1)` uniform
/// points in `γ ∈ [0, 4π)` and `2L+2` Gauss-Legendre nodes in `cos β`: twice
/// what exact integration of coefficient products of degree `2L` requires.
pub fn build_grid(spec: &GroupSpec) -> QuadratureGrid {
    match spec.group {
        GroupId::Su2 => {
            let two_l = su2_max_two_l(spec) as usize;
            let n_alpha = 2 * (two_l + 1);
            let n_gamma = 2 * (2 * two_l + 1);
            let n_beta = two_l + 2;
            let (x, wx) = gauss_legendre(n_beta);
            // ascending β, i.e. descending cos β
            let betas: Vec<f64> = x.iter().rev().map(|c| c.acos()).collect();
            let beta_weights: Vec<f64> = wx.iter().rev().map(|w| w / 2.0).collect();
            let mut points = Vec::with_capacity(n_alpha * n_beta * n_gamma);
            let mut weights = Vec::with_capacity(points.capacity());
            let ang_w = 1.0 / (n_alpha * n_gamma) as f64;
            for (b, wb) in betas.iter().zip(&beta_weights) {
                for ia in 0..n_alpha {
                    let alpha = 2.0 * PI * ia as f64 / n_alpha as f64;
                    for ig in 0..n_gamma {
                        let gamma = 4.0 * PI * ig as f64 / n_gamma as f64;
                        points.push(vec![alpha, *b, gamma]);
                        weights.push(wb * ang_w);
                    }
                }
            }
            QuadratureGrid {
                points,
                weights,
                layout: GridLayout::Su2 {
                    n_alpha,
                    n_beta,
                    n_gamma,
                    betas,
                    beta_weights,
                },
            }
        }
        torus => {
            let n = torus.dimension();
            let per_axis = torus_points_per_axis(spec);
            let total = per_axis.pow(n as u32);
            let w = 1.0 / total as f64;
            let mut points = Vec::with_capacity(total);
            for flat in 0..total {
                let mut rest = flat;
                let mut p = vec![0.0; n];
                for c in p.iter_mut().rev() {
                    *c = 2.0 * PI * (rest % per_axis) as f64 / per_axis as f64;
                    rest /= per_axis;
                }
                points.push(p);
            }
            QuadratureGrid {
                points,
                weights: vec![w; total],
                layout: GridLayout::Torus { n, per_axis },
            }
        }
    }
}

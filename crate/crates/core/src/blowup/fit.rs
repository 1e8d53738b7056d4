//! Amplitude sweeps of the lifespan and their log-log power-law fit.

use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::duhamel::{
    measure_lifespan, LifespanResult, NonlinearProblem, StepperConfig, TerminalReason,
};
use crate::error::{Error, Result};

/// `ε_min … ε_max` in `count` log-spaced values.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AmplitudeSweep {
    pub eps_min: f64,
    pub eps_max: f64,
    pub count: usize,
}

impl AmplitudeSweep {
    pub fn values(&self) -> Result<Vec<f64>> {
        if !(self.eps_min > 0.0 && self.eps_max >= self.eps_min && self.eps_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < eps_min <= eps_max, got [{}, {}]",
                self.eps_min, self.eps_max
            )));
        }
        if self.count == 0 {
            return Err(Error::InvalidParameter(
                "sweep count must be positive".into(),
            ));
        }
        if self.count == 1 {
            return Ok(vec![self.eps_min]);
        }
        let (a, b) = (self.eps_min.ln(), self.eps_max.ln());
        Ok((0..self.count)
            .map(|i| (a + (b - a) * i as f64 / (self.count - 1) as f64).exp())
            .collect())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SweepPoint {
    pub epsilon: f64,
    pub result: LifespanResult,
}

/// One lifespan per amplitude, in input order; concurrent unless `serial`.
pub fn run_sweep(
    problem: &NonlinearProblem,
    cfg: &StepperConfig,
    eps: &[f64],
    serial: bool,
) -> Result<Vec<SweepPoint>> {
    let one = |&e: &f64| -> Result<SweepPoint> {
        let pr = problem.with_epsilon(e)?;
        Ok(SweepPoint {
            epsilon: e,
            result: measure_lifespan(&pr, cfg)?,
        })
    };
    if serial {
        eps.iter().map(one).collect()
    } else {
        eps.par_iter().map(one).collect()
    }
}

pub fn write_sweep_csv<W: Write>(points: &[SweepPoint], out: &mut W) -> Result<()> {
    writeln!(out, "epsilon,T_num,terminal_reason")?;
    for p in points {
        writeln!(
            out,
            "{},{},{}",
            crate::io::fmt_f64(p.epsilon),
            crate::io::fmt_f64(p.result.t_num),
            p.result.reason
        )?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScalingFit {
    /// `(ln ε, ln T)`.
    #[serde(skip)]
    pub points: Vec<(f64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    pub theoretical_slope: f64,
    /// Root-mean-square deviation of the points from the fitted line.
    pub residual: f64,
}

impl ScalingFit {
    /// `|slope/theoretical − 1|`.
    pub fn relative_deviation(&self) -> f64 {
        (self.slope / self.theoretical_slope - 1.0).abs()
    }
}

/// `−(p−1)/b(p)` with `b = 2` when `u₁ = 0` and `b = p + 1` otherwise.
pub fn theoretical_slope(p: f64, u1_zero: bool) -> f64 {
    let b = if u1_zero { 2.0 } else { p + 1.0 };
    -(p - 1.0) / b
}

/// Least-squares line through `(ln ε, ln T)`.
pub fn lifespan_fit(points: &[(f64, f64)], p: f64, u1_zero: bool) -> Result<ScalingFit> {
    if points.len() < 4 {
        return Err(Error::DegenerateSweep(format!(
            "{} points, need at least 4",
            points.len()
        )));
    }
    if points
        .iter()
        .any(|&(e, t)| !(e > 0.0 && t > 0.0 && e.is_finite() && t.is_finite()))
    {
        return Err(Error::DegenerateSweep(
            "amplitudes and lifespans must be positive and finite".into(),
        ));
    }
    let lo = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hi = points.iter().map(|p| p.0).fold(0.0, f64::max);
    if hi / lo < 100.0 * (1.0 - 1e-12) {
        return Err(Error::DegenerateSweep(format!(
            "amplitudes span {:.3} decades, need 2",
            (hi / lo).log10()
        )));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|&(e, t)| (e.ln(), t.ln())).collect();
    let n = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (logs
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum::<f64>()
        / n)
        .sqrt();
    Ok(ScalingFit {
        points: logs,
        slope,
        intercept,
        theoretical_slope: theoretical_slope(p, u1_zero),
        residual,
    })
}

/// Fit over the sweep points that ended on the blow-up threshold.
pub fn fit_sweep(points: &[SweepPoint], p: f64, u1_zero: bool) -> Result<ScalingFit> {
    let usable: Vec<(f64, f64)> = points
        .iter()
        .filter(|s| s.result.reason == TerminalReason::Threshold)
        .map(|s| (s.epsilon, s.result.t_num))
        .collect();
    if usable.is_empty() {
        return Err(Error::DegenerateSweep(
            "no run reached the blow-up threshold".into(),
        ));
    }
    lifespan_fit(&usable, p, u1_zero)
}

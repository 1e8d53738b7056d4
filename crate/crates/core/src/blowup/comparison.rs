//! The mean `U₀(t) = ∫ u(t)` and its comparison with `W'' = |W|^p`.

use serde::Serialize;

use super::ode::{Dopri, PowerOde};
use crate::error::{Error, Result};
use crate::group::{GridField, Harmonics, QuadratureGrid};
use crate::linear::SolverState;

/// `(t, U₀(t))` for every state: the real part of the trivial coefficient.
pub fn u0_functional(traj: &[SolverState]) -> Vec<(f64, f64)> {
    traj.iter().map(|s| (s.t, s.u.trivial().re)).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct JensenCheck {
    /// `∫ |u|^p`.
    pub lhs: f64,
    /// `|∫ u|^p`.
    pub rhs: f64,
    pub ok: bool,
}

pub fn jensen_check(u: &GridField, p: f64, grid: &QuadratureGrid) -> Result<JensenCheck> {
    if !(p > 1.0) {
        return Err(Error::InvalidParameter(format!("p must exceed 1, got {p}")));
    }
    u.check_len(grid.len())?;
    let w = grid.weights.iter();
    let lhs: f64 = u
        .values()
        .iter()
        .zip(w.clone())
        .map(|(v, w)| w * v.norm().powf(p))
        .sum();
    let mean: num_complex::Complex64 = u.values().iter().zip(w).map(|(v, w)| v * w).sum();
    let rhs = mean.norm().powf(p);
    Ok(JensenCheck {
        lhs,
        rhs,
        ok: lhs >= rhs - 1e-10,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonReport {
    /// `max_t |U₀'(t) − U₀'(0) − ∫₀ᵗ∫|u|^p|` with the time integral by trapezoids.
    pub identity_residual: f64,
    /// `max_t (W(t) − U₀(t))`, positive when domination fails.
    pub max_violation: f64,
    /// Largest allowed violation `1e-6 + 10 h² |W|` at the worst sample.
    pub tolerance_at_worst: f64,
    pub dominated: bool,
    pub samples: Vec<ComparisonSample>,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct ComparisonSample {
    pub t: f64,
    pub u0: f64,
    pub w: f64,
    pub identity_lhs: f64,
    pub identity_rhs: f64,
}

/// Checks the integrated mean identity and `U₀ ≥ W` along a trajectory
/// sampled at every step of size `h`.
pub fn comparison_check(
    traj: &[SolverState],
    p: f64,
    h: f64,
    harmonics: &Harmonics,
) -> Result<ComparisonReport> {
    let first = traj.first().ok_or(Error::EmptyTrajectory)?;
    if !(p > 1.0) {
        return Err(Error::InvalidParameter(format!("p must exceed 1, got {p}")));
    }
    let grid = harmonics.grid();
    let mut power_mean = Vec::with_capacity(traj.len());
    for s in traj {
        let g = harmonics.inverse(&s.u)?;
        power_mean.push(
            g.values()
                .iter()
                .zip(&grid.weights)
                .map(|(v, w)| w * v.norm().powf(p))
                .sum::<f64>(),
        );
    }
    let (w0, w1) = (first.u.trivial().re, first.ut.trivial().re);
    let mut ode = Dopri::new(PowerOde::autonomous(p), first.t, w0, w1);
    let mut integral = 0.0;
    let mut samples = Vec::with_capacity(traj.len());
    let (mut identity_residual, mut max_violation, mut tolerance_at_worst) =
        (0.0f64, f64::NEG_INFINITY, 0.0);
    let mut dominated = true;
    for (k, s) in traj.iter().enumerate() {
        if k > 0 {
            integral += 0.5 * (s.t - traj[k - 1].t) * (power_mean[k] + power_mean[k - 1]);
        }
        let lhs = s.ut.trivial().re - w1;
        identity_residual = identity_residual.max((lhs - integral).abs());
        let w = match ode.advance_to(s.t) {
            Ok(()) => ode.point.f,
            Err(_) => f64::INFINITY,
        };
        let u0 = s.u.trivial().re;
        let tol = 1e-6 + 10.0 * h * h * w.abs();
        let viol = w - u0;
        if viol > max_violation {
            max_violation = viol;
            tolerance_at_worst = tol;
        }
        if viol > tol {
            dominated = false;
        }
        samples.push(ComparisonSample {
            t: s.t,
            u0,
            w,
            identity_lhs: lhs,
            identity_rhs: integral,
        });
    }
    Ok(ComparisonReport {
        identity_residual,
        max_violation,
        tolerance_at_worst,
        dominated,
        samples,
    })
}

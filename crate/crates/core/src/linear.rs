//! Exact per-mode flow of the homogeneous equation `∂²ₜu + (-𝓛)^α u = 0`.
//!
//! Each coefficient of `û(t, ξ)` is an independent harmonic oscillator with
//! frequency `ω = λ_ξ^α`:
//!
//! ```text
//! û(t)  =        A0(t) û₀ + A1(t) û₁
//! ∂ₜû(t) = -ω² A1(t) û₀ + A0(t) û₁
//! ```

use std::io::Write;

use serde::Serialize;

use crate::calculus::{fractional_seminorm, sobolev_norm, FracOrder};
use crate::error::{Error, Result};
use crate::group::{plancherel_norm, SpectralField};

/// Below this `|ω t|` the sine quotient uses its Taylor series.
const A1_SERIES_THRESHOLD: f64 = 1e-4;

/// Phase-space point `(t, û, ∂ₜû)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SolverState {
    pub t: f64,
    pub u: SpectralField,
    pub ut: SpectralField,
}

impl SolverState {
    pub fn new(t: f64, u: SpectralField, ut: SpectralField) -> Result<Self> {
        u.check_same_modes(&ut)?;
        Ok(SolverState { t, u, ut })
    }

    pub fn is_finite(&self) -> bool {
        self.t.is_finite() && self.u.is_finite() && self.ut.is_finite()
    }
}

/// `cos(t ω)` with `ω = λ^α`, and `1` on the zero eigenvalue.
pub fn propagator_a0(t: f64, lambda: f64, alpha: FracOrder) -> f64 {
    a0_freq(t, alpha.frequency(lambda * lambda))
}

/// `sin(t ω)/ω` with `ω = λ^α`, and `t` on the zero eigenvalue.
pub fn propagator_a1(t: f64, lambda: f64, alpha: FracOrder) -> f64 {
    a1_freq(t, alpha.frequency(lambda * lambda))
}

pub(crate) fn a0_freq(t: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        1.0
    } else {
        (t * omega).cos()
    }
}

pub(crate) fn a1_freq(t: f64, omega: f64) -> f64 {
    if omega == 0.0 {
        return t;
    }
    let x = t * omega;
    if x.abs() < A1_SERIES_THRESHOLD {
        let x2 = x * x;
        t * (1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0)))
    } else {
        x.sin() / omega
    }
}

/// Applies the exact flow over `dt` to `(u, ut)` coefficient-wise.
pub(crate) fn propagate(
    u: &SpectralField,
    ut: &SpectralField,
    dt: f64,
    alpha: FracOrder,
) -> (SpectralField, SpectralField) {
    let mut nu = u.clone();
    let mut nut = ut.clone();
    for (i, m) in u.modes().modes().iter().enumerate() {
        let w = alpha.frequency(m.lambda_sq);
        let a0 = a0_freq(dt, w);
        let a1 = a1_freq(dt, w);
        let (bu, but) = (u.block(i), ut.block(i));
        for ((x, y), (p, q)) in nu
            .block_mut(i)
            .iter_mut()
            .zip(nut.block_mut(i).iter_mut())
            .zip(bu.iter().zip(but))
        {
            *x = p * a0 + q * a1;
            *y = p * (-w * w * a1) + q * a0;
        }
    }
    (nu, nut)
}

/// Solution of the homogeneous problem at time `t` from data `(u0, u1)`.
pub fn evolve_homogeneous(
    u0: &SpectralField,
    u1: &SpectralField,
    t: f64,
    alpha: FracOrder,
) -> Result<SolverState> {
    u0.check_same_modes(u1)?;
    if !(t >= 0.0) {
        return Err(Error::InvalidParameter(format!(
            "time must be nonnegative, got {t}"
        )));
    }
    let (u, ut) = propagate(u0, u1, t, alpha);
    Ok(SolverState { t, u, ut })
}

/// Continues a state by `dt` along the homogeneous flow.
pub fn evolve_state(state: &SolverState, dt: f64, alpha: FracOrder) -> SolverState {
    let (u, ut) = propagate(&state.u, &state.ut, dt, alpha);
    SolverState {
        t: state.t + dt,
        u,
        ut,
    }
}

/// Measured constants of the three `L²` estimates of the homogeneous flow.
#[derive(Clone, Debug, Serialize)]
pub struct DecayReport {
    pub rows: Vec<DecayRow>,
    pub max_r0: f64,
    pub max_r1: f64,
    pub max_r2: f64,
    /// Any ratio above [`DecayReport::BOUND`].
    pub flagged: bool,
}

#[derive(Clone, Copy, Debug, Serialize)]
pub struct DecayRow {
    pub t: f64,
    pub r0: f64,
    pub r1: f64,
    pub r2: f64,
}

impl DecayReport {
    pub const BOUND: f64 = 2.0;

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        crate::io::write_rows(
            out,
            &["t", "r0", "r1", "r2"],
            self.rows.iter().map(|r| vec![r.t, r.r0, r.r1, r.r2]),
        )
    }
}

fn ratio(num: f64, den: f64) -> f64 {
    if den == 0.0 {
        // only reachable for u(t) = 0 identically
        0.0
    } else {
        num / den
    }
}

/// Evaluates
/// `r0 = ‖u(t)‖/(‖u₀‖ + t‖u₁‖)`,
/// `r1 = ‖(-𝓛)^{α/2}u(t)‖/(‖u₀‖_{H^α} + ‖u₁‖)` and
/// `r2 = ‖∂ₜu(t)‖/(‖u₀‖_{H^α} + ‖u₁‖)` at the requested times.
pub fn verify_decay_estimates(
    u0: &SpectralField,
    u1: &SpectralField,
    times: &[f64],
    alpha: FracOrder,
) -> Result<DecayReport> {
    u0.check_same_modes(u1)?;
    let n0 = plancherel_norm(u0);
    let n1 = plancherel_norm(u1);
    if n0 == 0.0 && n1 == 0.0 {
        return Err(Error::DegenerateInput("both initial data vanish".into()));
    }
    let energy_den = sobolev_norm(u0, alpha) + n1;
    let mut rows = Vec::with_capacity(times.len());
    for &t in times {
        if !(t.is_finite() && t >= 0.0) {
            return Err(Error::InvalidParameter(format!(
                "sample time must be finite and >= 0, got {t}"
            )));
        }
        let s = evolve_homogeneous(u0, u1, t, alpha)?;
        rows.push(DecayRow {
            t,
            r0: ratio(plancherel_norm(&s.u), n0 + t * n1),
            r1: ratio(fractional_seminorm(&s.u, alpha), energy_den),
            r2: ratio(plancherel_norm(&s.ut), energy_den),
        });
    }
    let max = |f: fn(&DecayRow) -> f64| rows.iter().map(f).fold(0.0, f64::max);
    let (max_r0, max_r1, max_r2) = (max(|r| r.r0), max(|r| r.r1), max(|r| r.r2));
    let flagged = max_r0.max(max_r1).max(max_r2) > DecayReport::BOUND;
    Ok(DecayReport {
        rows,
        max_r0,
        max_r1,
        max_r2,
        flagged,
    })
}

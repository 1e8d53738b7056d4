//! Fractional Klein-Gordon equation `∂²ₜu + (-𝓛)^α u + m(x) u = 0`.
//!
//! The grid mean `m̄` of the mass is folded into the exact propagator
//! (frequencies `sqrt(λ^{2α} + m̄)`); only `m − m̄` is treated as forcing.

use std::io::Write;

use num_complex::Complex64;
use serde::Serialize;

use crate::calculus::{fractional_seminorm, sobolev_norm, FracOrder};
use crate::duhamel::{Evaluated, Forcing, Integrator, StepperConfig};
use crate::error::{Error, Result};
use crate::group::{plancherel_norm_sq, GridField, Harmonics};
use crate::linear::SolverState;

/// Nonnegative mass sampled on the quadrature grid.
#[derive(Clone, Debug, PartialEq)]
pub struct MassTerm {
    m: Vec<f64>,
    m_inf: f64,
}

impl MassTerm {
    pub fn new(m: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = m
            .iter()
            .enumerate()
            .find(|(_, v)| !(v.is_finite() && **v >= 0.0))
        {
            return Err(Error::InvalidParameter(format!(
                "mass must be finite and >= 0, got {v} at point {i}"
            )));
        }
        let m_inf = m.iter().copied().fold(0.0, f64::max);
        Ok(MassTerm { m, m_inf })
    }

    pub fn from_grid(m: &GridField) -> Result<Self> {
        if m.max_imag() != 0.0 {
            return Err(Error::InvalidParameter("mass must be real".into()));
        }
        MassTerm::new(m.real_parts())
    }

    pub fn constant(len: usize, m0: f64) -> Result<Self> {
        MassTerm::new(vec![m0; len])
    }

    pub fn values(&self) -> &[f64] {
        &self.m
    }

    pub fn m_inf(&self) -> f64 {
        self.m_inf
    }

    fn mean(&self, harmonics: &Harmonics) -> f64 {
        let g = harmonics.grid();
        self.m
            .iter()
            .zip(&g.weights)
            .map(|(m, w)| m * w)
            .sum::<f64>()
            / g.total_weight()
    }
}

/// `−(m − m̄) u`.
struct MassFluctuation {
    dm: Vec<f64>,
}

impl Forcing for MassFluctuation {
    fn apply(&self, u: &GridField) -> GridField {
        GridField::new(
            u.values()
                .iter()
                .zip(&self.dm)
                .map(|(v, d)| v * -d)
                .collect(),
        )
    }
}

/// `E = kinetic + potential_frac + potential_mass`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EnergyRecord {
    pub t: f64,
    pub e: f64,
    /// `‖∂ₜu‖²`.
    pub kinetic: f64,
    /// `‖(-𝓛)^{α/2}u‖²`.
    pub potential_frac: f64,
    /// `‖√m u‖²`.
    pub potential_mass: f64,
}

fn check_mass(mass: &MassTerm, harmonics: &Harmonics) -> Result<()> {
    if mass.m.len() != harmonics.grid_len() {
        return Err(Error::SizeMismatch {
            expected: harmonics.grid_len(),
            got: mass.m.len(),
        });
    }
    Ok(())
}

fn integrator<'h>(
    mass: &MassTerm,
    alpha: FracOrder,
    harmonics: &'h Harmonics,
) -> Integrator<'h, MassFluctuation> {
    let mbar = mass.mean(harmonics);
    let forcing = MassFluctuation {
        dm: mass.m.iter().map(|m| m - mbar).collect(),
    };
    Integrator::new(harmonics, alpha, forcing).with_frequency_shift(mbar)
}

/// One step of size `cfg.h`.
pub fn kg_step(
    state: &SolverState,
    mass: &MassTerm,
    cfg: &StepperConfig,
    alpha: FracOrder,
    harmonics: &Harmonics,
) -> Result<SolverState> {
    check_mass(mass, harmonics)?;
    let mut it = integrator(mass, alpha, harmonics);
    let cur = it.evaluate(state.clone())?;
    Ok(it.advance(&cur, cfg.h)?.state)
}

fn energy_with_grid(
    state: &SolverState,
    grid_u: &GridField,
    mass: &MassTerm,
    alpha: FracOrder,
    harmonics: &Harmonics,
) -> EnergyRecord {
    let kinetic = plancherel_norm_sq(&state.ut);
    let potential_frac = fractional_seminorm(&state.u, alpha).powi(2);
    let potential_mass = grid_u
        .values()
        .iter()
        .zip(&mass.m)
        .zip(&harmonics.grid().weights)
        .map(|((u, m), w)| w * m * u.norm_sqr())
        .sum::<f64>();
    EnergyRecord {
        t: state.t,
        e: kinetic + potential_frac + potential_mass,
        kinetic,
        potential_frac,
        potential_mass,
    }
}

pub fn energy(
    state: &SolverState,
    mass: &MassTerm,
    alpha: FracOrder,
    harmonics: &Harmonics,
) -> Result<EnergyRecord> {
    check_mass(mass, harmonics)?;
    let g = harmonics.inverse(&state.u)?;
    Ok(energy_with_grid(state, &g, mass, alpha, harmonics))
}

#[derive(Clone, Debug, Serialize)]
pub struct KgSample {
    pub energy: EnergyRecord,
    /// `|E(t) − E(0)| / E(0)`.
    pub drift_rel: f64,
    /// `(‖u‖²_{H^α} + ‖∂ₜu‖²) / ((1 + ‖m‖_∞)(‖u₀‖²_{H^α} + ‖u₁‖²))`.
    pub estimate_ratio: f64,
    /// Largest imaginary part of `u` on the grid.
    pub imag_residue: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct KgRun {
    pub samples: Vec<KgSample>,
    #[serde(skip)]
    pub last: SolverState,
    pub max_drift: f64,
    pub max_ratio: f64,
    /// Some ratio exceeded [`KgRun::RATIO_BOUND`].
    pub flagged: bool,
}

impl KgRun {
    pub const RATIO_BOUND: f64 = 4.0;

    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        crate::io::write_rows(
            out,
            &[
                "t",
                "E",
                "kinetic",
                "potential_frac",
                "potential_mass",
                "drift_rel",
            ],
            self.samples.iter().map(|s| {
                let e = &s.energy;
                vec![
                    e.t,
                    e.e,
                    e.kinetic,
                    e.potential_frac,
                    e.potential_mass,
                    s.drift_rel,
                ]
            }),
        )
    }
}

/// Integrates with constant step close to `cfg.h` up to `t_end`, sampling
/// energy and the estimate ratio after every step.
pub fn kg_solve(
    u0: &GridField,
    u1: &GridField,
    mass: &MassTerm,
    t_end: f64,
    cfg: &StepperConfig,
    alpha: FracOrder,
    harmonics: &Harmonics,
) -> Result<KgRun> {
    check_mass(mass, harmonics)?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "end time must be finite and >= 0, got {t_end}"
        )));
    }
    if !(cfg.h > 0.0 && cfg.h.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "step must be positive, got {}",
            cfg.h
        )));
    }
    let n = (t_end / cfg.h)
        .round()
        .max(if t_end > 0.0 { 1.0 } else { 0.0 }) as usize;
    let h = if n == 0 { 0.0 } else { t_end / n as f64 };
    let u0h = harmonics.forward(u0)?;
    let u1h = harmonics.forward(u1)?;
    let data = sobolev_norm(&u0h, alpha).powi(2) + plancherel_norm_sq(&u1h);
    let den = (1.0 + mass.m_inf) * data;

    let mut it = integrator(mass, alpha, harmonics);
    let mut cur: Evaluated = it.evaluate(SolverState::new(0.0, u0h, u1h)?)?;
    let e0 = energy_with_grid(&cur.state, &cur.grid_u, mass, alpha, harmonics).e;
    let sample = |ev: &Evaluated| {
        let energy = energy_with_grid(&ev.state, &ev.grid_u, mass, alpha, harmonics);
        let num = sobolev_norm(&ev.state.u, alpha).powi(2) + plancherel_norm_sq(&ev.state.ut);
        KgSample {
            energy,
            drift_rel: if e0 > 0.0 {
                (energy.e - e0).abs() / e0
            } else {
                energy.e.abs()
            },
            estimate_ratio: if den > 0.0 { num / den } else { 0.0 },
            imag_residue: ev.grid_u.max_imag(),
        }
    };
    let mut samples = vec![sample(&cur)];
    for k in 1..=n {
        cur = it.advance(&cur, h)?;
        cur.state.t = k as f64 * h;
        samples.push(sample(&cur));
    }
    let max_drift = samples.iter().map(|s| s.drift_rel).fold(0.0, f64::max);
    let max_ratio = samples.iter().map(|s| s.estimate_ratio).fold(0.0, f64::max);
    Ok(KgRun {
        samples,
        last: cur.state,
        max_drift,
        max_ratio,
        flagged: max_ratio > KgRun::RATIO_BOUND,
    })
}

/// Closed-form solution of one coefficient under constant mass `m0`.
pub fn constant_mass_mode(
    u0: Complex64,
    u1: Complex64,
    omega: f64,
    m0: f64,
    t: f64,
) -> (Complex64, Complex64) {
    let w = (omega * omega + m0).sqrt();
    if w == 0.0 {
        return (u0 + u1 * t, u1);
    }
    let (s, c) = (w * t).sin_cos();
    (u0 * c + u1 * (s / w), u0 * (-w * s) + u1 * c)
}

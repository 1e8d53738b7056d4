//! Second-order exponential integrator (predictor, corrector, evaluate).
//!
//! Over one step the forcing is interpolated linearly between its values at
//! both ends and the Duhamel integral is taken exactly against that
//! interpolant. The right endpoint uses a predicted state.

use num_complex::Complex64;

use super::kernel::{kernel_weights_full, KernelWeights};
use super::{NonlinearProblem, StepperConfig};
use crate::calculus::FracOrder;
use crate::error::{Error, Result};
use crate::group::{GridField, Harmonics, SpectralField};
use crate::linear::{a0_freq, a1_freq, SolverState};

/// Pointwise right-hand side `f(u)` of `∂²ₜu + (-𝓛)^α u = f(u)`.
pub trait Forcing {
    fn apply(&self, u: &GridField) -> GridField;
}

/// `|u|^p`.
#[derive(Clone, Copy, Debug)]
pub struct PowerNonlinearity {
    pub p: f64,
}

impl Forcing for PowerNonlinearity {
    fn apply(&self, u: &GridField) -> GridField {
        let p = self.p;
        u.map(|v| Complex64::new(v.norm().powf(p), 0.0))
    }
}

/// Zero forcing; reduces the integrator to the exact linear flow.
#[derive(Clone, Copy, Debug)]
pub struct Unforced;

impl Forcing for Unforced {
    fn apply(&self, u: &GridField) -> GridField {
        GridField::zeros(u.len())
    }
}

/// State together with its grid values and transformed forcing.
#[derive(Clone, Debug)]
pub struct Evaluated {
    pub state: SolverState,
    pub grid_u: GridField,
    pub forcing_hat: SpectralField,
}

impl Evaluated {
    pub fn linf(&self) -> f64 {
        self.grid_u.max_abs()
    }
}

#[derive(Clone, Copy, Debug)]
struct ModeCoeffs {
    a0: f64,
    a1: f64,
    omega_sq: f64,
    k: KernelWeights,
}

pub struct Integrator<'h, F: Forcing> {
    harmonics: &'h Harmonics,
    alpha: FracOrder,
    forcing: F,
    shift: f64,
    cache: Option<(f64, Vec<ModeCoeffs>)>,
}

impl<'h, F: Forcing> Integrator<'h, F> {
    pub fn new(harmonics: &'h Harmonics, alpha: FracOrder, forcing: F) -> Self {
        Integrator {
            harmonics,
            alpha,
            forcing,
            shift: 0.0,
            cache: None,
        }
    }

    /// Propagates with frequencies `sqrt(λ^{2α} + shift)` instead of `λ^α`.
    pub fn with_frequency_shift(mut self, shift: f64) -> Self {
        self.shift = shift;
        self.cache = None;
        self
    }

    /// Frequency used for a mode with Casimir eigenvalue `lambda_sq`.
    pub fn frequency(&self, lambda_sq: f64) -> f64 {
        let w = self.alpha.frequency(lambda_sq);
        if self.shift == 0.0 {
            w
        } else {
            (w * w + self.shift).sqrt()
        }
    }

    pub fn harmonics(&self) -> &'h Harmonics {
        self.harmonics
    }

    /// Grid values and forcing of `state`; fails on non-finite values.
    pub fn evaluate(&self, state: SolverState) -> Result<Evaluated> {
        if !state.is_finite() {
            return Err(Error::NonFinite { t: state.t });
        }
        let grid_u = self.harmonics.inverse(&state.u)?;
        let forcing_hat = self.forcing_hat(&grid_u, state.t)?;
        Ok(Evaluated {
            state,
            grid_u,
            forcing_hat,
        })
    }

    fn forcing_hat(&self, grid_u: &GridField, t: f64) -> Result<SpectralField> {
        let f = self.forcing.apply(grid_u);
        if f.values().iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { t });
        }
        self.harmonics.forward(&f)
    }

    fn coeffs(&mut self, h: f64) -> &[ModeCoeffs] {
        let stale = !matches!(&self.cache, Some((ch, _)) if *ch == h);
        if stale {
            let v = self
                .harmonics
                .modes()
                .modes()
                .iter()
                .map(|m| {
                    let w = self.frequency(m.lambda_sq);
                    ModeCoeffs {
                        a0: a0_freq(h, w),
                        a1: a1_freq(h, w),
                        omega_sq: w * w,
                        k: kernel_weights_full(h, w),
                    }
                })
                .collect();
            self.cache = Some((h, v));
        }
        &self.cache.as_ref().expect("filled above").1
    }

    /// One step of length `h` from an evaluated state.
    pub fn advance(&mut self, cur: &Evaluated, h: f64) -> Result<Evaluated> {
        let harmonics = self.harmonics;
        let coeffs = self.coeffs(h).to_vec();
        let s = &cur.state;
        let n0 = &cur.forcing_hat;

        let mut pred = s.u.clone();
        for (i, c) in coeffs.iter().enumerate() {
            let (u, ut, f) = (s.u.block(i), s.ut.block(i), n0.block(i));
            for (j, out) in pred.block_mut(i).iter_mut().enumerate() {
                *out = u[j] * c.a0 + ut[j] * c.a1 + f[j] * (c.k.w0 + c.k.w1);
            }
        }
        if !pred.is_finite() {
            return Err(Error::NonFinite { t: s.t + h });
        }
        let grid_pred = harmonics.inverse(&pred)?;
        let n1 = self.forcing_hat(&grid_pred, s.t + h)?;

        let mut u_new = s.u.clone();
        let mut ut_new = s.ut.clone();
        for (i, c) in coeffs.iter().enumerate() {
            let (u, ut, f0, f1) = (s.u.block(i), s.ut.block(i), n0.block(i), n1.block(i));
            let k = c.k;
            for (j, (a, b)) in u_new
                .block_mut(i)
                .iter_mut()
                .zip(ut_new.block_mut(i).iter_mut())
                .enumerate()
            {
                *a = u[j] * c.a0 + ut[j] * c.a1 + f0[j] * k.w0 + f1[j] * k.w1;
                *b = u[j] * (-c.omega_sq * c.a1) + ut[j] * c.a0 + f0[j] * k.v0 + f1[j] * k.v1;
            }
        }
        self.evaluate(SolverState {
            t: s.t + h,
            u: u_new,
            ut: ut_new,
        })
    }
}

/// One step of size `cfg.h` of the nonlinear problem.
pub fn step(
    state: &SolverState,
    cfg: &StepperConfig,
    problem: &NonlinearProblem,
) -> Result<SolverState> {
    let mut it = Integrator::new(
        problem.harmonics(),
        problem.alpha,
        PowerNonlinearity { p: problem.p },
    );
    let cur = it.evaluate(state.clone())?;
    Ok(it.advance(&cur, cfg.h)?.state)
}

/// The same step with the nonlinear term switched off.
pub fn step_linear_only(
    state: &SolverState,
    cfg: &StepperConfig,
    problem: &NonlinearProblem,
) -> Result<SolverState> {
    let mut it = Integrator::new(problem.harmonics(), problem.alpha, Unforced);
    let cur = it.evaluate(state.clone())?;
    Ok(it.advance(&cur, cfg.h)?.state)
}

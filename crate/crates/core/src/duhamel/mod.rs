//! Nonlinear solver for `∂²ₜu + (-𝓛)^α u = |u|^p` via the Duhamel formula.

mod integrator;
mod kernel;
mod lifespan;
mod picard;
mod trajectory;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use integrator::{
    step, step_linear_only, Evaluated, Forcing, Integrator, PowerNonlinearity, Unforced,
};
pub use kernel::{kernel_weights, kernel_weights_full, KernelWeights};
pub use lifespan::{measure_lifespan, LifespanResult, TerminalReason};
pub use picard::{picard_solve, PicardResult};
pub use trajectory::{integrate, Trajectory, TrajectoryRecord};

use crate::calculus::{FracOrder, TrajectoryNormWeights};
use crate::error::{Error, Result};
use crate::group::{GridField, Harmonics, SpectralField};
use crate::linear::SolverState;

/// Initial-value problem `u(0) = ε u₀`, `∂ₜu(0) = ε u₁`.
///
/// The data are kept unscaled so an amplitude sweep can share transforms.
#[derive(Clone, Debug)]
pub struct NonlinearProblem {
    harmonics: Arc<Harmonics>,
    pub alpha: FracOrder,
    pub p: f64,
    pub epsilon: f64,
    u0: GridField,
    u1: GridField,
    u0_hat: SpectralField,
    u1_hat: SpectralField,
}

impl NonlinearProblem {
    pub fn new(
        harmonics: Arc<Harmonics>,
        alpha: FracOrder,
        p: f64,
        epsilon: f64,
        u0: GridField,
        u1: GridField,
    ) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "exponent p must exceed 1, got {p}"
            )));
        }
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "amplitude must be positive, got {epsilon}"
            )));
        }
        let u0_hat = harmonics.forward(&u0)?;
        let u1_hat = harmonics.forward(&u1)?;
        Ok(NonlinearProblem {
            harmonics,
            alpha,
            p,
            epsilon,
            u0,
            u1,
            u0_hat,
            u1_hat,
        })
    }

    pub fn with_epsilon(&self, epsilon: f64) -> Result<Self> {
        if !(epsilon > 0.0 && epsilon.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "amplitude must be positive, got {epsilon}"
            )));
        }
        Ok(NonlinearProblem {
            epsilon,
            ..self.clone()
        })
    }

    pub fn harmonics(&self) -> &Harmonics {
        &self.harmonics
    }

    pub fn shared_harmonics(&self) -> Arc<Harmonics> {
        self.harmonics.clone()
    }

    pub fn u0(&self) -> &GridField {
        &self.u0
    }

    pub fn u1(&self) -> &GridField {
        &self.u1
    }

    /// Scaled initial state at `t = 0`.
    pub fn initial_state(&self) -> SolverState {
        SolverState {
            t: 0.0,
            u: self.u0_hat.scaled(self.epsilon),
            ut: self.u1_hat.scaled(self.epsilon),
        }
    }

    /// Norm weights selected by whether the initial velocity vanishes.
    pub fn norm_weights(&self) -> TrajectoryNormWeights {
        TrajectoryNormWeights {
            u1_is_zero: self.u1.max_abs() == 0.0,
        }
    }

    /// Nonnegative data, not both identically zero.
    pub fn check_blowup_hypotheses(&self) -> Result<()> {
        let nonneg = |f: &GridField| f.values().iter().all(|v| v.re >= 0.0 && v.im == 0.0);
        if !nonneg(&self.u0) || !nonneg(&self.u1) {
            return Err(Error::HypothesisViolation(
                "initial data must be real and nonnegative".into(),
            ));
        }
        if self.u0.max_abs() == 0.0 && self.u1.max_abs() == 0.0 {
            return Err(Error::HypothesisViolation(
                "initial data vanish identically".into(),
            ));
        }
        Ok(())
    }

    /// Warning text when `p` exceeds `n/(n − 2α)`.
    pub fn local_existence_warning(&self) -> Option<String> {
        let n = self.harmonics.spec().dimension() as f64;
        let a = self.alpha.value();
        let bound = if n > 2.0 * a {
            n / (n - 2.0 * a)
        } else {
            f64::INFINITY
        };
        (self.p > bound).then(|| {
            format!(
                "p = {} exceeds n/(n-2α) = {bound:.6}; local theory not guaranteed",
                self.p
            )
        })
    }
}

/// Time-stepping controls.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StepperConfig {
    /// Initial (and, for fixed-step runs, only) step.
    pub h: f64,
    /// Largest step the adaptive controller may grow to.
    pub h_max: f64,
    pub min_step: f64,
    pub blowup_threshold: f64,
    pub max_time: f64,
    /// Largest accepted relative growth of `‖u‖_∞` per step.
    pub max_growth: f64,
    pub picard_tol: f64,
    pub picard_maxiter: usize,
}

impl Default for StepperConfig {
    fn default() -> Self {
        StepperConfig {
            h: 1e-2,
            h_max: 1e-2,
            min_step: 1e-10,
            blowup_threshold: 1e6,
            max_time: 1e3,
            max_growth: 0.1,
            picard_tol: 1e-12,
            picard_maxiter: 50,
        }
    }
}

impl StepperConfig {
    pub fn validate(&self) -> Result<()> {
        let pos = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidParameter(format!(
                    "{name} must be positive and finite, got {v}"
                )))
            }
        };
        pos("h", self.h)?;
        pos("h_max", self.h_max)?;
        pos("min_step", self.min_step)?;
        pos("blowup_threshold", self.blowup_threshold)?;
        pos("max_time", self.max_time)?;
        pos("max_growth", self.max_growth)?;
        pos("picard_tol", self.picard_tol)?;
        if self.picard_maxiter == 0 {
            return Err(Error::InvalidParameter(
                "picard_maxiter must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

/// `F[|u|^p]` for a spectral field.
pub fn nonlinearity_eval(
    u: &SpectralField,
    p: f64,
    harmonics: &Harmonics,
) -> Result<SpectralField> {
    let g = harmonics.inverse(u)?;
    harmonics.forward(&PowerNonlinearity { p }.apply(&g))
}

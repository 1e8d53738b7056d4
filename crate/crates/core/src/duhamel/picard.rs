//! Fixed-point iteration of the Duhamel map on a uniform time grid.

use super::integrator::{Forcing, PowerNonlinearity};
use super::kernel::kernel_weights_full;
use super::{NonlinearProblem, StepperConfig};
use crate::calculus::fractional_seminorm;
use crate::error::{Error, Result};
use crate::group::plancherel_norm;
use crate::linear::{a0_freq, a1_freq, evolve_state, SolverState};

#[derive(Clone, Debug)]
pub struct PicardResult {
    /// Iterate at `t_k = k T / n`, `k = 0..=n`.
    pub states: Vec<SolverState>,
    /// Number of applications of the Duhamel map.
    pub iterations: usize,
    /// Final `X(T)` distance between successive iterates.
    pub last_diff: f64,
}

/// Solves on `[0, t_end]` with step close to `cfg.h`, starting from the
/// free solution and stopping when successive iterates differ by less than
/// `cfg.picard_tol · max(1, ‖u‖_X)`.
pub fn picard_solve(
    problem: &NonlinearProblem,
    t_end: f64,
    cfg: &StepperConfig,
) -> Result<PicardResult> {
    cfg.validate()?;
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "horizon must be positive, got {t_end}"
        )));
    }
    let n = (t_end / cfg.h).ceil().max(1.0) as usize;
    let h = t_end / n as f64;
    let harmonics = problem.harmonics();
    let alpha = problem.alpha;
    let weights = problem.norm_weights();
    let forcing = PowerNonlinearity { p: problem.p };

    let init = problem.initial_state();
    let free: Vec<SolverState> = (0..=n)
        .map(|k| {
            let mut s = evolve_state(&init, k as f64 * h, alpha);
            s.t = k as f64 * h;
            s
        })
        .collect();

    // per mode and lag m = k - j - 1: weights of N_j and N_{j+1} in u(t_k), ∂ₜu(t_k)
    let modes = harmonics.modes().modes();
    let lag_weights: Vec<Vec<[f64; 4]>> = modes
        .iter()
        .map(|md| {
            let w = alpha.frequency(md.lambda_sq);
            let k = kernel_weights_full(h, w);
            (0..n)
                .map(|m| {
                    let tau = m as f64 * h;
                    let (a0, a1) = (a0_freq(tau, w), a1_freq(tau, w));
                    [
                        a0 * k.w0 + a1 * k.v0,
                        a0 * k.w1 + a1 * k.v1,
                        a0 * k.v0 - w * w * a1 * k.w0,
                        a0 * k.v1 - w * w * a1 * k.w1,
                    ]
                })
                .collect()
        })
        .collect();

    let mut current = free.clone();
    let mut last_diff = f64::INFINITY;
    for iteration in 1..=cfg.picard_maxiter {
        let mut forcing_hat = Vec::with_capacity(n + 1);
        for s in &current {
            let g = harmonics.inverse(&s.u)?;
            let f = harmonics.forward(&forcing.apply(&g))?;
            if !f.is_finite() {
                return Err(Error::ContractionFailure {
                    iterations: iteration,
                    last_diff,
                });
            }
            forcing_hat.push(f);
        }
        let mut next = free.clone();
        for (k, s) in next.iter_mut().enumerate().skip(1) {
            for j in 0..k {
                let lag = k - j - 1;
                let (f0, f1) = (&forcing_hat[j], &forcing_hat[j + 1]);
                for (i, lw) in lag_weights.iter().enumerate() {
                    let c = lw[lag];
                    let (b0, b1) = (f0.block(i), f1.block(i));
                    for (q, (a, b)) in
                        s.u.block_mut(i)
                            .iter_mut()
                            .zip(s.ut.block_mut(i).iter_mut())
                            .enumerate()
                    {
                        *a += b0[q] * c[0] + b1[q] * c[1];
                        *b += b0[q] * c[2] + b1[q] * c[3];
                    }
                }
            }
        }

        let mut diff = 0.0f64;
        let mut size = 0.0f64;
        for (a, b) in next.iter().zip(&current) {
            let du = a.u.sub(&b.u)?;
            let dut = a.ut.sub(&b.ut)?;
            let d = plancherel_norm(&du) / weights.a(a.t)
                + fractional_seminorm(&du, alpha)
                + plancherel_norm(&dut);
            let x = plancherel_norm(&a.u) / weights.a(a.t)
                + fractional_seminorm(&a.u, alpha)
                + plancherel_norm(&a.ut);
            diff = diff.max(d);
            size = size.max(x);
        }
        if !diff.is_finite() {
            return Err(Error::ContractionFailure {
                iterations: iteration,
                last_diff,
            });
        }
        last_diff = diff;
        current = next;
        if diff <= cfg.picard_tol * size.max(1.0) {
            return Ok(PicardResult {
                states: current,
                iterations: iteration,
                last_diff,
            });
        }
    }
    Err(Error::ContractionFailure {
        iterations: cfg.picard_maxiter,
        last_diff,
    })
}

//! Fixed-step runs with norm diagnostics.

use std::io::Write;

use serde::Serialize;

use super::integrator::{Integrator, PowerNonlinearity};
use super::{NonlinearProblem, StepperConfig};
use crate::calculus::{fractional_seminorm, FracOrder};
use crate::error::{Error, Result};
use crate::group::{plancherel_norm, GridField};
use crate::linear::SolverState;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct TrajectoryRecord {
    pub t: f64,
    pub l2: f64,
    /// `‖u‖₂ + ‖(-𝓛)^{α/2}u‖₂`.
    pub hs: f64,
    pub dt_norm: f64,
    pub linf: f64,
    /// Real part of the trivial coefficient (the mean of `u`).
    pub u0: f64,
}

impl TrajectoryRecord {
    pub fn of(state: &SolverState, grid_u: &GridField, alpha: FracOrder) -> Self {
        let l2 = plancherel_norm(&state.u);
        TrajectoryRecord {
            t: state.t,
            l2,
            hs: l2 + fractional_seminorm(&state.u, alpha),
            dt_norm: plancherel_norm(&state.ut),
            linf: grid_u.max_abs(),
            u0: state.u.trivial().re,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub records: Vec<TrajectoryRecord>,
    /// States at the recorded samples.
    pub states: Vec<SolverState>,
    /// Last state reached.
    pub last: SolverState,
    /// Stopped early on the blow-up threshold or a non-finite value.
    pub blew_up: bool,
}

impl Trajectory {
    pub fn write_csv<W: Write>(&self, out: &mut W) -> Result<()> {
        crate::io::write_rows(
            out,
            &["t", "L2_norm", "Hs_norm", "dt_norm", "Linf_norm", "U0"],
            self.records
                .iter()
                .map(|r| vec![r.t, r.l2, r.hs, r.dt_norm, r.linf, r.u0]),
        )
    }
}

/// Integrates with constant step `cfg.h` up to `t_end`, recording every
/// `sample_every`-th state and the last one.
pub fn integrate(
    problem: &NonlinearProblem,
    cfg: &StepperConfig,
    t_end: f64,
    sample_every: usize,
) -> Result<Trajectory> {
    cfg.validate()?;
    if !(t_end >= 0.0 && t_end.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "end time must be finite and >= 0, got {t_end}"
        )));
    }
    let every = sample_every.max(1);
    let n = (t_end / cfg.h)
        .round()
        .max(if t_end > 0.0 { 1.0 } else { 0.0 }) as usize;
    let h = if n == 0 { 0.0 } else { t_end / n as f64 };
    let mut it = Integrator::new(
        problem.harmonics(),
        problem.alpha,
        PowerNonlinearity { p: problem.p },
    );
    let mut cur = it.evaluate(problem.initial_state())?;
    let mut records = vec![TrajectoryRecord::of(&cur.state, &cur.grid_u, problem.alpha)];
    let mut states = vec![cur.state.clone()];
    for k in 1..=n {
        let next = match it.advance(&cur, h) {
            Ok(e) => e,
            Err(Error::NonFinite { .. }) => {
                return Ok(Trajectory {
                    records,
                    states,
                    last: cur.state,
                    blew_up: true,
                });
            }
            Err(e) => return Err(e),
        };
        cur = next;
        cur.state.t = k as f64 * h;
        let over = cur.linf() >= cfg.blowup_threshold;
        if k % every == 0 || k == n || over {
            records.push(TrajectoryRecord::of(&cur.state, &cur.grid_u, problem.alpha));
            states.push(cur.state.clone());
        }
        if over {
            return Ok(Trajectory {
                records,
                states,
                last: cur.state,
                blew_up: true,
            });
        }
    }
    Ok(Trajectory {
        records,
        states,
        last: cur.state,
        blew_up: false,
    })
}

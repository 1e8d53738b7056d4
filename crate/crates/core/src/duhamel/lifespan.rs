//! Adaptive integration up to the first crossing of `‖u‖_∞ = M`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::integrator::{Evaluated, Integrator, PowerNonlinearity};
use super::{NonlinearProblem, StepperConfig};
use crate::calculus::fractional_seminorm;
use crate::error::{Error, Result};
use crate::group::plancherel_norm;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum TerminalReason {
    /// `‖u‖_∞` reached the blow-up threshold.
    Threshold,
    /// The step controller went below `min_step`.
    StepCollapse,
    /// `max_time` was reached first.
    Horizon,
}

impl fmt::Display for TerminalReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TerminalReason::Threshold => "THRESHOLD",
            TerminalReason::StepCollapse => "STEP_COLLAPSE",
            TerminalReason::Horizon => "HORIZON",
        })
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct LifespanResult {
    pub t_num: f64,
    pub reason: TerminalReason,
    pub steps: usize,
    pub rejected: usize,
    pub linf: f64,
    pub l2: f64,
    pub hs: f64,
    pub dt_norm: f64,
}

/// Steps until `‖u‖_∞ ≥ cfg.blowup_threshold`, the step collapses, or
/// `cfg.max_time` is reached.
///
/// Steps whose relative growth of `‖u‖_∞` exceeds `cfg.max_growth` are
/// retried at half length; the crossing time is located by bisection inside
/// the last step.
pub fn measure_lifespan(problem: &NonlinearProblem, cfg: &StepperConfig) -> Result<LifespanResult> {
    cfg.validate()?;
    let mut it = Integrator::new(
        problem.harmonics(),
        problem.alpha,
        PowerNonlinearity { p: problem.p },
    );
    let mut cur = it.evaluate(problem.initial_state())?;
    let threshold = cfg.blowup_threshold;
    let mut h = cfg.h.min(cfg.h_max.max(cfg.h));
    let h_max = cfg.h_max.max(cfg.h);
    let (mut steps, mut rejected) = (0usize, 0usize);

    if cur.linf() >= threshold {
        return Ok(finish(
            problem,
            &cur,
            0.0,
            TerminalReason::Threshold,
            steps,
            rejected,
        ));
    }
    loop {
        let remaining = cfg.max_time - cur.state.t;
        if remaining <= cfg.max_time * 1e-15 {
            let t = cfg.max_time;
            return Ok(finish(
                problem,
                &cur,
                t,
                TerminalReason::Horizon,
                steps,
                rejected,
            ));
        }
        let h_try = h.min(remaining);
        let next = match it.advance(&cur, h_try) {
            Ok(n) => Some(n),
            Err(Error::NonFinite { .. }) => None,
            Err(e) => return Err(e),
        };
        let l0 = cur.linf();
        let accept = match &next {
            None => false,
            Some(n) => l0 == 0.0 || n.linf() <= l0 * (1.0 + cfg.max_growth),
        };
        if !accept {
            rejected += 1;
            h /= 2.0;
            if h < cfg.min_step {
                let t = cur.state.t;
                return Ok(finish(
                    problem,
                    &cur,
                    t,
                    TerminalReason::StepCollapse,
                    steps,
                    rejected,
                ));
            }
            continue;
        }
        let next = next.expect("accepted steps exist");
        steps += 1;
        if next.linf() >= threshold {
            let (t, end) = bisect_crossing(&mut it, &cur, next, h_try, threshold)?;
            return Ok(finish(
                problem,
                &end,
                t.min(cfg.max_time),
                TerminalReason::Threshold,
                steps,
                rejected,
            ));
        }
        let growth = if l0 == 0.0 {
            0.0
        } else {
            next.linf() / l0 - 1.0
        };
        cur = next;
        if growth.abs() < cfg.max_growth / 4.0 && h_try == h {
            h = (2.0 * h).min(h_max);
        }
    }
}

fn bisect_crossing<F: super::Forcing>(
    it: &mut Integrator<'_, F>,
    start: &Evaluated,
    end: Evaluated,
    h: f64,
    threshold: f64,
) -> Result<(f64, Evaluated)> {
    let (mut lo, mut hi) = (0.0, h);
    let mut best = end;
    for _ in 0..60 {
        if hi - lo <= 1e-15 * (start.state.t + h) {
            break;
        }
        let mid = 0.5 * (lo + hi);
        match it.advance(start, mid) {
            Ok(e) if e.linf() < threshold => lo = mid,
            Ok(e) => {
                hi = mid;
                best = e;
            }
            Err(Error::NonFinite { .. }) => hi = mid,
            Err(e) => return Err(e),
        }
    }
    Ok((start.state.t + hi, best))
}

fn finish(
    problem: &NonlinearProblem,
    at: &Evaluated,
    t: f64,
    reason: TerminalReason,
    steps: usize,
    rejected: usize,
) -> LifespanResult {
    LifespanResult {
        t_num: t,
        reason,
        steps,
        rejected,
        linf: at.linf(),
        l2: plancherel_norm(&at.state.u),
        hs: fractional_seminorm(&at.state.u, problem.alpha),
        dt_norm: plancherel_norm(&at.state.ut),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::FracOrder;
    use crate::group::{GridField, GroupId, GroupSpec, Harmonics};
    use std::sync::Arc;

    fn constant(u0: f64, u1: f64, eps: f64, p: f64) -> NonlinearProblem {
        let h = Arc::new(Harmonics::new(GroupSpec::new(GroupId::Su2, 1.0).unwrap()));
        let n = h.grid_len();
        NonlinearProblem::new(
            h,
            FracOrder::new(0.5).unwrap(),
            p,
            eps,
            GridField::constant(n, u0),
            GridField::constant(n, u1),
        )
        .unwrap()
    }

    #[test]
    fn zero_data_reaches_horizon() {
        let pr = constant(0.0, 0.0, 1.0, 2.0);
        let cfg = StepperConfig {
            max_time: 2.0,
            h: 0.1,
            h_max: 0.5,
            ..Default::default()
        };
        let r = measure_lifespan(&pr, &cfg).unwrap();
        assert_eq!(r.reason, TerminalReason::Horizon);
        assert_eq!(r.t_num, 2.0);
    }

    #[test]
    fn constant_data_blows_up_at_ode_time() {
        // y'' = y², y(0) = 1, y'(0) = 0: T = ∫₁^∞ dy / sqrt(2(y³−1)/3)
        let pr = constant(1.0, 0.0, 1.0, 2.0);
        let cfg = StepperConfig {
            h: 1e-3,
            h_max: 1e-3,
            max_growth: 0.0025,
            blowup_threshold: 1e6,
            ..Default::default()
        };
        let r = measure_lifespan(&pr, &cfg).unwrap();
        assert_eq!(r.reason, TerminalReason::Threshold);
        let t_inf = 2.9744774254008;
        let tail = (6.0f64).sqrt() * 1e-3;
        assert!((r.t_num - (t_inf - tail)).abs() < 1e-5, "{}", r.t_num);
    }

    #[test]
    fn terminal_reason_labels() {
        assert_eq!(TerminalReason::StepCollapse.to_string(), "STEP_COLLAPSE");
        assert_eq!(
            serde_json::to_string(&TerminalReason::Threshold).unwrap(),
            "\"THRESHOLD\""
        );
    }
}

//! Adaptive Dormand-Prince 5(4) integration of `F'' = B (t+R)^{-q} |F|^p`.

use serde::Serialize;

use crate::error::{Error, Result};

/// Right-hand side parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerOde {
    pub p: f64,
    pub b: f64,
    pub r: f64,
    pub q: f64,
}

impl PowerOde {
    /// `y'' = |y|^p`.
    pub fn autonomous(p: f64) -> Self {
        PowerOde {
            p,
            b: 1.0,
            r: 0.0,
            q: 0.0,
        }
    }

    fn rhs(&self, t: f64, y: [f64; 2]) -> [f64; 2] {
        let w = if self.q == 0.0 {
            self.b
        } else {
            self.b * (t + self.r).powf(-self.q)
        };
        [y[1], w * y[0].abs().powf(self.p)]
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OdePoint {
    pub t: f64,
    pub f: f64,
    pub fp: f64,
}

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const B1: f64 = 35.0 / 384.0;
const B3: f64 = 500.0 / 1113.0;
const B4: f64 = 125.0 / 192.0;
const B5: f64 = -2187.0 / 6784.0;
const B6: f64 = 11.0 / 84.0;
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Stepper carrying the current point and step size.
#[derive(Clone, Debug)]
pub struct Dopri {
    ode: PowerOde,
    pub point: OdePoint,
    h: f64,
    pub rtol: f64,
    pub atol: f64,
}

impl Dopri {
    pub fn new(ode: PowerOde, t0: f64, f0: f64, f1: f64) -> Self {
        Dopri {
            ode,
            point: OdePoint {
                t: t0,
                f: f0,
                fp: f1,
            },
            h: 1e-3,
            rtol: 1e-12,
            atol: 1e-14,
        }
    }

    /// One trial step of length `h`: new point and scaled error.
    fn trial(&self, h: f64) -> (OdePoint, f64) {
        let OdePoint { t, f, fp } = self.point;
        let y = [f, fp];
        let ax = |k: &[[f64; 2]], c: &[f64]| {
            let mut out = y;
            for (ki, ci) in k.iter().zip(c) {
                out[0] += h * ci * ki[0];
                out[1] += h * ci * ki[1];
            }
            out
        };
        let o = &self.ode;
        let k1 = o.rhs(t, y);
        let k2 = o.rhs(t + C2 * h, ax(&[k1], &[A21]));
        let k3 = o.rhs(t + C3 * h, ax(&[k1, k2], &[A31, A32]));
        let k4 = o.rhs(t + C4 * h, ax(&[k1, k2, k3], &[A41, A42, A43]));
        let k5 = o.rhs(t + C5 * h, ax(&[k1, k2, k3, k4], &[A51, A52, A53, A54]));
        let k6 = o.rhs(t + h, ax(&[k1, k2, k3, k4, k5], &[A61, A62, A63, A64, A65]));
        let yn = ax(&[k1, k3, k4, k5, k6], &[B1, B3, B4, B5, B6]);
        let k7 = o.rhs(t + h, yn);
        let mut err = 0.0f64;
        for i in 0..2 {
            let e =
                h * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
            let sc = self.atol + self.rtol * y[i].abs().max(yn[i].abs());
            err = err.max((e / sc).abs());
        }
        if !(yn[0].is_finite() && yn[1].is_finite()) {
            err = f64::INFINITY;
        }
        (
            OdePoint {
                t: t + h,
                f: yn[0],
                fp: yn[1],
            },
            err,
        )
    }

    /// Takes one accepted step not past `t_limit`; returns the step used.
    pub fn step(&mut self, t_limit: f64) -> Result<f64> {
        loop {
            let remaining = t_limit - self.point.t;
            let h = self.h.min(remaining);
            if !(h > 1e-15 * self.point.t.abs().max(1.0)) {
                return Err(Error::NonFinite { t: self.point.t });
            }
            let (next, err) = self.trial(h);
            let fac = if err == 0.0 {
                5.0
            } else {
                (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
            };
            if err <= 1.0 {
                self.point = next;
                if h == self.h || fac < 1.0 {
                    self.h = h * fac;
                }
                return Ok(h);
            }
            self.h = h * fac.min(0.9);
        }
    }

    /// Integrates exactly to `t`.
    pub fn advance_to(&mut self, t: f64) -> Result<()> {
        while self.point.t < t {
            self.step(t)?;
        }
        Ok(())
    }

    /// Smallest `s ∈ (0, h]` with `F(t + s) ≥ level`, by bisection on single steps.
    fn locate(&self, h: f64, level: f64) -> f64 {
        let (mut lo, mut hi) = (0.0, h);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.trial(mid).0.f >= level {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    }
}

/// Outcome of an integration up to the blow-up threshold.
#[derive(Clone, Debug, Serialize)]
pub struct OdeBlowup {
    pub blew_up: bool,
    /// Crossing time of `F = threshold`.
    pub t_threshold: Option<f64>,
    /// Crossing time of `F = 2 · threshold`.
    pub t_double: Option<f64>,
    /// Richardson extrapolation of the two crossings.
    pub blowup_time: Option<f64>,
    /// Accepted steps up to the last crossing or the horizon.
    pub series: Vec<OdePoint>,
}

/// Integrates from `(0, f0, f1)` until `F ≥ 2·threshold` or `t = horizon`.
///
/// Near blow-up `T − t(M) ≈ c M^{-(p−1)/2}`, so
/// `T ≈ (2^k t(2M) − t(M)) / (2^k − 1)` with `k = (p−1)/2`.
pub fn ode_blowup_integrate(
    ode: PowerOde,
    f0: f64,
    f1: f64,
    threshold: f64,
    horizon: f64,
) -> Result<OdeBlowup> {
    if !(ode.p > 1.0 && ode.b > 0.0 && ode.q >= 0.0 && ode.r >= 0.0)
        || !(f0.is_finite() && f1.is_finite())
    {
        return Err(Error::InvalidParameter(
            "ODE parameters must be finite with p > 1, B > 0, q, R >= 0".into(),
        ));
    }
    if ode.q > 0.0 && ode.r == 0.0 {
        return Err(Error::InvalidParameter("q > 0 needs R > 0".into()));
    }
    if !(threshold > f0.abs() && horizon > 0.0) {
        return Err(Error::InvalidParameter(
            "threshold must exceed |F(0)| and horizon be positive".into(),
        ));
    }
    let mut s = Dopri::new(ode, 0.0, f0, f1);
    let mut series = vec![s.point];
    let mut t_threshold = None;
    let mut t_double = None;
    while s.point.t < horizon {
        let before = s.clone();
        let h = match s.step(horizon) {
            Ok(h) => h,
            Err(_) => break,
        };
        if t_threshold.is_none() && s.point.f >= threshold {
            t_threshold = Some(before.point.t + before.locate(h, threshold));
        }
        if s.point.f >= 2.0 * threshold {
            t_double = Some(before.point.t + before.locate(h, 2.0 * threshold));
            series.push(s.point);
            break;
        }
        series.push(s.point);
    }
    let blowup_time = match (t_threshold, t_double) {
        (Some(a), Some(b)) => {
            let c = 2f64.powf((ode.p - 1.0) / 2.0);
            Some((c * b - a) / (c - 1.0))
        }
        _ => None,
    };
    Ok(OdeBlowup {
        blew_up: t_double.is_some(),
        t_threshold,
        t_double,
        blowup_time,
        series,
    })
}

/// `½F'² − F^{p+1}/(p+1)`, conserved when `B = 1`, `q = 0`, `F ≥ 0`.
pub fn first_integral(pt: &OdePoint, p: f64) -> f64 {
    0.5 * pt.fp * pt.fp - pt.f.abs().powf(p + 1.0) / (p + 1.0)
}

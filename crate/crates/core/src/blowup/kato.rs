//! Upper bounds on the blow-up time of `F'' ≥ B (t+R)^{-q} |F|^p` under the
//! growth hypothesis `F(t) ≥ A t^a` for `t ≥ T₀`.

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::ode::{ode_blowup_integrate, Dopri, OdeBlowup, OdePoint, PowerOde};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct KatoParams {
    pub p: f64,
    pub a: f64,
    pub q: f64,
    /// Growth constant `A`.
    #[serde(rename = "A")]
    pub big_a: f64,
    #[serde(rename = "B")]
    pub big_b: f64,
    #[serde(rename = "R")]
    pub r: f64,
    #[serde(rename = "T0")]
    pub t0: f64,
    #[serde(rename = "F0")]
    pub f0: f64,
    #[serde(rename = "F1")]
    pub f1: f64,
}

/// Which set of sign conditions the initial values satisfy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KatoBranch {
    /// `F(0) ≥ 0`, `F'(0) > 0`.
    Velocity,
    /// `F(0) > 0`, `F'(0) = 0`.
    Rest,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KatoBound {
    pub m: f64,
    /// `T₁` or `T₂`.
    pub t_ref: f64,
    /// `2^{2/M} · t_ref`.
    pub bound: f64,
}

/// `M = (p − 1) a / 2 − q / 2 + 1`.
pub fn kato_m(p: f64, a: f64, q: f64) -> f64 {
    (p - 1.0) * a / 2.0 - q / 2.0 + 1.0
}

impl KatoParams {
    pub fn m(&self) -> f64 {
        kato_m(self.p, self.a, self.q)
    }

    pub fn ode(&self) -> PowerOde {
        PowerOde {
            p: self.p,
            b: self.big_b,
            r: self.r,
            q: self.q,
        }
    }

    fn check_domain(&self) -> Result<()> {
        let all = [
            self.p, self.a, self.q, self.big_a, self.big_b, self.r, self.t0, self.f0, self.f1,
        ];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter(
                "Kato parameters must be finite".into(),
            ));
        }
        if !(self.p > 1.0
            && self.a > 0.0
            && self.q >= 0.0
            && self.big_a > 0.0
            && self.big_b > 0.0
            && self.r > 0.0
            && self.t0 > 0.0)
        {
            return Err(Error::InvalidParameter(
                "need p > 1 and a, A, B, R, T0 > 0, q >= 0".into(),
            ));
        }
        let m = self.m();
        if m <= 0.0 {
            return Err(Error::KatoInapplicable(format!("M = {m} is not positive")));
        }
        Ok(())
    }

    /// Branch selected by the initial values, if any.
    pub fn branch(&self) -> Option<KatoBranch> {
        if self.f0 >= 0.0 && self.f1 > 0.0 {
            Some(KatoBranch::Velocity)
        } else if self.f0 > 0.0 && self.f1 == 0.0 {
            Some(KatoBranch::Rest)
        } else {
            None
        }
    }

    pub fn is_applicable(&self, branch: KatoBranch) -> bool {
        self.check_domain().is_ok() && self.branch() == Some(branch)
    }

    /// `C₀ A^{−(p−1)/(2M)}`, the size `T₁` must reach.
    pub fn c0_threshold(&self, c0: f64) -> f64 {
        c0 * self.big_a.powf(-(self.p - 1.0) / (2.0 * self.m()))
    }

    /// `T₁ / A^{−(p−1)/(2M)}`: the largest `C₀` for which the size condition holds.
    pub fn c0_ratio(&self, t_ref: f64) -> f64 {
        t_ref / self.c0_threshold(1.0)
    }
}

/// Bound for `F(0) ≥ 0`, `F'(0) > 0`: `T₁ = max{T₀, F(0)/F'(0), R}`.
pub fn kato_bound(params: &KatoParams) -> Result<KatoBound> {
    params.check_domain()?;
    if params.f1 <= 0.0 {
        return Err(Error::WrongLemma(format!(
            "F'(0) = {} is not positive",
            params.f1
        )));
    }
    if params.f0 < 0.0 {
        return Err(Error::KatoInapplicable(format!(
            "F(0) = {} is negative",
            params.f0
        )));
    }
    let m = params.m();
    let t1 = params.t0.max(params.f0 / params.f1).max(params.r);
    Ok(KatoBound {
        m,
        t_ref: t1,
        bound: 2f64.powf(2.0 / m) * t1,
    })
}

/// Bound for `F(0) > 0`, `F'(0) = 0`: `T₂ = max{T₀, t₀, R}` where
/// `F(t₀) ≥ 2F(0)` is checked by integrating the extremal equation.
pub fn kato2_bound(params: &KatoParams, t0_double: f64) -> Result<KatoBound> {
    params.check_domain()?;
    if params.f1 != 0.0 {
        return Err(Error::WrongLemma(format!(
            "F'(0) = {} is not zero",
            params.f1
        )));
    }
    if params.f0 <= 0.0 {
        return Err(Error::KatoInapplicable(format!(
            "F(0) = {} is not positive",
            params.f0
        )));
    }
    if !(t0_double >= 0.0 && t0_double.is_finite()) {
        return Err(Error::HypothesisViolation(format!(
            "t0 = {t0_double} is not a valid time"
        )));
    }
    let mut s = Dopri::new(params.ode(), 0.0, params.f0, 0.0);
    let reached = s.advance_to(t0_double).is_err() || s.point.f >= 2.0 * params.f0 * (1.0 - 1e-12);
    if !reached {
        return Err(Error::HypothesisViolation(format!(
            "F({t0_double}) = {} is below 2F(0) = {}",
            s.point.f,
            2.0 * params.f0
        )));
    }
    let m = params.m();
    let t2 = params.t0.max(t0_double).max(params.r);
    Ok(KatoBound {
        m,
        t_ref: t2,
        bound: 2f64.powf(2.0 / m) * t2,
    })
}

/// First sample time with `F ≥ 2F(0)`.
pub fn doubling_time(series: &[OdePoint]) -> Option<f64> {
    let f0 = series.first()?.f;
    series.iter().find(|p| p.f >= 2.0 * f0).map(|p| p.t)
}

/// Largest `A` with `F(t) ≥ A t^a` on every sample with `t ≥ T₀`.
pub fn growth_constant(series: &[OdePoint], a: f64, t0: f64) -> Option<f64> {
    let a_max = series
        .iter()
        .filter(|p| p.t >= t0 && p.t > 0.0)
        .map(|p| p.f / p.t.powf(a))
        .fold(f64::INFINITY, f64::min);
    (a_max.is_finite() && a_max > 0.0).then_some(a_max)
}

/// One randomized instance with its integrated blow-up time.
#[derive(Clone, Debug, Serialize)]
pub struct KatoInstance {
    pub params: KatoParams,
    pub branch: KatoBranch,
    pub bound: KatoBound,
    pub blowup_time: f64,
    /// `T₁ / A^{−(p−1)/(2M)}`.
    pub c0_ratio: f64,
}

impl KatoInstance {
    pub fn within_bound(&self) -> bool {
        self.blowup_time < self.bound.bound
    }
}

/// Integrates the extremal equation, sets `A` to the verified growth
/// constant (slightly reduced) and evaluates the matching bound.
///
/// Returns `Ok(None)` when no blow-up is seen before `horizon` or no sample
/// lies past `T₀`.
pub fn build_instance(
    mut params: KatoParams,
    threshold: f64,
    horizon: f64,
) -> Result<Option<KatoInstance>> {
    let branch = params
        .branch()
        .ok_or_else(|| Error::KatoInapplicable("initial values fit neither branch".into()))?;
    let run: OdeBlowup =
        ode_blowup_integrate(params.ode(), params.f0, params.f1, threshold, horizon)?;
    let Some(t_blow) = run.blowup_time else {
        return Ok(None);
    };
    let Some(a_max) = growth_constant(&run.series, params.a, params.t0) else {
        return Ok(None);
    };
    params.big_a = a_max * (1.0 - 1e-9);
    let bound = match branch {
        KatoBranch::Velocity => kato_bound(&params)?,
        KatoBranch::Rest => {
            let Some(td) = doubling_time(&run.series) else {
                return Ok(None);
            };
            kato2_bound(&params, td)?
        }
    };
    let c0_ratio = params.c0_ratio(bound.t_ref);
    Ok(Some(KatoInstance {
        params,
        branch,
        bound,
        blowup_time: t_blow,
        c0_ratio,
    }))
}

/// Smallest `C₀` (by bisection) such that every instance with
/// `T_ref ≥ C₀ A^{−(p−1)/(2M)}` satisfies the bound.
pub fn calibrate_c0(instances: &[KatoInstance]) -> f64 {
    let ok_above = |c: f64| {
        instances
            .iter()
            .filter(|i| i.c0_ratio >= c)
            .all(|i| i.within_bound())
    };
    let mut hi = instances.iter().map(|i| i.c0_ratio).fold(0.0, f64::max) * 2.0 + 1.0;
    if ok_above(0.0) {
        return 0.0;
    }
    let mut lo = 0.0;
    while !ok_above(hi) {
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if ok_above(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Factor applied to a sampled `C₀`; the bisection value bounds the true
/// supremum from below.
pub const C0_SAMPLING_MARGIN: f64 = 1.05;

/// Random instance of one `(p, a, q, B)` cell with `A = 1`: either branch with
/// equal probability, `R, T₀ ∈ [0.2, 2)`.
pub fn random_params<R: Rng>(rng: &mut R, p: f64, a: f64, q: f64, big_b: f64) -> KatoParams {
    let rest = rng.gen_bool(0.5);
    KatoParams {
        p,
        a,
        q,
        big_a: 1.0,
        big_b,
        r: rng.gen_range(0.2..2.0),
        t0: rng.gen_range(0.2..2.0),
        f0: if rest {
            rng.gen_range(0.1..2.0)
        } else {
            rng.gen_range(0.0..1.0)
        },
        f1: if rest { 0.0 } else { rng.gen_range(0.05..2.0) },
    }
}

/// Draws instances until `n` have an observed blow-up.
pub fn sample_instances<R: Rng>(
    rng: &mut R,
    (p, a, q, big_b): (f64, f64, f64, f64),
    n: usize,
    threshold: f64,
    horizon: f64,
) -> Result<Vec<KatoInstance>> {
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        if let Some(i) = build_instance(random_params(rng, p, a, q, big_b), threshold, horizon)? {
            out.push(i);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(p: f64, a: f64, q: f64) -> KatoParams {
        KatoParams {
            p,
            a,
            q,
            big_a: 1.0,
            big_b: 1.0,
            r: 1.0,
            t0: 1.0,
            f0: 0.5,
            f1: 1.0,
        }
    }

    #[test]
    fn m_and_bound_arithmetic() {
        let b = kato_bound(&params(3.0, 1.0, 0.0)).unwrap();
        assert_eq!(b.m, 2.0);
        assert_eq!(b.t_ref, 1.0);
        assert_eq!(b.bound, 2.0);
        let b = kato_bound(&params(2.0, 2.0, 2.0)).unwrap();
        assert_eq!(b.m, 1.0);
        assert_eq!(b.bound, 4.0);
        let mut p = params(2.0, 2.0, 2.0);
        p.f0 = 3.0;
        assert_eq!(kato_bound(&p).unwrap().t_ref, 3.0);
    }

    #[test]
    fn errors() {
        // M = 0.5·1·0.1 − 3 + 1 < 0
        assert!(matches!(
            kato_bound(&params(1.1, 1.0, 6.0)),
            Err(Error::KatoInapplicable(_))
        ));
        let mut p = params(2.0, 1.0, 0.0);
        p.f1 = 0.0;
        assert!(matches!(kato_bound(&p), Err(Error::WrongLemma(_))));
        assert!(matches!(
            kato2_bound(&params(2.0, 1.0, 0.0), 1.0),
            Err(Error::WrongLemma(_))
        ));
        // F'' > 0 makes F increase, but not to 2F(0) by t = 0.01
        assert!(matches!(
            kato2_bound(&p, 0.01),
            Err(Error::HypothesisViolation(_))
        ));
    }

    #[test]
    fn rest_branch_bound() {
        let mut p = params(3.0, 1.0, 0.0);
        p.f0 = 1.0;
        p.f1 = 0.0;
        let b = kato2_bound(&p, 1.5).unwrap();
        assert_eq!(b.m, 2.0);
        assert_eq!(b.t_ref, 1.5);
        assert_eq!(b.bound, 3.0);
        assert_eq!(p.branch(), Some(KatoBranch::Rest));
    }

    #[test]
    fn instance_respects_bound() {
        let mut p = params(2.0, 1.0, 0.0);
        p.f0 = 1.0;
        p.f1 = 1.0;
        let inst = build_instance(p, 1e8, 100.0).unwrap().unwrap();
        assert!(inst.within_bound(), "{inst:?}");
        assert!(inst.params.big_a > 0.0);
    }

    #[test]
    fn calibration_separates_violators() {
        let mk = |ratio: f64, ok: bool| KatoInstance {
            params: params(2.0, 1.0, 0.0),
            branch: KatoBranch::Velocity,
            bound: KatoBound {
                m: 1.5,
                t_ref: 1.0,
                bound: 2.0,
            },
            blowup_time: if ok { 1.0 } else { 3.0 },
            c0_ratio: ratio,
        };
        let v = vec![mk(0.5, false), mk(1.0, true), mk(2.0, true), mk(0.8, false)];
        let c0 = calibrate_c0(&v);
        assert!(c0 > 0.8 && c0 <= 1.0, "{c0}");
        assert_eq!(calibrate_c0(&v[1..3]), 0.0);
    }
}

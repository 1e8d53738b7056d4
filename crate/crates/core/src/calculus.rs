//! Fractional Laplace-Beltrami multipliers, Sobolev and solution-space
//! norms, and the Gagliardo-Nirenberg ratio.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{plancherel_norm, GridField, Harmonics, Mode, QuadratureGrid, SpectralField};
use crate::linear::SolverState;

/// Fractional order `α ∈ (0, 1)`; `α = 1` only through [`FracOrder::classical`].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FracOrder {
    alpha: f64,
    classical: bool,
}

impl FracOrder {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "fractional order must lie in (0, 1), got {alpha}"
            )));
        }
        Ok(FracOrder {
            alpha,
            classical: false,
        })
    }

    /// The classical wave operator `-𝓛` (`α = 1`).
    pub fn classical() -> Self {
        FracOrder {
            alpha: 1.0,
            classical: true,
        }
    }

    pub fn value(self) -> f64 {
        self.alpha
    }

    pub fn is_classical(self) -> bool {
        self.classical
    }

    /// Frequency `λ^α` of a mode.
    pub fn frequency(self, lambda_sq: f64) -> f64 {
        if lambda_sq == 0.0 {
            0.0
        } else {
            lambda_sq.powf(self.alpha / 2.0)
        }
    }
}

/// Selects the weight `a(t)` of the solution-space norm and the lifespan
/// exponent denominator `b(p)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrajectoryNormWeights {
    pub u1_is_zero: bool,
}

impl TrajectoryNormWeights {
    /// `a(t) = 1 + t` when `u₁ ≠ 0`, else `1`.
    pub fn a(self, t: f64) -> f64 {
        if self.u1_is_zero {
            1.0
        } else {
            1.0 + t
        }
    }

    /// `b(p) = p + 1` when `u₁ ≠ 0`, else `2`.
    pub fn b(self, p: f64) -> f64 {
        if self.u1_is_zero {
            2.0
        } else {
            p + 1.0
        }
    }
}

/// `(-𝓛)^{α/2}`: multiplies every block by `λ_ξ^α`.
pub fn fractional_laplacian_half(field: &SpectralField, alpha: FracOrder) -> SpectralField {
    field.map_modes(|m: &Mode| alpha.frequency(m.lambda_sq))
}

/// `(-𝓛)^α`: multiplies every block by `λ_ξ^{2α}`.
pub fn fractional_laplacian(field: &SpectralField, alpha: FracOrder) -> SpectralField {
    field.map_modes(|m: &Mode| alpha.frequency(m.lambda_sq).powi(2))
}

/// `‖(-𝓛)^{α/2} F‖_{L²}` without materializing the multiplied field.
pub fn fractional_seminorm(field: &SpectralField, alpha: FracOrder) -> f64 {
    field
        .modes()
        .modes()
        .iter()
        .enumerate()
        .map(|(i, m)| {
            let w = alpha.frequency(m.lambda_sq).powi(2);
            m.dim as f64 * w * field.block(i).iter().map(|c| c.norm_sqr()).sum::<f64>()
        })
        .sum::<f64>()
        .sqrt()
}

/// `‖F‖_{L²} + ‖(-𝓛)^{α/2} F‖_{L²}`.
pub fn sobolev_norm(field: &SpectralField, alpha: FracOrder) -> f64 {
    plancherel_norm(field) + fractional_seminorm(field, alpha)
}

/// Discrete `X(T)` norm: supremum over the samples of
/// `a(t)^{-1}‖u‖₂ + ‖(-𝓛)^{α/2}u‖₂ + ‖∂ₜu‖₂`.
pub fn xt_norm<'a, I>(traj: I, alpha: FracOrder, weights: TrajectoryNormWeights) -> Result<f64>
where
    I: IntoIterator<Item = &'a SolverState>,
{
    let mut sup: Option<f64> = None;
    for s in traj {
        let v = plancherel_norm(&s.u) / weights.a(s.t)
            + fractional_seminorm(&s.u, alpha)
            + plancherel_norm(&s.ut);
        sup = Some(sup.map_or(v, |x: f64| x.max(v)));
    }
    sup.ok_or(Error::EmptyTrajectory)
}

/// `(Σ w |f|^q)^{1/q}`, or the grid maximum for `q = ∞`.
pub fn lq_norm(f: &GridField, q: f64, grid: &QuadratureGrid) -> Result<f64> {
    if q.is_nan() || q < 1.0 {
        return Err(Error::InvalidParameter(format!(
            "Lebesgue exponent must be >= 1, got {q}"
        )));
    }
    f.check_len(grid.len())?;
    if q.is_infinite() {
        return Ok(f.max_abs());
    }
    let s: f64 = f
        .values()
        .iter()
        .zip(&grid.weights)
        .map(|(v, w)| w * v.norm().powf(q))
        .sum();
    Ok(s.powf(1.0 / q))
}

/// Largest admissible Lebesgue exponent `2n/(n-2α)` (infinite when `n ≤ 2α`).
pub fn gn_critical_exponent(n: usize, alpha: FracOrder) -> f64 {
    let n = n as f64;
    let d = n - 2.0 * alpha.value();
    if d <= 0.0 {
        f64::INFINITY
    } else {
        2.0 * n / d
    }
}

/// Interpolation exponent `θ(n, q, α) = n/α · (1/2 − 1/q)`.
pub fn gn_theta(n: usize, q: f64, alpha: FracOrder) -> Result<f64> {
    let a = alpha.value();
    let nf = n as f64;
    let floor_alpha = a.floor();
    if nf < 2.0 * floor_alpha + 2.0 {
        return Err(Error::Inadmissible(format!(
            "dimension n = {n} below 2[α] + 2 = {}",
            2.0 * floor_alpha + 2.0
        )));
    }
    if 2.0 >= nf / a {
        return Err(Error::Inadmissible(format!(
            "need 2 < n/α, got n = {n}, α = {a}"
        )));
    }
    let qc = gn_critical_exponent(n, alpha);
    if !(q >= 2.0 && q <= qc * (1.0 + 1e-15)) {
        return Err(Error::Inadmissible(format!("q = {q} outside [2, {qc}]")));
    }
    if q == qc {
        return Ok(1.0);
    }
    let theta = nf / a * (0.5 - 1.0 / q);
    Ok(theta.clamp(0.0, 1.0))
}

/// `‖f‖_q / (‖f‖_{H^α}^θ ‖f‖₂^{1−θ})` for a band-limited field.
pub fn gn_ratio(f: &GridField, q: f64, alpha: FracOrder, harmonics: &Harmonics) -> Result<f64> {
    let theta = gn_theta(harmonics.spec().dimension(), q, alpha)?;
    let fh = harmonics.forward(f)?;
    let l2 = plancherel_norm(&fh);
    if l2 == 0.0 || f.max_abs() == 0.0 {
        return Err(Error::DegenerateInput(
            "zero field has no Gagliardo-Nirenberg ratio".into(),
        ));
    }
    let hs = sobolev_norm(&fh, alpha);
    let lq = if q == 2.0 {
        l2
    } else {
        lq_norm(f, q, harmonics.grid())?
    };
    Ok(lq / (hs.powf(theta) * l2.powf(1.0 - theta)))
}

//! Verification suites run by `fracwave verify <suite>`.

use std::sync::Arc;

use clap::ValueEnum;
use fracwave::blowup::{
    calibrate_c0, comparison_check, first_integral, jensen_check, ode_blowup_integrate,
    sample_instances, PowerOde, C0_SAMPLING_MARGIN,
};
use fracwave::calculus::{gn_critical_exponent, gn_ratio, gn_theta, FracOrder};
use fracwave::data::{random_in_range, random_real, random_spectral, rng};
use fracwave::duhamel::{integrate, picard_solve, NonlinearProblem, StepperConfig};
use fracwave::group::{
    gauss_legendre, plancherel_norm, plancherel_norm_sq, GroupId, GroupSpec, Harmonics,
};
use fracwave::klein_gordon::{kg_solve, MassTerm};
use fracwave::linear::{
    evolve_homogeneous, evolve_state, propagator_a0, propagator_a1, verify_decay_estimates,
};
use rand::Rng;
use serde::Serialize;

use crate::commands::write_json;
use crate::{CliError, Context};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    Transforms,
    Linear,
    Convergence,
    Energy,
    Gn,
    Kato,
    Jensen,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub limit: f64,
    pub pass: bool,
}

#[derive(Default)]
struct Checks(Vec<Check>);

impl Checks {
    /// `value ≤ limit`.
    fn at_most(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.0.push(Check {
            name: name.into(),
            value,
            limit,
            pass: value <= limit,
        });
    }

    /// `value ≥ limit`.
    fn at_least(&mut self, name: impl Into<String>, value: f64, limit: f64) {
        self.0.push(Check {
            name: name.into(),
            value,
            limit,
            pass: value >= limit,
        });
    }

    fn within(&mut self, name: impl Into<String>, value: f64, lo: f64, hi: f64) {
        let name = name.into();
        self.at_least(format!("{name} >= lo"), value, lo);
        self.at_most(format!("{name} <= hi"), value, hi);
    }
}

type Res<T> = Result<T, CliError>;

pub fn run(ctx: &Context, suite: Suite) -> Res<()> {
    let seed = ctx.cfg.seed.unwrap_or(0);
    let v = &ctx.cfg.verify;
    let mut c = Checks::default();
    match suite {
        Suite::Transforms => transforms(&mut c, seed, v.fields)?,
        Suite::Linear => linear(&mut c, seed)?,
        Suite::Convergence => convergence(&mut c, seed)?,
        Suite::Energy => energy(&mut c, seed, v.energy_h, v.energy_tol)?,
        Suite::Gn => gn(&mut c, seed, v.fields.max(1))?,
        Suite::Kato => kato(&mut c, seed, v.kato_instances, v.kato_calibration)?,
        Suite::Jensen => jensen(&mut c, seed, v.jensen_fields)?,
    }
    let pass = c.0.iter().all(|k| k.pass);
    for k in &c.0 {
        println!(
            "{} {}: {:.6e} (limit {:.6e})",
            if k.pass { "PASS" } else { "FAIL" },
            k.name,
            k.value,
            k.limit
        );
    }
    let name = suite
        .to_possible_value()
        .expect("named")
        .get_name()
        .to_string();
    write_json(
        &ctx.out.join(format!("verify_{name}.json")),
        &serde_json::json!({ "suite": suite, "pass": pass, "checks": c.0 }),
    )?;
    if pass {
        Ok(())
    } else {
        Err(CliError::Check(format!("suite {name} failed")))
    }
}

fn harm(g: GroupId, lam: f64) -> Res<Harmonics> {
    Ok(Harmonics::new(GroupSpec::new(g, lam)?))
}

fn transforms(c: &mut Checks, seed: u64, fields: usize) -> Res<()> {
    let mut r = rng(seed);
    for (g, lam) in [(GroupId::Torus2, 16.0), (GroupId::Su2, 8.5)] {
        let h = harm(g, lam)?;
        let (mut trip, mut planch) = (0.0f64, 0.0f64);
        for _ in 0..fields {
            let f = random_spectral(&h, &mut r, 0.0);
            let grid = h.inverse(&f)?;
            let back = h.forward(&grid)?;
            trip = trip.max(back.max_abs_diff(&f));
            let n2 = plancherel_norm_sq(&f);
            planch = planch.max((h.grid_l2_norm(&grid)?.powi(2) - n2).abs() / n2);
        }
        c.at_most(format!("{g} round trip"), trip, 1e-9);
        c.at_most(format!("{g} Plancherel mismatch"), planch, 1e-10);
    }
    Ok(())
}

fn linear(c: &mut Checks, seed: u64) -> Res<()> {
    let mut r = rng(seed);
    let h = harm(GroupId::Su2, 3.0)?;
    for a in [0.3, 0.5, 0.9] {
        let alpha = FracOrder::new(a)?;
        let (mut closed, mut comp, mut ratio) = (0.0f64, 0.0f64, 0.0f64);
        for _ in 0..20 {
            let u0 = random_spectral(&h, &mut r, 1.0);
            let u1 = random_spectral(&h, &mut r, 1.0);
            for t in [0.5, 3.0, 10.0] {
                let s = evolve_homogeneous(&u0, &u1, t, alpha)?;
                for (i, m) in h.modes().modes().iter().enumerate() {
                    let lam = m.lambda();
                    let (a0, a1) = (propagator_a0(t, lam, alpha), propagator_a1(t, lam, alpha));
                    for j in 0..m.dim * m.dim {
                        let want = u0.block(i)[j] * a0 + u1.block(i)[j] * a1;
                        closed = closed.max((s.u.block(i)[j] - want).norm());
                    }
                }
                let half = evolve_homogeneous(&u0, &u1, t / 2.0, alpha)?;
                let twice = evolve_state(&half, t / 2.0, alpha);
                comp = comp
                    .max(twice.u.max_abs_diff(&s.u))
                    .max(twice.ut.max_abs_diff(&s.ut));
            }
            let times: Vec<f64> = (0..=100).map(|k| k as f64 * 0.1).collect();
            let rep = verify_decay_estimates(&u0, &u1, &times, alpha)?;
            ratio = ratio.max(rep.max_r0).max(rep.max_r1).max(rep.max_r2);
        }
        c.at_most(format!("alpha={a} closed form"), closed, 1e-12);
        c.at_most(format!("alpha={a} flow composition"), comp, 1e-12);
        c.at_most(format!("alpha={a} decay ratios"), ratio, 2.0);
    }
    Ok(())
}

fn convergence(c: &mut Checks, seed: u64) -> Res<()> {
    let mut r = rng(seed);
    let h = Arc::new(harm(GroupId::Torus2, 4.0)?);
    let u0 = random_in_range(&h, &mut r, 1.0, 0.5, 1.5)?;
    let u1 = random_in_range(&h, &mut r, 1.0, 0.0, 1.0)?;
    let pr = NonlinearProblem::new(h, FracOrder::new(0.5)?, 2.0, 1.0, u0, u1)?;
    let t_end = 0.5;
    let reference = picard_solve(
        &pr,
        t_end,
        &StepperConfig {
            h: t_end / 512.0,
            picard_maxiter: 100,
            ..Default::default()
        },
    )?;
    let uref = &reference.states.last().expect("nonempty").u;
    let mut errs = Vec::new();
    for k in [16, 32, 64] {
        let tr = integrate(
            &pr,
            &StepperConfig {
                h: t_end / k as f64,
                ..Default::default()
            },
            t_end,
            usize::MAX,
        )?;
        errs.push(plancherel_norm(&tr.last.u.sub(uref)?));
    }
    for w in errs.windows(2) {
        c.within("error ratio under halving", w[0] / w[1], 3.2, 4.8);
    }
    let small = pr.with_epsilon(1e-4)?;
    let cfg = StepperConfig::default();
    let pc = picard_solve(&small, t_end, &cfg)?;
    let tr = integrate(&small, &cfg, t_end, 1)?;
    let d = pc
        .states
        .iter()
        .zip(&tr.states)
        .map(|(a, b)| a.u.max_abs_diff(&b.u))
        .fold(0.0, f64::max);
    c.at_most("Picard/stepper agreement at eps=1e-4", d, 1e-6);
    Ok(())
}

fn energy(c: &mut Checks, seed: u64, h_step: f64, tol: f64) -> Res<()> {
    let mut r = rng(seed);
    let h = harm(GroupId::Torus2, 6.0)?;
    let alpha = FracOrder::new(0.5)?;
    let mut worst = (0.0f64, f64::NAN, 0.0f64);
    for _ in 0..3 {
        let m = MassTerm::from_grid(&random_in_range(&h, &mut r, 1.0, 0.0, 5.0)?)?;
        let u0 = random_real(&h, &mut r, 1.0)?;
        let u1 = random_real(&h, &mut r, 1.0)?;
        let cfg = StepperConfig {
            h: h_step,
            ..Default::default()
        };
        let a = kg_solve(&u0, &u1, &m, 1.0, &cfg, alpha, &h)?;
        let b = kg_solve(
            &u0,
            &u1,
            &m,
            1.0,
            &StepperConfig {
                h: h_step / 2.0,
                ..cfg
            },
            alpha,
            &h,
        )?;
        let order = (a.max_drift / b.max_drift).log2();
        if a.max_drift >= worst.0 {
            worst = (a.max_drift, order, a.max_ratio.max(worst.2));
        }
        worst.2 = worst.2.max(a.max_ratio);
    }
    c.at_most(
        format!(
            "relative energy drift at h={h_step} (measured order {:.2})",
            worst.1
        ),
        worst.0,
        tol,
    );
    c.at_most("estimate ratio", worst.2, 4.0);
    Ok(())
}

fn gn(c: &mut Checks, seed: u64, fields: usize) -> Res<()> {
    let alpha = FracOrder::new(0.9)?;
    let qc = gn_critical_exponent(3, alpha);
    c.at_most("theta at q=2", gn_theta(3, 2.0, alpha)?.abs(), 0.0);
    c.at_most(
        "|theta - 1| at critical q",
        (gn_theta(3, qc, alpha)? - 1.0).abs(),
        0.0,
    );
    let h = harm(GroupId::Su2, 3.0)?;
    let mut r = rng(seed);
    let (mut sup, mut inf) = (0.0f64, f64::INFINITY);
    for _ in 0..fields {
        let f = random_real(&h, &mut r, 1.0)?;
        for q in [2.5, qc] {
            let v = gn_ratio(&f, q, alpha, &h)?;
            if v.is_finite() {
                sup = sup.max(v);
                inf = inf.min(v);
            } else {
                inf = f64::NAN;
            }
        }
    }
    c.at_least("smallest ratio (finite, positive)", inf, f64::MIN_POSITIVE);
    c.at_most("empirical supremum of the ratio", sup, f64::MAX);
    Ok(())
}

/// `∫_{F0}^∞ dF / sqrt(2(F^{p+1} − F0^{p+1})/(p+1) + F1²)` by Gauss-Legendre
/// after `F = F0 + v²` on `[F0, 2F0]` and `F = 2F0/s²` beyond.
fn quadrature_blowup_time(p: f64, f0: f64, f1: f64) -> f64 {
    let den = |f: f64| (2.0 * (f.powf(p + 1.0) - f0.powf(p + 1.0)) / (p + 1.0) + f1 * f1).sqrt();
    let (x, w) = gauss_legendre(80);
    let map = |a: f64, b: f64, g: &dyn Fn(f64) -> f64| -> f64 {
        x.iter()
            .zip(&w)
            .map(|(xi, wi)| wi * g(0.5 * (b - a) * xi + 0.5 * (b + a)))
            .sum::<f64>()
            * 0.5
            * (b - a)
    };
    let inner = map(0.0, f0.sqrt(), &|v: f64| 2.0 * v / den(f0 + v * v));
    let outer = map(0.0, 1.0, &|s: f64| {
        if s == 0.0 {
            0.0
        } else {
            4.0 * f0 / s.powi(3) / den(2.0 * f0 / (s * s))
        }
    });
    inner + outer
}

fn kato(c: &mut Checks, seed: u64, per_cell: usize, calibration: usize) -> Res<()> {
    let mut r = rng(seed);
    let mut validated = 0usize;
    let mut violations = 0usize;
    for (p, a, q) in [
        (2.0, 1.0, 0.0),
        (3.0, 1.0, 0.0),
        (2.0, 2.0, 1.0),
        (3.0, 0.5, 0.5),
    ] {
        let cell = (p, a, q, 1.0);
        let pool = sample_instances(&mut r, cell, calibration, 1e8, 1e4)?;
        let c0 = calibrate_c0(&pool) * C0_SAMPLING_MARGIN;
        for i in sample_instances(&mut r, cell, per_cell, 1e8, 1e4)? {
            if i.c0_ratio >= c0 {
                validated += 1;
                violations += !i.within_bound() as usize;
            }
        }
    }
    c.at_least("validated instances", validated as f64, 20.0);
    c.at_most("instances at or above the bound", violations as f64, 0.0);

    let run = ode_blowup_integrate(PowerOde::autonomous(2.0), 1.0, 0.0, 1e8, 100.0)?;
    let drift = run
        .series
        .iter()
        .map(|pt| {
            (first_integral(pt, 2.0) - first_integral(&run.series[0], 2.0)).abs()
                / (pt.f.powi(3) / 3.0).max(1.0)
        })
        .fold(0.0, f64::max);
    c.at_most("first integral drift", drift, 1e-8);
    let t_quad = quadrature_blowup_time(2.0, 1.0, 0.0);
    let t_ode = run.blowup_time.unwrap_or(f64::INFINITY);
    c.at_most(
        "blow-up time vs quadrature (relative)",
        (t_ode - t_quad).abs() / t_quad,
        0.01,
    );
    Ok(())
}

fn jensen(c: &mut Checks, seed: u64, fields: usize) -> Res<()> {
    let mut r = rng(seed);
    let h = harm(GroupId::Su2, 2.0)?;
    let mut worst = f64::INFINITY;
    for _ in 0..fields {
        let f = random_real(&h, &mut r, 1.0)?.scaled(r.gen_range(0.1..3.0));
        let p = r.gen_range(1.05..4.0);
        let j = jensen_check(&f, p, h.grid())?;
        worst = worst.min(j.lhs - j.rhs);
    }
    c.at_least("min of lhs - rhs", worst, -1e-10);

    let h = Arc::new(harm(GroupId::Torus2, 3.0)?);
    let mut dominated = 0usize;
    let mut worst_identity = 0.0f64;
    for _ in 0..10 {
        let u0 = random_in_range(&h, &mut r, 1.0, 0.2, 1.0)?;
        let u1 = random_in_range(&h, &mut r, 1.0, 0.0, 0.5)?;
        let pr = NonlinearProblem::new(h.clone(), FracOrder::new(0.5)?, 2.0, 1.0, u0, u1)?;
        let step = 0.01;
        let tr = integrate(
            &pr,
            &StepperConfig {
                h: step,
                ..Default::default()
            },
            1.0,
            1,
        )?;
        let rep = comparison_check(&tr.states, 2.0, step, &h)?;
        dominated += rep.dominated as usize;
        worst_identity = worst_identity.max(rep.identity_residual);
    }
    c.at_least("runs with U0 >= W", dominated as f64, 10.0);
    c.at_most(
        "integrated identity residual at h=0.01",
        worst_identity,
        10.0 * 0.01 * 0.01,
    );
    Ok(())
}

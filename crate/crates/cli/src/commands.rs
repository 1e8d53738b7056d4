use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use fracwave::blowup::{build_instance, fit_sweep, run_sweep, write_sweep_csv, KatoParams};
use fracwave::calculus::FracOrder;
use fracwave::data::{self, DataPreset};
use fracwave::duhamel::{integrate, NonlinearProblem};
use fracwave::group::{GridField, GroupSpec, Harmonics};
use fracwave::klein_gordon::{kg_solve as run_kg, MassTerm};
use serde::Serialize;
use serde_json::json;

use crate::{CliError, Context};

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<(), CliError> {
    let mut f = BufWriter::new(File::create(path)?);
    serde_json::to_writer_pretty(&mut f, value).map_err(|e| CliError::Check(e.to_string()))?;
    writeln!(f)?;
    Ok(())
}

fn csv_file(path: &Path) -> Result<BufWriter<File>, CliError> {
    Ok(BufWriter::new(File::create(path)?))
}

fn harmonics(ctx: &Context) -> Result<Arc<Harmonics>, CliError> {
    Ok(Arc::new(Harmonics::new(GroupSpec::new(
        ctx.cfg.group,
        ctx.cfg.truncation,
    )?)))
}

/// Builds the presets in order from one seeded stream.
fn fields(
    ctx: &Context,
    h: &Harmonics,
    presets: &[&DataPreset],
) -> Result<Vec<GridField>, CliError> {
    let mut rng = data::rng(ctx.cfg.data_seed(presets)?);
    presets.iter().map(|p| Ok(p.build(h, &mut rng)?)).collect()
}

fn problem(ctx: &Context) -> Result<NonlinearProblem, CliError> {
    let cfg = &ctx.cfg;
    let h = harmonics(ctx)?;
    let mut f = fields(ctx, &h, &[&cfg.u0, &cfg.u1])?;
    let u1 = f.pop().expect("two fields");
    let u0 = f.pop().expect("two fields");
    let pr = NonlinearProblem::new(h, FracOrder::new(cfg.alpha)?, cfg.p, cfg.epsilon, u0, u1)?;
    if let Some(w) = pr.local_existence_warning() {
        eprintln!("warning: {w}");
    }
    Ok(pr)
}

pub fn solve(ctx: &Context) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let pr = problem(ctx)?;
    let traj = integrate(&pr, &cfg.stepper, cfg.t_end, cfg.sample_every)?;
    let mut out = csv_file(&ctx.out.join("trajectory.csv"))?;
    traj.write_csv(&mut out)?;
    out.flush()?;
    let last = traj.records.last().expect("initial record");
    write_json(
        &ctx.out.join("summary.json"),
        &json!({
            "group": cfg.group.to_string(),
            "truncation": cfg.truncation,
            "alpha": cfg.alpha,
            "p": cfg.p,
            "epsilon": cfg.epsilon,
            "blew_up": traj.blew_up,
            "final": last,
        }),
    )?;
    println!(
        "solve: t = {} ‖u‖_∞ = {:.6e}{}",
        last.t,
        last.linf,
        if traj.blew_up {
            " (threshold reached)"
        } else {
            ""
        }
    );
    Ok(())
}

pub fn lifespan_sweep(ctx: &Context) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let eps = cfg.sweep.values()?;
    if eps.len() < 4 {
        return Err(CliError::Usage(format!(
            "sweep has {} points, need at least 4",
            eps.len()
        )));
    }
    if cfg.sweep.eps_max / cfg.sweep.eps_min < 100.0 * (1.0 - 1e-12) {
        return Err(CliError::Usage(
            "sweep must span at least two decades of epsilon".into(),
        ));
    }
    let pr = problem(ctx)?;
    if let Err(e) = pr.check_blowup_hypotheses() {
        eprintln!("warning: {e}");
    }
    let pts = run_sweep(&pr, &cfg.stepper, &eps, ctx.serial)?;
    let mut out = csv_file(&ctx.out.join("sweep.csv"))?;
    write_sweep_csv(&pts, &mut out)?;
    out.flush()?;
    let u1_zero = pr.norm_weights().u1_is_zero;
    let fit = fit_sweep(&pts, cfg.p, u1_zero)
        .map_err(|e| CliError::Check(format!("fit refused: {e}")))?;
    write_json(&ctx.out.join("fit.json"), &fit)?;
    println!(
        "lifespan-sweep: slope {:.6} (theory {:.6}, deviation {:.3}%)",
        fit.slope,
        fit.theoretical_slope,
        100.0 * fit.relative_deviation()
    );
    Ok(())
}

pub fn kg_solve(ctx: &Context) -> Result<(), CliError> {
    let cfg = &ctx.cfg;
    let h = harmonics(ctx)?;
    let f = fields(ctx, &h, &[&cfg.u0, &cfg.u1, &cfg.mass])?;
    let mass = MassTerm::from_grid(&f[2])?;
    let run = run_kg(
        &f[0],
        &f[1],
        &mass,
        cfg.t_end,
        &cfg.stepper,
        FracOrder::new(cfg.alpha)?,
        &h,
    )?;
    let mut out = csv_file(&ctx.out.join("energy.csv"))?;
    run.write_csv(&mut out)?;
    out.flush()?;
    write_json(
        &ctx.out.join("summary.json"),
        &json!({
            "max_drift": run.max_drift,
            "max_ratio": run.max_ratio,
            "flagged": run.flagged,
            "m_inf": mass.m_inf(),
            "final": run.samples.last().map(|s| s.energy),
        }),
    )?;
    println!(
        "kg-solve: max relative drift {:.3e}, max estimate ratio {:.4}",
        run.max_drift, run.max_ratio
    );
    Ok(())
}

pub fn kato_check(ctx: &Context) -> Result<(), CliError> {
    let k = &ctx.cfg.kato;
    let params = KatoParams {
        p: k.p,
        a: k.a,
        q: k.q,
        big_a: 1.0,
        big_b: k.big_b,
        r: k.r,
        t0: k.t0,
        f0: k.f0,
        f1: k.f1,
    };
    let path = ctx.out.join("kato.json");
    let Some(inst) = build_instance(params, k.threshold, k.horizon)? else {
        write_json(&path, &json!({ "blew_up": false, "m": params.m() }))?;
        return Err(CliError::Check(
            "no blow-up (or no sample past T0) before the horizon".into(),
        ));
    };
    let size_ok = inst.c0_ratio >= k.c0;
    let within = inst.within_bound();
    write_json(
        &path,
        &json!({
            "blew_up": true,
            "branch": inst.branch,
            "m": inst.bound.m,
            "t_ref": inst.bound.t_ref,
            "bound": inst.bound.bound,
            "blowup_time": inst.blowup_time,
            "A": inst.params.big_a,
            "c0_ratio": inst.c0_ratio,
            "c0_condition": size_ok,
            "within_bound": within,
        }),
    )?;
    println!(
        "kato-check: T = {:.6} bound = {:.6} ({})",
        inst.blowup_time,
        inst.bound.bound,
        if within { "within" } else { "exceeded" }
    );
    if size_ok && !within {
        return Err(CliError::Check(
            "blow-up time exceeds the bound although the size condition holds".into(),
        ));
    }
    Ok(())
}

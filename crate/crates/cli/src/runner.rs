//! The four experiment modes. Each writes CSV outputs plus a manifest and
//! returns a short human-readable summary line.

use std::path::Path;

use serde_json::json;

use fadr_core::caputo::AdaptiveConfig;
use fadr_core::channel::{
    channel_grid, ChannelBcs, ChannelParams, ChannelSchedule, ChannelSim, ChannelSnapshot,
};
use fadr_core::dispersion::{contour_scan, csv_header, RangeSpec, SpectralParams};
use fadr_core::grid::{BcKind, Grid2D};
use fadr_core::linsolve::GSConfig;
use fadr_core::theta_fadr::{
    run, run_validation_case, Coefficient, FADRProblem, Reaction, RunOptions, SafeBox, StopRule,
    ThetaScheme, ValidationBc,
};

use crate::config::{Mode, RunConfig};
use crate::output::{fmt, OutputDir};
use crate::{fit_convergence_slope, CliError};

/// Execute the configured experiment into `out`.
pub fn execute(cfg: &RunConfig, config_echo: &str, out: &Path) -> Result<String, CliError> {
    match cfg.mode {
        Mode::Brunner => run_brunner(cfg, config_echo, out),
        Mode::Dispersion => run_dispersion(cfg, config_echo, out),
        Mode::Channel => run_channel_mode(cfg, config_echo, out),
        Mode::Fadr1d => run_fadr1d(cfg, config_echo, out),
    }
}

fn run_brunner(cfg: &RunConfig, echo: &str, out: &Path) -> Result<String, CliError> {
    let b = cfg.brunner.as_ref().expect("validated");
    let kind = match b.kind.as_str() {
        "dirichlet" => ValidationBc::Dirichlet,
        _ => ValidationBc::Neumann,
    };
    let mut dir = OutputDir::create(out)?;
    let mut rows = Vec::new();
    let mut ladder = Vec::new();
    for &k in &b.ladder_exponents {
        let dt = b.t_end / f64::from(1u32 << k);
        let result = run_validation_case(kind, b.alpha, b.theta, dt, b.n_points, b.t_end)?;
        ladder.push((dt, result.rel_l2_error));
        rows.push(format!(
            "{},{},{},{},{},{}",
            b.kind,
            fmt(b.alpha),
            fmt(b.theta),
            fmt(dt),
            (b.t_end / dt).round() as usize,
            fmt(result.rel_l2_error)
        ));
    }
    dir.write_csv("errors.csv", "kind,alpha,theta,dt,steps,rel_l2_error", &rows)?;
    let fit = fit_convergence_slope(&ladder)?;
    let summary = json!({
        "fitted_slope": fit.slope,
        "excluded_points": fit.excluded,
        "ladder": ladder.iter().map(|&(dt, e)| json!({"dt": dt, "rel_l2_error": e})).collect::<Vec<_>>(),
    });
    dir.finish(echo, summary)?;
    Ok(format!(
        "{} case, alpha={}, theta={}: fitted slope {:.4} over {} ladder points",
        b.kind,
        b.alpha,
        b.theta,
        fit.slope,
        ladder.len()
    ))
}

fn run_dispersion(cfg: &RunConfig, echo: &str, out: &Path) -> Result<String, CliError> {
    let d = cfg.dispersion.as_ref().expect("validated");
    let mut dir = OutputDir::create(out)?;
    let mut cells = Vec::new();
    let mut cell_index = 0usize;
    for &pe in &d.pe_values {
        for &da in &d.da_values {
            let mut params = SpectralParams::new(d.alpha, d.theta, pe, da)?;
            params.q = d.q;
            params.n_poly = d.n_poly;
            params.kh_range = RangeSpec::new(d.kh.start, d.kh.end, d.kh.count);
            params.nc_range = RangeSpec::new(d.nc.start, d.nc.end, d.nc.count);
            let table = contour_scan(&params)?;
            let rows: Vec<String> = table.points.iter().map(|p| p.csv_row(&params)).collect();
            let name = format!("contour_{cell_index:02}.csv");
            dir.write_csv(&name, csv_header(), &rows)?;
            let favorable = table.points.iter().filter(|p| p.favorable).count();
            cells.push(json!({
                "file": name,
                "Pe": pe,
                "Da": da,
                "points": table.points.len(),
                "favorable_points": favorable,
                "failed_points": table.failures.len(),
            }));
            cell_index += 1;
        }
    }
    let n_cells = cells.len();
    dir.finish(echo, json!({ "cells": cells }))?;
    Ok(format!(
        "dispersion scan: alpha={}, theta={}, {} (Pe, Da) cells",
        d.alpha, d.theta, n_cells
    ))
}

fn snapshot_rows(grid: &Grid2D, snap: &ChannelSnapshot) -> Vec<String> {
    let mut rows = Vec::with_capacity(grid.nx() * grid.ny());
    for i in 0..grid.nx() {
        for j in 0..grid.ny() {
            let s = &snap.state;
            rows.push(format!(
                "{},{},{},{},{},{},{},{},{}",
                fmt(grid.x(i)),
                fmt(grid.y(j)),
                fmt(s.omega[[i, j]]),
                fmt(s.psi[[i, j]]),
                fmt(s.u[[i, j]]),
                fmt(s.v[[i, j]]),
                fmt(s.a11[[i, j]]),
                fmt(s.a12[[i, j]]),
                fmt(s.a22[[i, j]])
            ));
        }
    }
    rows
}

const SNAPSHOT_HEADER: &str = "x,y,omega,psi,u,v,A11,A12,A22";

fn run_channel_mode(cfg: &RunConfig, echo: &str, out: &Path) -> Result<String, CliError> {
    let c = cfg.channel.as_ref().expect("validated");
    let mut dir = OutputDir::create(out)?;
    let grid = channel_grid(c.nx, c.ny)?;
    let params = ChannelParams::new(c.re, c.we, c.nu, c.mu, c.alpha)?;
    let adaptive = if c.adaptive {
        Some(AdaptiveConfig::new(c.delta, c.dt_min, c.dt_max)?)
    } else {
        None
    };
    let schedule = ChannelSchedule {
        dt0: c.dt_min,
        n_steps: c.n_steps,
        adaptive,
        snapshot_every: c.snapshot_every,
    };
    let gs = GSConfig::for_grid(c.nx, c.ny);
    let mut sim = ChannelSim::new(grid.clone(), params, c.theta, ChannelBcs::default(), schedule, gs)?;

    let mut failure: Option<fadr_core::Error> = None;
    for _ in 0..c.n_steps {
        if let Err(e) = sim.advance() {
            failure = Some(e);
            break;
        }
    }

    let diag_rows: Vec<String> = sim
        .diagnostics
        .iter()
        .map(|d| {
            format!(
                "{},{},{},{},{},{},{},{}",
                d.step,
                fmt(d.t),
                fmt(d.dt),
                fmt(d.intensity),
                d.omega_iters,
                d.psi_iters,
                d.defective_points,
                d.a22_negative_points
            )
        })
        .collect();
    dir.write_csv(
        "diagnostics.csv",
        "step,t,dt,intensity,omega_iters,psi_iters,defective_points,a22_negative_points",
        &diag_rows,
    )?;
    for snap in &sim.snapshots {
        let name = format!("snapshot_{:06}.csv", snap.step);
        dir.write_csv(&name, SNAPSHOT_HEADER, &snapshot_rows(&grid, snap))?;
    }
    // final state (also the post-mortem dump when a step failed)
    let final_snap = ChannelSnapshot {
        step: sim.diagnostics.len(),
        t: sim.time(),
        state: sim.state().clone(),
    };
    let final_name = if failure.is_some() {
        "state_at_failure.csv"
    } else {
        "final_state.csv"
    };
    dir.write_csv(final_name, SNAPSHOT_HEADER, &snapshot_rows(&grid, &final_snap))?;

    let intensity = sim
        .diagnostics
        .last()
        .map(|d| d.intensity)
        .unwrap_or(0.0);
    let steps_done = sim.diagnostics.len();
    let t_end = sim.time();
    let summary = json!({
        "completed_steps": steps_done,
        "t_end": t_end,
        "final_intensity": intensity,
        "failed": failure.as_ref().map(|e| e.to_string()),
    });
    dir.finish(echo, summary)?;
    if let Some(e) = failure {
        return Err(e.into());
    }
    Ok(format!(
        "channel run: alpha={}, Re={}, nu={}, {} steps to t={:.4}, final intensity {:.3e}",
        c.alpha, c.re, c.nu, steps_done, t_end, intensity
    ))
}

fn run_fadr1d(cfg: &RunConfig, echo: &str, out: &Path) -> Result<String, CliError> {
    let f = cfg.fadr1d.as_ref().expect("validated");
    let mut dir = OutputDir::create(out)?;
    let grid = Grid2D::line(f.nx, [0.0, f.x_end], BcKind::Periodic)?;
    let initial = grid.fill(|x, _| (2.0 * std::f64::consts::PI * x / f.x_end).sin());
    let problem = FADRProblem {
        grid: grid.clone(),
        advection_x: Coefficient::Constant(f.c),
        advection_y: Coefficient::Constant(0.0),
        diffusion: Coefficient::Constant(f.gamma),
        reaction: Reaction::Linear(f.lambda),
        alpha: f.alpha,
        bc: fadr_core::grid::BcSpec::periodic_x_only(),
        initial,
    };
    let scheme = ThetaScheme::new(f.theta)?;
    let opts = RunOptions {
        dt0: f.dt,
        stop: StopRule::Steps(f.n_steps),
        adaptive: if f.adaptive {
            Some(AdaptiveConfig::new(1e-3, f.dt, f.dt * 16.0)?)
        } else {
            None
        },
        gs: GSConfig::for_grid(f.nx, 1),
        safe_box: SafeBox::default(),
    };
    let outcome = run(&problem, &scheme, &opts)?;

    let diag_rows: Vec<String> = outcome
        .diagnostics
        .iter()
        .map(|d| {
            format!(
                "{},{},{},{},{},{},{}",
                d.step,
                fmt(d.time),
                fmt(d.dt),
                fmt(d.l2_norm),
                fmt(d.nc),
                fmt(d.pe),
                if d.within_safe_box { 1 } else { 0 }
            )
        })
        .collect();
    dir.write_csv(
        "diagnostics.csv",
        "step,time,dt,l2_norm,Nc,Pe,within_safe_box",
        &diag_rows,
    )?;
    let state_rows: Vec<String> = (0..grid.nx())
        .map(|i| format!("{},{}", fmt(grid.x(i)), fmt(outcome.u[[i, 0]])))
        .collect();
    dir.write_csv("final_state.csv", "x,u", &state_rows)?;

    let warnings = outcome.diagnostics.iter().filter(|d| !d.within_safe_box).count();
    let summary = json!({
        "steps": outcome.diagnostics.len(),
        "t_end": outcome.diagnostics.last().map(|d| d.time).unwrap_or(0.0),
        "final_l2": outcome.diagnostics.last().map(|d| d.l2_norm).unwrap_or(0.0),
        "steps_outside_safe_box": warnings,
    });
    dir.finish(echo, summary)?;
    Ok(format!(
        "1d run: alpha={}, c={}, gamma={}, lambda={}, {} steps ({} outside the safe box)",
        f.alpha,
        f.c,
        f.gamma,
        f.lambda,
        f.n_steps,
        warnings
    ))
}

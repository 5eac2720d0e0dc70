//! The six batch commands. Each writes its CSV outputs plus a `report.txt`
//! into the configured output directory.

use std::fmt;

use eqarea_core::{
    area_under_graph, godunov_solve, l1_distance, link_slices, sample_gamma0,
    shear_polyline, shock_displacement_estimate, solve_at_time, validate, Error as CoreError,
    SolutionCurve,
};

use crate::config::RunConfig;
use crate::parallel::solve_slices;
use crate::report::{fmt_f64, OutDir};

/// Failures split by exit code: configuration problems exit 1, numerical
/// failures exit 2.
#[derive(Debug)]
pub enum CliError {
    Config(String),
    Numerical(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical error: {m}"),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 1,
            CliError::Numerical(_) => 2,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Config(_) | CoreError::EmptySupport | CoreError::ConvexityMismatch { .. } => {
                CliError::Config(e.to_string())
            }
            other => CliError::Numerical(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Config(format!("io: {e}"))
    }
}

type CmdResult = Result<(), CliError>;

fn out_dir(cfg: &RunConfig) -> Result<OutDir, CliError> {
    Ok(OutDir::new(&cfg.out_dir)?)
}

fn report_header(report: &mut crate::report::Report, cfg: &RunConfig, command: &str) {
    report.push("command", command);
    for (k, v) in &cfg.summary {
        report.push(&format!("config.{k}"), v.clone());
    }
}

fn write_solution_files(out: &OutDir, sol: &SolutionCurve) -> Result<(), CliError> {
    let mut curve = out.csv("solution.csv", "x,u")?;
    for p in sol.curve.points() {
        curve.row(&[fmt_f64(p.x), fmt_f64(p.y)])?;
    }
    curve.finish()?;

    let mut shocks = out.csv("shocks.csv", "x,u_minus,u_plus,rh_speed,secant_iters")?;
    for s in &sol.shocks {
        shocks.row(&[
            fmt_f64(s.x),
            fmt_f64(s.u_minus),
            fmt_f64(s.u_plus),
            fmt_f64(s.rh_speed),
            s.secant_iters.to_string(),
        ])?;
    }
    shocks.finish()?;
    Ok(())
}

fn push_solution_diagnostics(report: &mut crate::report::Report, sol: &SolutionCurve) {
    report.push_f64("t", sol.t);
    report.push_f64("initial_area", sol.initial_area);
    report.push_f64("final_area", area_under_graph(&sol.curve));
    report.push_f64("area_drift", sol.area_drift);
    report.push_f64("epsilon_estimate", sol.epsilon_estimate);
    report.push("cuts_performed", sol.cuts_performed.to_string());
    report.push(
        "secant_iterations",
        sol.secant_iterations
            .iter()
            .map(|i| i.to_string())
            .collect::<Vec<_>>()
            .join(";"),
    );
    report.push("shock_count", sol.shocks.len().to_string());
    for (i, s) in sol.shocks.iter().enumerate() {
        report.push_f64(&format!("shock.{i}.x"), s.x);
        report.push_f64(&format!("shock.{i}.u_minus"), s.u_minus);
        report.push_f64(&format!("shock.{i}.u_plus"), s.u_plus);
        report.push_f64(&format!("shock.{i}.rh_speed"), s.rh_speed);
        report.push_f64(&format!("shock.{i}.balanced_area"), s.balanced_area);
        report.push_f64(&format!("shock.{i}.s_curve_length"), s.s_curve_length);
        let height = (s.u_minus - s.u_plus).abs();
        if let Ok(dx) = shock_displacement_estimate(sol.epsilon_estimate, s.s_curve_length, height)
        {
            report.push_f64(&format!("shock.{i}.displacement_estimate"), dx);
        }
    }
}

pub fn cmd_solve(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let sol = solve_at_time(&cfg.flux, &cfg.profile, cfg.t, &cfg.params)?;
    write_solution_files(&out, &sol)?;
    let mut report = out.report();
    report_header(&mut report, cfg, "solve");
    push_solution_diagnostics(&mut report, &sol);
    report.write()?;
    Ok(())
}

pub fn cmd_slice(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let gamma0 = sample_gamma0(&cfg.profile, cfg.params.n_points, cfg.params.jump_subpoints)?;
    let sheared = shear_polyline(&cfg.flux, &gamma0, cfg.t)?;
    let mut csv = out.csv("slice.csv", "xi,x,y")?;
    for (p, &xi) in sheared.curve.points().iter().zip(&sheared.source_params) {
        csv.row(&[fmt_f64(xi), fmt_f64(p.x), fmt_f64(p.y)])?;
    }
    csv.finish()?;
    let mut report = out.report();
    report_header(&mut report, cfg, "slice");
    report.push_f64("t", cfg.t);
    report.push("vertices", sheared.curve.len().to_string());
    report.push(
        "x_extrema",
        eqarea_core::count_x_extrema(&sheared).to_string(),
    );
    report.push_f64("area_under_graph", area_under_graph(&sheared.curve));
    report.write()?;
    Ok(())
}

pub fn cmd_godunov(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let grid = godunov_solve(
        &cfg.flux,
        &cfg.profile,
        cfg.t,
        cfg.godunov_cells,
        cfg.godunov_cfl,
    )?;
    let mut csv = out.csv("godunov.csv", "x_center,u_avg")?;
    for i in 0..grid.n_cells {
        csv.row(&[fmt_f64(grid.cell_center(i)), fmt_f64(grid.averages[i])])?;
    }
    csv.finish()?;
    let mut report = out.report();
    report_header(&mut report, cfg, "godunov");
    report.push_f64("t", cfg.t);
    report.push("cells", grid.n_cells.to_string());
    report.push_f64("cfl", cfg.godunov_cfl);
    report.push_f64("dx", grid.dx);
    report.push_f64("total_mass", grid.total_mass());
    report.push_f64("initial_area", cfg.profile.initial_area());
    report.write()?;
    Ok(())
}

pub fn cmd_validate(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let sol = solve_at_time(&cfg.flux, &cfg.profile, cfg.t, &cfg.params)?;
    let dt = cfg.validate_dt.unwrap_or(1e-3 * cfg.t.max(1e-6));
    let rep = validate(&cfg.flux, &cfg.profile, &sol, dt, &cfg.params)?;
    let conservation_tol = cfg
        .validate_conservation_tol
        .unwrap_or(1e-9 * (1.0 + sol.initial_area.abs()));

    let l1 = if cfg.validate_l1_cells > 0 {
        let grid = godunov_solve(
            &cfg.flux,
            &cfg.profile,
            cfg.t,
            cfg.validate_l1_cells,
            cfg.godunov_cfl,
        )?;
        Some(l1_distance(&sol, &grid, cfg.validate_l1_grid))
    } else {
        None
    };

    let mut report = out.report();
    report_header(&mut report, cfg, "validate");
    report.push_f64("t", cfg.t);
    report.push_f64("fd_dt", dt);
    report.push_f64("conservation_residual", rep.conservation_residual);
    report.push_f64("conservation_tol", conservation_tol);
    report.push("entropy_ok", if rep.entropy_ok { "true" } else { "false" });
    report.push_f64("rh_tol", cfg.validate_rh_tol);
    for (i, (x, r)) in rep.rh_residuals.iter().enumerate() {
        report.push_f64(&format!("rh_residual.{i}.x"), *x);
        report.push_f64(&format!("rh_residual.{i}.value"), *r);
    }
    if let Some(d) = l1 {
        report.push("l1_reference_cells", cfg.validate_l1_cells.to_string());
        report.push_f64("l1_vs_reference", d);
    }
    let conservation_ok = rep.conservation_residual <= conservation_tol;
    let rh_ok = rep
        .rh_residuals
        .iter()
        .all(|(_, r)| *r <= cfg.validate_rh_tol);
    let ok = conservation_ok && rh_ok && rep.entropy_ok;
    report.push("ok", if ok { "true" } else { "false" });
    report.write()?;

    if !ok {
        return Err(CliError::Numerical(format!(
            "validation failed: conservation_ok={conservation_ok} rh_ok={rh_ok} entropy_ok={}",
            rep.entropy_ok
        )));
    }
    Ok(())
}

pub fn cmd_sweep(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    if !(0.0 <= cfg.sweep_t_start && cfg.sweep_t_start < cfg.sweep_t_end) || cfg.sweep_n_times < 2
    {
        return Err(CliError::Config(format!(
            "sweep needs 0 <= t_start < t_end and n_times >= 2 (got [{}, {}], {})",
            cfg.sweep_t_start, cfg.sweep_t_end, cfg.sweep_n_times
        )));
    }
    let times: Vec<f64> = (0..cfg.sweep_n_times)
        .map(|i| {
            cfg.sweep_t_start
                + (cfg.sweep_t_end - cfg.sweep_t_start) * i as f64
                    / (cfg.sweep_n_times - 1) as f64
        })
        .collect();
    let slices = solve_slices(&cfg.flux, &cfg.profile, &times, &cfg.params, cfg.sweep_jobs)?;
    let (u_lo, u_hi) = cfg.profile.value_range();
    let set = link_slices(&times, &slices, cfg.flux.max_abs_speed(u_lo, u_hi));

    for (i, path) in set.paths.iter().enumerate() {
        let mut csv = out.csv(&format!("path_{i:03}.csv"), "x,t")?;
        for q in &path.points {
            csv.row(&[fmt_f64(q.x), fmt_f64(q.y)])?;
        }
        csv.finish()?;
    }
    let mut merges = out.csv("merges.csv", "t_before,t_after,surviving,absorbed")?;
    for ev in &set.merge_events {
        merges.row(&[
            fmt_f64(ev.t_before),
            fmt_f64(ev.t_after),
            ev.surviving.to_string(),
            ev.absorbed
                .iter()
                .map(|i| i.to_string())
                .collect::<Vec<_>>()
                .join(";"),
        ])?;
    }
    merges.finish()?;

    let mut report = out.report();
    report_header(&mut report, cfg, "sweep");
    report.push_f64("t_start", cfg.sweep_t_start);
    report.push_f64("t_end", cfg.sweep_t_end);
    report.push("n_times", cfg.sweep_n_times.to_string());
    report.push("jobs", cfg.sweep_jobs.to_string());
    report.push("paths", set.paths.len().to_string());
    report.push("merge_events", set.merge_events.len().to_string());
    report.write()?;
    Ok(())
}

pub fn cmd_convergence(cfg: &RunConfig) -> CmdResult {
    let out = out_dir(cfg)?;
    let max_n = *cfg.convergence_ns.iter().max().expect("non-empty ladder");
    let reference = solve_at_time(
        &cfg.flux,
        &cfg.profile,
        cfg.t,
        &eqarea_core::SolveParams {
            n_points: 8 * max_n,
            ..cfg.params
        },
    )?;
    let ref_xs: Vec<f64> = reference.shocks.iter().map(|s| s.x).collect();

    let mut rows: Vec<(usize, f64)> = Vec::new();
    for &n in &cfg.convergence_ns {
        let sol = solve_at_time(
            &cfg.flux,
            &cfg.profile,
            cfg.t,
            &eqarea_core::SolveParams {
                n_points: n,
                ..cfg.params
            },
        )?;
        if sol.shocks.len() != ref_xs.len() {
            return Err(CliError::Numerical(format!(
                "shock count changed across the ladder: {} at n = {n} vs {} in the reference",
                sol.shocks.len(),
                ref_xs.len()
            )));
        }
        let err = sol
            .shocks
            .iter()
            .zip(&ref_xs)
            .map(|(s, &rx)| (s.x - rx).abs())
            .fold(0.0f64, f64::max);
        rows.push((n, err));
    }

    let mut csv = out.csv("convergence.csv", "n_points,max_shock_error,ratio_to_previous")?;
    let mut report = out.report();
    report_header(&mut report, cfg, "convergence");
    report.push_f64("t", cfg.t);
    report.push("reference_n_points", (8 * max_n).to_string());
    report.push("shock_count", ref_xs.len().to_string());
    let mut prev: Option<f64> = None;
    for &(n, err) in &rows {
        let ratio = match prev {
            Some(p) if err > 0.0 => fmt_f64(p / err),
            _ => String::from("nan"),
        };
        csv.row(&[n.to_string(), fmt_f64(err), ratio.clone()])?;
        report.push_f64(&format!("error.n{n}"), err);
        report.push(&format!("ratio.n{n}"), ratio);
        prev = Some(err);
    }
    csv.finish()?;
    report.write()?;
    Ok(())
}

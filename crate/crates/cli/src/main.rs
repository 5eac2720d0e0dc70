use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use eqarea::commands;
use eqarea::config::{ConfigMap, RunConfig};
use eqarea::CliError;

/// Equal-area solver for 1D scalar conservation laws u_t + f(u)_x = 0.
///
/// Settings come from an optional key-value config file, overridden by
/// repeatable --set KEY=VALUE pairs, overridden by the command flags.
/// Exit codes: 0 ok, 1 configuration error, 2 numerical error.
#[derive(Parser)]
#[command(name = "eqarea", version)]
struct Cli {
    /// Key-value config file (dotted keys, e.g. flux.name = burgers).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Override any config key, e.g. --set profile.n_points=2000.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,

    /// Output directory (default: $EQAREA_OUT_DIR or the working directory).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve at a fixed time; writes solution.csv, shocks.csv, report.txt.
    Solve {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        n_points: Option<usize>,
        #[arg(long)]
        jump_subpoints: Option<usize>,
        #[arg(long)]
        root_tol: Option<f64>,
    },
    /// Emit the sheared (possibly multivalued) curve at a time; slice.csv.
    Slice {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        n_points: Option<usize>,
        #[arg(long)]
        jump_subpoints: Option<usize>,
    },
    /// First-order finite-volume reference run; godunov.csv.
    Godunov {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        cells: Option<usize>,
        #[arg(long)]
        cfl: Option<f64>,
    },
    /// Solve and check conservation, shock speeds, and jump directions.
    Validate {
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        dt: Option<f64>,
        #[arg(long)]
        n_points: Option<usize>,
    },
    /// Solve over a time ladder and project shocks to the (x,t)-plane.
    Sweep {
        #[arg(long)]
        t_start: Option<f64>,
        #[arg(long)]
        t_end: Option<f64>,
        #[arg(long)]
        n_times: Option<usize>,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Shock-position self-convergence table over a resolution ladder.
    Convergence {
        #[arg(long)]
        t: Option<f64>,
        /// Comma-separated point counts, e.g. 250,500,1000,2000.
        #[arg(long)]
        n_list: Option<String>,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, CliError> {
    let mut map = match &cli.config {
        Some(path) => ConfigMap::from_file(path).map_err(|e| CliError::Config(e.to_string()))?,
        None => ConfigMap::default(),
    };
    for kv in &cli.set {
        map.apply_set(kv).map_err(|e| CliError::Config(e.to_string()))?;
    }
    if let Some(dir) = &cli.out {
        map.set_from_flag("out_dir", dir.display().to_string());
    }

    let mut flag = |key: &str, value: Option<String>| {
        if let Some(v) = value {
            map.set_from_flag(key, v);
        }
    };
    match &cli.command {
        Command::Solve {
            t,
            n_points,
            jump_subpoints,
            root_tol,
        } => {
            flag("t", t.map(|v| v.to_string()));
            flag("profile.n_points", n_points.map(|v| v.to_string()));
            flag("profile.jump_subpoints", jump_subpoints.map(|v| v.to_string()));
            flag("solver.root_tol", root_tol.map(|v| v.to_string()));
        }
        Command::Slice {
            t,
            n_points,
            jump_subpoints,
        } => {
            flag("t", t.map(|v| v.to_string()));
            flag("profile.n_points", n_points.map(|v| v.to_string()));
            flag("profile.jump_subpoints", jump_subpoints.map(|v| v.to_string()));
        }
        Command::Godunov { t, cells, cfl } => {
            flag("t", t.map(|v| v.to_string()));
            flag("godunov.cells", cells.map(|v| v.to_string()));
            flag("godunov.cfl", cfl.map(|v| v.to_string()));
        }
        Command::Validate { t, dt, n_points } => {
            flag("t", t.map(|v| v.to_string()));
            flag("validate.dt", dt.map(|v| v.to_string()));
            flag("profile.n_points", n_points.map(|v| v.to_string()));
        }
        Command::Sweep {
            t_start,
            t_end,
            n_times,
            jobs,
        } => {
            flag("sweep.t_start", t_start.map(|v| v.to_string()));
            flag("sweep.t_end", t_end.map(|v| v.to_string()));
            flag("sweep.n_times", n_times.map(|v| v.to_string()));
            flag("sweep.jobs", jobs.map(|v| v.to_string()));
        }
        Command::Convergence { t, n_list } => {
            flag("t", t.map(|v| v.to_string()));
            flag("convergence.n_list", n_list.clone());
        }
    }

    RunConfig::from_map(&map).map_err(|e| CliError::Config(e.to_string()))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let cfg = build_config(cli)?;
    match &cli.command {
        Command::Solve { .. } => commands::cmd_solve(&cfg),
        Command::Slice { .. } => commands::cmd_slice(&cfg),
        Command::Godunov { .. } => commands::cmd_godunov(&cfg),
        Command::Validate { .. } => commands::cmd_validate(&cfg),
        Command::Sweep { .. } => commands::cmd_sweep(&cfg),
        Command::Convergence { .. } => commands::cmd_convergence(&cfg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

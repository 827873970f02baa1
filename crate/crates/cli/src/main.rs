//! `cryostage`: command-line front end for cooler-stage modelling and design maps.
//!
//! Exit status is 0 on success, 1 for bad input or configuration and 2 when
//! a numerical method fails.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use cryostage_core::bte::{ballistic_heat_flow, fit_power_law, fourier_heat_flow};
use cryostage_core::config::Config;
use cryostage_core::material::builtin_materials;
use cryostage_core::output::{conductance_svg, conductance_table, num, stage_table, sweep_svg, sweep_table, CsvTable};
use cryostage_core::stage::{equilibrium_temperature, solve_cascade};
use cryostage_core::sweep::{
    sweep_fig3, sweep_map_classical, sweep_map_quantum, sweep_relative_cooling_vs_t0, SweepResult,
};
use cryostage_core::Error;

#[derive(Parser)]
#[command(name = "cryostage", version, about = "Phonon-blocked tunnel-junction cooler stages")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Superconductor presets.
    Materials {
        #[command(subcommand)]
        action: MaterialsAction,
    },
    /// Single-stage equilibrium.
    Stage {
        #[command(subcommand)]
        action: SolveAction,
    },
    /// Sequential multi-stage cascade.
    Cascade {
        #[command(subcommand)]
        action: SolveAction,
    },
    /// Design-map sweeps.
    Sweep(SweepArgs),
    /// Nanowire phonon transport.
    Bte {
        #[command(subcommand)]
        action: BteAction,
    },
}

#[derive(Subcommand)]
enum MaterialsAction {
    List,
}

#[derive(Subcommand)]
enum SolveAction {
    Solve(ConfigArgs),
}

#[derive(Args)]
struct ConfigArgs {
    #[arg(long)]
    config: PathBuf,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum BteAction {
    /// Heat flow between the configured reservoir temperatures.
    Solve(ConfigArgs),
    /// Conductance curve and its power-law fit.
    Fit {
        #[command(flatten)]
        args: ConfigArgs,
        /// Also write an SVG next to `--out`.
        #[arg(long, requires = "out")]
        svg: bool,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Figure {
    /// Relative cooling vs bath temperature, aluminium.
    Fig2c,
    /// Relative cooling vs bath temperature, vanadium.
    Fig2d,
    /// Classical (n = 4) map over T/T_c and Π.
    Fig2e,
    /// Conductance-quantum (n = 2) map over T/T_c and N.
    Fig2f,
    /// Relative cooling vs R_T·A with Andreev leakage.
    Fig3,
}

impl Figure {
    fn name(self) -> &'static str {
        match self {
            Figure::Fig2c => "fig2c",
            Figure::Fig2d => "fig2d",
            Figure::Fig2e => "fig2e",
            Figure::Fig2f => "fig2f",
            Figure::Fig3 => "fig3",
        }
    }

    fn default_material(self) -> &'static str {
        match self {
            Figure::Fig2d => "V",
            _ => "Al",
        }
    }
}

#[derive(Args)]
struct SweepArgs {
    #[arg(value_enum)]
    figure: Figure,
    #[arg(long)]
    config: PathBuf,
    /// Output directory (created if missing).
    #[arg(long)]
    out: PathBuf,
    /// Also write an SVG plot.
    #[arg(long)]
    svg: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_numeric() { 2 } else { 1 })
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Materials {
            action: MaterialsAction::List,
        } => {
            let mut t = CsvTable::new(&["name", "T_c_K", "gap_eV"]);
            for m in builtin_materials() {
                t.rows.push(vec![m.name.clone(), num(m.t_c), num(m.gap_ev())]);
            }
            emit(&t, None)
        }
        Command::Stage {
            action: SolveAction::Solve(args),
        } => {
            let (cfg, hash) = Config::load(&args.config)?;
            let stage = cfg.stage_config()?;
            let sol = equilibrium_temperature(&stage, cfg.stage.t_0)?;
            let table = stage_table(
                &[sol],
                std::slice::from_ref(&stage.material.name),
                &[meta("config_sha256", hash)],
            );
            emit(&table, args.out.as_deref())
        }
        Command::Cascade {
            action: SolveAction::Solve(args),
        } => {
            let (cfg, hash) = Config::load(&args.config)?;
            let cascade = cfg.cascade_config()?;
            let sols = solve_cascade(&cascade)?;
            let names: Vec<String> = cascade.stages.iter().map(|s| s.material.name.clone()).collect();
            let t_final = sols.last().map_or(cascade.t_bath, |s| s.t_n);
            let table = stage_table(
                &sols,
                &names,
                &[
                    meta("config_sha256", hash),
                    meta("T_bath_K", num(cascade.t_bath)),
                    meta("T_final_K", num(t_final)),
                ],
            );
            emit(&table, args.out.as_deref())
        }
        Command::Sweep(args) => sweep(args),
        Command::Bte { action } => bte(action),
    }
}

fn meta(k: &str, v: impl Into<String>) -> (String, String) {
    (k.to_string(), v.into())
}

fn io_error(path: &Path, e: io::Error) -> Error {
    Error::Config(format!("cannot write {}: {e}", path.display()))
}

fn emit(table: &CsvTable, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(path) => fs::write(path, table.render()).map_err(|e| io_error(path, e)),
        None => io::stdout()
            .lock()
            .write_all(table.render().as_bytes())
            .map_err(|e| Error::Config(format!("cannot write to stdout: {e}"))),
    }
}

fn sweep(args: SweepArgs) -> Result<(), Error> {
    let (cfg, hash) = Config::load(&args.config)?;
    let fig = args.figure;
    let base = cfg.sweep_base(fig.default_material())?;
    let grid = |g: &cryostage_core::config::GridSpec, name: &str| {
        g.values().map_err(|e| Error::Config(format!("sweep.{name}: {e}")))
    };
    let result: SweepResult = match fig {
        Figure::Fig2c | Figure::Fig2d => {
            let t0 = cfg.t0_grid(&base.material)?;
            sweep_relative_cooling_vs_t0(&base, &cfg.scenarios()?, &t0)
        }
        Figure::Fig2e => sweep_map_classical(&base, &grid(&cfg.sweep.t, "t")?, &grid(&cfg.sweep.pi, "pi")?),
        Figure::Fig2f => sweep_map_quantum(&base, &grid(&cfg.sweep.t, "t")?, &grid(&cfg.sweep.n, "n")?),
        Figure::Fig3 => sweep_fig3(
            &base,
            &cfg.andreev_sweep(),
            &grid(&cfg.sweep.rt_area, "rt_area")?,
            &grid(&cfg.sweep.andreev_t0, "andreev_t0")?,
        ),
    }
    .map_err(|e| Error::Config(format!("sweep: {e}")))?;

    fs::create_dir_all(&args.out).map_err(|e| io_error(&args.out, e))?;
    let table = sweep_table(&result, &[meta("figure", fig.name()), meta("config_sha256", hash)]);
    let csv = args.out.join(format!("{}.csv", fig.name()));
    fs::write(&csv, table.render()).map_err(|e| io_error(&csv, e))?;
    if args.svg {
        let svg = args.out.join(format!("{}.svg", fig.name()));
        fs::write(&svg, sweep_svg(&result)).map_err(|e| io_error(&svg, e))?;
    }
    let failed = result.cells.iter().filter(|c| c.outcome.is_err()).count();
    if failed > 0 {
        eprintln!("{failed} of {} cells failed; see the status column", result.cells.len());
    }
    Ok(())
}

fn bte(action: BteAction) -> Result<(), Error> {
    match action {
        BteAction::Solve(args) => {
            let (cfg, hash) = Config::load(&args.config)?;
            let problem = cfg.bte.problem()?;
            let (t_hot, t_cold) = (cfg.bte.t_hot, cfg.bte.t_cold);
            let sol = problem.solve(t_hot, t_cold)?;
            let mut t = CsvTable::new(&["T_hot_K", "T_cold_K", "Q_W", "residual", "iterations"]);
            t.metadata.push(meta("config_sha256", hash));
            t.meta(
                "ballistic_Q_W",
                num(ballistic_heat_flow(&problem.geometry, &problem.medium, t_hot, t_cold)),
            );
            t.meta(
                "fourier_Q_W",
                num(fourier_heat_flow(&problem.geometry, &problem.medium, t_hot, t_cold)),
            );
            for w in &sol.warnings {
                t.meta("warning", w.to_string());
            }
            t.rows.push(vec![
                num(t_hot),
                num(t_cold),
                num(sol.heat_flow),
                num(sol.residual),
                sol.iterations.to_string(),
            ]);
            emit(&t, args.out.as_deref())
        }
        BteAction::Fit { args, svg } => {
            let (cfg, hash) = Config::load(&args.config)?;
            let problem = cfg.bte.problem()?;
            let temps = cfg
                .bte
                .temperatures
                .values()
                .map_err(|e| Error::Config(format!("bte.temperatures: {e}")))?;
            let curve = problem.conductance_curve(&temps)?;
            let fit = fit_power_law(&curve)?;
            let table = conductance_table(
                &curve,
                &[
                    meta("config_sha256", hash),
                    meta("fit_n", num(fit.channel.n)),
                    meta("fit_alpha", num(fit.channel.alpha)),
                    meta("fit_rms_log_residual", num(fit.rms_log_residual)),
                ],
            );
            emit(&table, args.out.as_deref())?;
            if let (true, Some(out)) = (svg, args.out.as_deref()) {
                let path = out.with_extension("svg");
                fs::write(&path, conductance_svg(&curve)).map_err(|e| io_error(&path, e))?;
            }
            Ok(())
        }
    }
}

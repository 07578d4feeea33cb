//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use formation_core::bounds::{
    clarke_mutual_information, differential_entropy, fisher_information, mi_upper, mi_upper_gaussian, sdpi_alpha,
    sdpi_eta_upper,
};
use formation_core::{bayes_lower_bound, BoundParams};

use crate::experiments::{
    initial_positions, run_bias_sweep, run_conversion, run_cost_comparison, run_trial, trial_seed, CostKind, SweepAxis,
};
use crate::output::{trajectory_rows, trajectory_svg, write_csv};
use crate::scenario::Scenario;

pub const EXIT_OK: i32 = 0;
/// Runtime failure: unreadable or invalid scenario, I/O error.
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_NOT_CONVERGED: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Debug, Parser)]
#[command(name = "formation-lab", version, about = "Multi-robot formation assignment, simulation and bias bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct ScenarioArgs {
    /// Scenario file; defaults to fifteen robots forming a square behind a leader.
    #[arg(short, long)]
    scenario: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    trial: usize,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the optimal arrangement for a trial's start positions.
    Assign(ScenarioArgs),
    /// Assign and form; write the trajectory.
    Simulate {
        #[command(flatten)]
        scn: ScenarioArgs,
        /// Trajectory CSV (slot,robot_id,x,y).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Form, then convert into the scenario's [convert] formation; defaults to a square turning into a circle.
    Convert {
        #[command(flatten)]
        scn: ScenarioArgs,
        /// Trajectory CSV of the conversion.
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Evaluate the formation-bias lower bound and its ingredients.
    Bound {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        sigma: f64,
        #[arg(long)]
        l0: f64,
        /// Quantization rate in bits.
        #[arg(long)]
        bits: f64,
        /// Report information in nats.
        #[arg(long)]
        nats: bool,
    },
    /// Run an experiment suite.
    #[command(subcommand)]
    Experiment(Experiment),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Case {
    /// Square with a leader.
    SquareLeader,
    /// Circle around the start centroid.
    CircleCenter,
}

#[derive(Debug, Subcommand)]
enum Experiment {
    /// Compare optimal, fixed and random arrangements.
    Cost {
        /// Scenario file; overrides --case.
        #[arg(short, long)]
        scenario: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "square-leader")]
        case: Case,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long, value_enum, default_value = "practical")]
        kind: KindArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep one sensing parameter and record formation bias against the bound.
    Bias {
        #[arg(long)]
        axis: SweepAxis,
        /// Base scenario; defaults to the sweep base.
        #[arg(short, long)]
        scenario: Option<PathBuf>,
        #[arg(long)]
        trials: Option<usize>,
        /// Comma-separated grid; defaults to the axis grid (boundary counts for bits).
        #[arg(long, value_delimiter = ',')]
        grid: Option<Vec<f64>>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum KindArg {
    Estimated,
    Practical,
}

type Failure = (i32, String);

fn fail(e: impl std::fmt::Display) -> Failure {
    (EXIT_FAILURE, e.to_string())
}

fn load(path: Option<&Path>, fallback: Scenario) -> Result<Scenario, Failure> {
    let scn = match path {
        Some(p) => Scenario::load(p).map_err(fail)?,
        None => fallback,
    };
    scn.with_env_seed().map_err(fail)
}

fn create(path: &Path) -> Result<std::io::BufWriter<std::fs::File>, Failure> {
    std::fs::File::create(path)
        .map(std::io::BufWriter::new)
        .map_err(|e| fail(format!("cannot create {}: {e}", path.display())))
}

fn write_text(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| fail(format!("cannot write {}: {e}", path.display())))
}

/// Parse `args` (program name first) and run. Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() { write!(err, "{text}") } else { write!(out, "{text}") };
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err((code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match cmd {
        Command::Assign(a) => {
            let scn = load(a.scenario.as_deref(), Scenario::leader_square())?;
            scn.validate().map_err(fail)?;
            let stream = formation_core::RngStream::new(trial_seed(scn.seed, a.trial));
            let initial = initial_positions(&scn, &stream).map_err(fail)?;
            let f = scn.formation_spec().build().map_err(fail)?;
            let best = match scn.mode.kind {
                crate::scenario::ModeKind::Leader => formation_core::assign_with_leader(&initial, &f),
                crate::scenario::ModeKind::Center => {
                    let c = match scn.given_center() {
                        Some(c) => c,
                        None => formation_core::centroid(&initial).map_err(fail)?,
                    };
                    formation_core::assign_with_center(&initial, &f, c)
                }
            }
            .map_err(fail)?;
            writeln!(out, "robot_id,slot,x,y,leader").map_err(fail)?;
            for (i, p) in initial.iter().enumerate() {
                let lead = best.assignment.leader() == Some(i);
                writeln!(out, "{},{},{},{},{}", i + 1, best.assignment.slot_of(i) + 1, p.x, p.y, lead).map_err(fail)?;
            }
            writeln!(out, "estimated_cost,{}", best.total_cost).map_err(fail)?;
            Ok(EXIT_OK)
        }
        Command::Simulate { scn: a, out: csv_path, svg } => {
            let scn = load(a.scenario.as_deref(), Scenario::leader_square())?;
            let run = run_trial(&scn, a.trial).map_err(fail)?;
            if let Some(p) = csv_path {
                write_csv(create(&p)?, &trajectory_rows(&run.trajectory)).map_err(fail)?;
            }
            if let Some(p) = svg {
                let dest = run.trajectory.final_state().destinations().map_err(fail)?;
                write_text(&p, &trajectory_svg(&run.trajectory, &dest))?;
            }
            write_csv(&mut *out, std::slice::from_ref(&run.record)).map_err(fail)?;
            Ok(if run.record.converged { EXIT_OK } else { EXIT_NOT_CONVERGED })
        }
        Command::Convert { scn: a, out: csv_path, svg } => {
            let scn = load(a.scenario.as_deref(), Scenario::square_to_circle())?;
            let run = run_conversion(&scn, a.trial).map_err(fail)?;
            if let Some(p) = csv_path {
                write_csv(create(&p)?, &trajectory_rows(&run.trajectory)).map_err(fail)?;
            }
            if let Some(p) = svg {
                let dest = run.trajectory.final_state().destinations().map_err(fail)?;
                write_text(&p, &trajectory_svg(&run.trajectory, &dest))?;
            }
            write_csv(&mut *out, std::slice::from_ref(&run.record)).map_err(fail)?;
            let ok = run.first.record.converged && run.record.converged;
            Ok(if ok { EXIT_OK } else { EXIT_NOT_CONVERGED })
        }
        Command::Bound { n, sigma, l0, bits, nats } => {
            let mut p = BoundParams::new(n, sigma, l0, bits).map_err(|e| (EXIT_USAGE, e.to_string()))?;
            if nats {
                p = p.in_nats();
            }
            let unit = if nats { "nats" } else { "bits" };
            let rows = [
                ("differential_entropy", differential_entropy(l0, p.base)),
                ("fisher_information", fisher_information(n, sigma)),
                ("clarke_mutual_information", clarke_mutual_information(&p)),
                ("mi_upper_gaussian", mi_upper_gaussian(&p).map_err(fail)?),
                ("sdpi_alpha", sdpi_alpha(&p)),
                ("sdpi_eta_upper", sdpi_eta_upper(&p)),
                ("mi_upper", mi_upper(&p).map_err(fail)?),
                ("bayes_lower_bound", bayes_lower_bound(&p).map_err(fail)?),
            ];
            writeln!(out, "# n={n} sigma={sigma} l0={l0} b={bits} ({unit})").map_err(fail)?;
            for (name, v) in rows {
                writeln!(out, "{name:<26} {v:.6}").map_err(fail)?;
            }
            Ok(EXIT_OK)
        }
        Command::Experiment(Experiment::Cost { scenario, case, trials, kind, out: path }) => {
            let preset = match case {
                Case::SquareLeader => Scenario::leader_square(),
                Case::CircleCenter => Scenario::center_circle(),
            };
            let mut scn = load(scenario.as_deref(), Scenario { trials: 200, ..preset })?;
            if let Some(t) = trials {
                scn.trials = t;
            }
            let kind = match kind {
                KindArg::Estimated => CostKind::Estimated,
                KindArg::Practical => CostKind::Practical,
            };
            let rows = run_cost_comparison(&scn, kind).map_err(fail)?;
            write_csv(create(&path)?, &rows).map_err(fail)?;
            let mean =
                |f: fn(&crate::experiments::ComparisonRow) -> f64| rows.iter().map(f).sum::<f64>() / rows.len() as f64;
            writeln!(
                out,
                "mean cost: hungarian {:.1}, fixed {:.1}, random {:.1}",
                mean(|r| r.hungarian),
                mean(|r| r.fixed),
                mean(|r| r.random)
            )
            .map_err(fail)?;
            Ok(EXIT_OK)
        }
        Command::Experiment(Experiment::Bias { axis, scenario, trials, grid, out: path }) => {
            let mut scn = load(scenario.as_deref(), Scenario::bias_base())?;
            if let Some(t) = trials {
                scn.trials = t;
            }
            let grid = grid.unwrap_or_else(|| axis.grid());
            let rows = run_bias_sweep(&scn, axis, &grid).map_err(fail)?;
            write_csv(create(&path)?, &rows).map_err(fail)?;
            for r in &rows {
                writeln!(out, "{:>8.3}  bias {:.4} ± {:.4}  bound {:.4}", r.param, r.mean_bias, r.std_bias, r.bound)
                    .map_err(fail)?;
            }
            Ok(EXIT_OK)
        }
    }
}

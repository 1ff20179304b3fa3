//! Batch CLI over the torwave library: run simulations, blow-up studies,
//! theorem verifications, parameter sweeps, and snapshot inspection.
//!
//! Exit codes: 0 when all enabled checks pass, 1 on a check failure,
//! 2 on usage or configuration errors.

use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;
use torwave::harness::{run_experiment, run_experiment_with_workers};
use torwave::scenario::{default_spec, load_scenario, ExperimentKind, ExperimentSpec};
use torwave::snapshot::{load_state_file, save_state_file, SnapshotState};
use torwave::wave::run_from;

#[derive(Parser)]
#[command(name = "torwave", version, about = "Damped cubic wave equation on the 3-torus: solvers and verification harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct CommonOpts {
    /// Scenario file (JSON, schema 1); defaults are built in per command.
    #[arg(long)]
    scenario: Option<PathBuf>,
    /// Output directory for CSV/JSON artifacts.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Worker threads for sweeps.
    #[arg(long)]
    workers: Option<usize>,
    /// Seed for random-field generation.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Override the final time.
    #[arg(long)]
    t_final: Option<f64>,
    /// Override the truncation radius.
    #[arg(long)]
    n: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate a scenario and emit its time series.
    Simulate {
        #[command(flatten)]
        common: CommonOpts,
        /// Resume from a saved state file.
        #[arg(long)]
        from_state: Option<PathBuf>,
        /// Save the final state to this file.
        #[arg(long)]
        save_state: Option<PathBuf>,
    },
    /// Integrate the zero-mode blow-up ODE and check the lifespan bound.
    Blowup {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Run a named verification scenario (thm1, thm32, thm42, thm46, thm51).
    Verify {
        /// Which result to verify.
        theorem: String,
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Classify outcomes over a parameter grid.
    Sweep {
        #[command(flatten)]
        common: CommonOpts,
    },
    /// Print the header of a snapshot file.
    Snapshot {
        /// Path to an "NWS1" state file.
        path: PathBuf,
    },
}

fn build_spec(kind: ExperimentKind, common: &CommonOpts) -> torwave::Result<ExperimentSpec> {
    let mut spec = match &common.scenario {
        Some(path) => {
            let spec = load_scenario(path)?;
            if spec.kind != kind {
                return Err(torwave::Error::Scenario(format!(
                    "scenario kind `{}` does not match the `{}` command",
                    spec.kind.name(),
                    kind.name()
                )));
            }
            spec
        }
        None => default_spec(kind)?,
    };
    // flag overrides re-materialize so the echoed file stays faithful
    let mut file = spec.resolved.clone();
    if let Some(seed) = common.seed {
        file.seed = Some(seed);
    }
    if let Some(dt) = common.dt {
        file.dt = Some(dt);
    }
    if let Some(tf) = common.t_final {
        file.t_final = Some(tf);
    }
    if let Some(n) = common.n {
        if file.n != Some(n) {
            file.n = Some(n);
            // radius changes invalidate nothing else: fields are rebuilt
        }
    }
    if common.seed.is_some() || common.dt.is_some() || common.t_final.is_some() || common.n.is_some()
    {
        spec = torwave::scenario::materialize(file)?;
    }
    Ok(spec)
}

fn parse_theorem(s: &str) -> torwave::Result<ExperimentKind> {
    match s {
        "thm1" => Ok(ExperimentKind::VerifyThm1),
        "thm32" => Ok(ExperimentKind::VerifyThm32),
        "thm42" => Ok(ExperimentKind::VerifyThm42),
        "thm46" => Ok(ExperimentKind::VerifyThm46),
        "thm51" => Ok(ExperimentKind::VerifyThm51Blowup),
        other => Err(torwave::Error::Scenario(format!(
            "unknown theorem `{other}`; expected thm1, thm32, thm42, thm46 or thm51"
        ))),
    }
}

fn print_check_lines(outcome: &torwave::harness::ExperimentOutcome) {
    for c in &outcome.conditions {
        println!(
            "{} {:<26} lhs={:.6e} rhs={:.6e} margin={:.3e}",
            if c.satisfied { "PASS" } else { "FAIL" },
            c.name,
            c.lhs,
            c.rhs,
            c.margin
        );
    }
    println!(
        "{} overall",
        if outcome.passed { "PASS" } else { "FAIL" }
    );
}

fn dispatch(cli: Cli) -> torwave::Result<bool> {
    match cli.command {
        Command::Simulate {
            common,
            from_state,
            save_state,
        } => {
            let spec = build_spec(ExperimentKind::Simulate, &common)?;
            if let Some(from) = from_state {
                // resumed runs bypass the generic dispatcher: same config,
                // saved initial state, absolute time preserved
                let (state, _m) = load_state_file(&from)?;
                let state = match state {
                    SnapshotState::Wave(w) => w,
                    SnapshotState::Hyperbolic(_) => {
                        return Err(torwave::Error::Scenario(
                            "resume expects a second-order state snapshot".into(),
                        ))
                    }
                };
                let result = run_from(&spec.scenario, state, spec.scenario.sample_every)?;
                std::fs::create_dir_all(&common.out)?;
                if let Some(save) = save_state {
                    save_state_file(
                        &save,
                        &SnapshotState::Wave(result.final_state.clone()),
                        spec.scenario.m,
                    )?;
                }
                println!(
                    "resumed to t = {} (hnorm {:.6e})",
                    result.final_state.t,
                    result.records.last().map(|r| r.hnorm_u).unwrap_or(0.0)
                );
                return Ok(result.blowup.is_none());
            }
            let outcome = run_experiment(&spec, &common.out)?;
            if let (Some(save), Some(state)) = (save_state, &outcome.final_wave_state) {
                save_state_file(&save, &SnapshotState::Wave(state.clone()), spec.scenario.m)?;
            }
            print_check_lines(&outcome);
            Ok(outcome.passed)
        }
        Command::Blowup { common } => {
            let spec = build_spec(ExperimentKind::BlowupOde, &common)?;
            let outcome = run_experiment(&spec, &common.out)?;
            print_check_lines(&outcome);
            Ok(outcome.passed)
        }
        Command::Verify { theorem, common } => {
            let kind = parse_theorem(&theorem)?;
            let spec = build_spec(kind, &common)?;
            let outcome = run_experiment(&spec, &common.out)?;
            print_check_lines(&outcome);
            Ok(outcome.passed)
        }
        Command::Sweep { common } => {
            let spec = build_spec(ExperimentKind::Sweep, &common)?;
            let outcome = run_experiment_with_workers(&spec, &common.out, common.workers)?;
            println!("{}", outcome.summary["outcomes"]);
            Ok(outcome.passed)
        }
        Command::Snapshot { path } => {
            let (state, m) = load_state_file(&path)?;
            match state {
                SnapshotState::Wave(w) => {
                    println!(
                        "second-order state: t = {}, n = {}, m = {}, real = {}",
                        w.t,
                        w.u.n(),
                        m,
                        w.u.real_flag()
                    );
                }
                SnapshotState::Hyperbolic(h) => {
                    println!(
                        "first-order state: t = {}, n = {}, m = {}",
                        h.t,
                        h.u.n(),
                        m
                    );
                }
            }
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                torwave::Error::Scenario(_)
                | torwave::Error::Io(_)
                | torwave::Error::Json(_)
                | torwave::Error::Snapshot(_)
                | torwave::Error::InvalidParameter(_)
                | torwave::Error::BadDamping(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}

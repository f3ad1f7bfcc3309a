//! Command-line front end: repulsion sweeps, the verification suite, and
//! single optimization runs. Exit codes: 0 success, 1 verification failure,
//! 2 usage or configuration error, 3 sweep points skipped on a numeric
//! domain problem.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use hubbard_ucc::cli::{
    cmd_sweep_angles, cmd_sweep_energy, cmd_verify, cmd_vqe, exit_code, Scale, SweepConfig,
    SweepSummary, VerifyLevel,
};
use hubbard_ucc::stateprep::Mode;
use hubbard_ucc::Result;

#[derive(Parser)]
#[command(
    name = "hubbard-ucc",
    version,
    about = "Factorized state preparation on the four-site Hubbard ring"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ScaleArg {
    Linear,
    Log,
}

impl From<ScaleArg> for Scale {
    fn from(value: ScaleArg) -> Self {
        match value {
            ScaleArg::Linear => Scale::Linear,
            ScaleArg::Log => Scale::Log,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    /// Full construction, nine factors.
    Exact,
    /// Doubles-only construction, eight factors.
    Doubles,
}

impl From<ModeArg> for Mode {
    fn from(value: ModeArg) -> Self {
        match value {
            ModeArg::Exact => Mode::Exact,
            ModeArg::Doubles => Mode::DoublesOnly,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Fast,
    Full,
}

impl From<LevelArg> for VerifyLevel {
    fn from(value: LevelArg) -> Self {
        match value {
            LevelArg::Fast => VerifyLevel::Fast,
            LevelArg::Full => VerifyLevel::Full,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the four construction angles over a repulsion grid.
    SweepAngles {
        #[arg(long, default_value_t = 0.1)]
        u_min: f64,
        #[arg(long, default_value_t = 16.0)]
        u_max: f64,
        #[arg(long, default_value_t = 81)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
        scale: ScaleArg,
        /// Hopping amplitude; outputs are in units of t either way.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Write ground-state references and the prepared state's energy and
    /// fidelity over a repulsion grid.
    SweepEnergy {
        #[arg(long, default_value_t = 0.1)]
        u_min: f64,
        #[arg(long, default_value_t = 16.0)]
        u_max: f64,
        #[arg(long, default_value_t = 81)]
        steps: usize,
        #[arg(long, value_enum, default_value_t = ScaleArg::Linear)]
        scale: ScaleArg,
        /// Hopping amplitude; outputs are in units of t either way.
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the verification suite and print one line per check.
    Verify {
        #[arg(long, value_enum, default_value_t = LevelArg::Fast)]
        level: LevelArg,
    },
    /// Minimize the energy from zero angles and write the evaluation
    /// history.
    Vqe {
        #[arg(long, default_value_t = 4.0)]
        u: f64,
        #[arg(long, value_enum, default_value_t = ModeArg::Exact)]
        mode: ModeArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Output CSV path.
        #[arg(long)]
        out: PathBuf,
    },
}

fn finish_sweep(outcome: Result<SweepSummary>) -> i32 {
    match outcome {
        Ok(summary) => {
            for (u, why) in &summary.skipped {
                eprintln!("skipped u = {u}: {why}");
            }
            println!(
                "wrote {} rows, skipped {}",
                summary.written,
                summary.skipped.len()
            );
            if summary.skipped.is_empty() {
                0
            } else {
                3
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn run() -> i32 {
    match Cli::parse().command {
        Command::SweepAngles {
            u_min,
            u_max,
            steps,
            scale,
            t,
            out,
        } => {
            let config = SweepConfig {
                u_min,
                u_max,
                steps,
                scale: scale.into(),
                t,
                output: out,
            };
            finish_sweep(cmd_sweep_angles(&config))
        }
        Command::SweepEnergy {
            u_min,
            u_max,
            steps,
            scale,
            t,
            mode,
            out,
        } => {
            let config = SweepConfig {
                u_min,
                u_max,
                steps,
                scale: scale.into(),
                t,
                output: out,
            };
            finish_sweep(cmd_sweep_energy(&config, mode.into()))
        }
        Command::Verify { level } => {
            let report = cmd_verify(level.into());
            println!("{report}");
            if report.all_passed() {
                0
            } else {
                1
            }
        }
        Command::Vqe { u, mode, seed, out } => match cmd_vqe(u, mode.into(), seed, &out) {
            Ok(result) => {
                println!(
                    "best energy {:.12} after {} evaluations (converged: {})",
                    result.best_energy, result.evaluations, result.converged
                );
                0
            }
            Err(e) => {
                eprintln!("error: {e}");
                exit_code(&e)
            }
        },
    }
}

fn main() {
    std::process::exit(run());
}

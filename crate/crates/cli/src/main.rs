//! `fwsubmix`: run experiments, verify instance files, brute-force small
//! instances on a grid.
//!
//! Exit status: 0 on success, 1 when `verify` finds a failing check, 2 for
//! configuration, parse and I/O errors, 3 when a solver fails.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fwsubmix::bench::{
    format_sig12, run_experiment, verify_instance, ExperimentConfig, InstanceSpec,
};
use fwsubmix::verify::grid_maximize;
use fwsubmix::Error;

#[derive(Parser)]
#[command(
    name = "fwsubmix",
    version,
    about = "Frank-Wolfe solvers for DR-submodular plus concave maximization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the experiment described by a key=value config file.
    Run {
        config: PathBuf,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        m: Option<usize>,
        /// Single seed; replaces the config's seed list.
        #[arg(long)]
        seed: Option<u64>,
        /// Comma-separated solver names, or `all`.
        #[arg(long)]
        algo: Option<String>,
        /// Output directory.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check gradients, DR-submodularity of G and concavity of C.
    Verify {
        instance: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Maximize F over a grid of the given spacing (n <= 6).
    Oracle {
        instance: PathBuf,
        #[arg(long)]
        step: f64,
    },
}

enum Failure {
    Input(Error),
    Solver(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Config(_) | Error::Parse { .. } | Error::Io(_) | Error::InvalidRegion(_) => {
                Failure::Input(e)
            }
            _ => Failure::Solver(e),
        }
    }
}

fn load(path: &std::path::Path) -> Result<fwsubmix::ProblemInstance, Failure> {
    InstanceSpec::load(path)
        .and_then(|spec| spec.build())
        .map_err(Failure::Input)
}

fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Run {
            config,
            n,
            m,
            seed,
            algo,
            out,
        } => {
            let mut cfg = ExperimentConfig::from_file(&config).map_err(Failure::Input)?;
            let overrides = [
                ("n", n.map(|v| v.to_string())),
                ("m", m.map(|v| v.to_string())),
                ("seed", seed.map(|v| v.to_string())),
                ("algorithms", algo),
                ("output_dir", out.map(|p| p.display().to_string())),
            ];
            for (key, value) in overrides {
                if let Some(v) = value {
                    cfg.set(key, &v).map_err(Failure::Input)?;
                }
            }
            cfg.validate().map_err(Failure::Input)?;
            let output = run_experiment(&cfg)?;
            for f in &output.files {
                println!("{}", f.display());
            }
            Ok(true)
        }
        Command::Verify { instance, seed } => {
            let p = load(&instance)?;
            let checks = verify_instance(&p, seed)?;
            for (name, c) in &checks.checks {
                println!(
                    "{:<16} {}  trials {:>4}  max violation {:.3e}  tolerance {:.0e}",
                    name,
                    if c.passed { "PASS" } else { "FAIL" },
                    c.trials,
                    c.max_violation,
                    c.tolerance
                );
            }
            println!("smoothness estimate {}", format_sig12(checks.smoothness));
            Ok(checks.passed())
        }
        Command::Oracle { instance, step } => {
            let p = load(&instance)?;
            let r = grid_maximize(&p, step)?;
            let coords: Vec<String> = r.argmax.iter().map(|v| format_sig12(*v)).collect();
            println!("argmax {}", coords.join(","));
            println!("value {}", format_sig12(r.value));
            println!("g_part {}", format_sig12(r.g_value));
            println!("c_part {}", format_sig12(r.c_value));
            println!("points {}", r.points_scanned);
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Input(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(Failure::Solver(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

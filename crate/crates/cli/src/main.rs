use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use kplus_cli::config::{load, Kind, Scenario};
use kplus_cli::scenario::{run, run_scenario, Params, RunOptions};
use kplus_cli::verify::default_workers;
use kplus_cli::ERROR_EXIT;

/// Scenario runner for the kplus toolkit.
#[derive(Parser)]
#[command(name = "kplus", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// JSON params for the subcommand (a full scenario for `run`).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Direction samples per estimate, overriding the kind's default.
    #[arg(long, global = true)]
    samples: Option<u64>,
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    workers: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact cap measures over a dimension and angle grid.
    CapMeasure,
    /// Restricted normal bundle of a point cloud.
    Bundle,
    /// Total positive curvature of a meshed surface.
    Kplus,
    /// Curvature inequality after the contact-angle gate.
    CgrCheck,
    /// Stability check against a calibrated or given δ.
    CgrStability,
    /// Willmore-type energy against its sharp bound.
    Willmore,
    /// Planar relative isoperimetric profile.
    Profile,
    /// The full acceptance battery.
    VerifyAll,
    /// Empirical δ(ε) table on the slab family.
    Calibrate,
    /// A scenario file `{"name", "kind", "params", "seed", "out"}` given by --config.
    Run,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    let opts = RunOptions {
        name: None,
        seed: g.seed,
        samples: g.samples,
        out: g.out,
        workers: g.workers.unwrap_or_else(default_workers).max(1),
    };
    let params = g.config.clone().map_or(Params::Defaults, Params::File);
    let result = match cli.command {
        Command::Run => match &g.config {
            None => {
                eprintln!("error: `run` needs --config");
                return ExitCode::from(ERROR_EXIT);
            }
            Some(path) => load::<Scenario>(path).and_then(|s| run_scenario(&s, &opts)),
        },
        c => run(kind(c), &params, &opts),
    };
    match result {
        Ok(summary) => {
            for l in &summary.lines {
                println!("{l}");
            }
            for f in &summary.files {
                println!("wrote {}", f.display());
            }
            ExitCode::from(summary.outcome.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ERROR_EXIT)
        }
    }
}

fn kind(c: Command) -> Kind {
    match c {
        Command::CapMeasure => Kind::CapMeasure,
        Command::Bundle => Kind::Bundle,
        Command::Kplus => Kind::Kplus,
        Command::CgrCheck => Kind::CgrCheck,
        Command::CgrStability => Kind::CgrStability,
        Command::Willmore => Kind::Willmore,
        Command::Profile => Kind::Profile,
        Command::VerifyAll => Kind::VerifyAll,
        Command::Calibrate => Kind::Calibrate,
        Command::Run => unreachable!("handled by the caller"),
    }
}

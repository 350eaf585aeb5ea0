//! `smrlab`: configuration-driven experiments on the periodic SPDE laboratory.

mod commands;
mod config;
mod failure;
mod svg;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use crate::commands::Run;
use crate::config::{Config, Subcommand};
use crate::failure::Failure;

/// Run one experiment described by a JSON config.
#[derive(Debug, Parser)]
#[command(name = "smrlab", version, about)]
struct Args {
    /// check-parabolicity, norms, verify-multiplication, solve,
    /// smr-experiment or perturbation-budget. Defaults to the config's
    /// `subcommand` entry.
    subcommand: Option<String>,
    /// Path of the JSON config.
    #[arg(long)]
    config: PathBuf,
    /// Omit timestamps so repeated runs are byte-identical.
    #[arg(long)]
    reproducible: bool,
    /// Worker threads for path-parallel work.
    #[arg(long)]
    threads: Option<usize>,
    /// Directory for the artifacts; overrides the config's `out_dir`.
    #[arg(long)]
    out_dir: Option<PathBuf>,
}

fn pick_subcommand(arg: Option<&str>, cfg: Option<&str>) -> Result<Subcommand, Failure> {
    match (arg, cfg) {
        (Some(a), Some(c)) if a != c => Err(Failure::config(
            "subcommand",
            format!("command line names {a:?} but the config names {c:?}"),
        )),
        (Some(a), _) => Subcommand::parse(a),
        (None, Some(c)) => Subcommand::parse(c),
        (None, None) => Err(Failure::config("subcommand", "no subcommand on the command line or in the config")),
    }
}

fn run(args: &Args) -> Result<(), Failure> {
    let cfg = Config::load(&args.config)?;
    let sub = pick_subcommand(args.subcommand.as_deref(), cfg.subcommand.as_deref())?;
    if let Some(n) = args.threads {
        if n == 0 {
            return Err(Failure::config("threads", "threads >= 1"));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::config("threads", e.to_string()))?;
    }
    let run = Run { cfg: &cfg, sub, out_dir: commands::out_dir(args.out_dir.as_deref(), &cfg), reproducible: args.reproducible };
    let (summary, artifacts) = run.execute()?;
    println!("{}", serde_json::to_string(&summary).map_err(|e| Failure::json(&e))?);
    for a in artifacts {
        eprintln!("wrote {}", a.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let args = match Args::try_parse() {
        Ok(a) => a,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            let first = e.to_string();
            let reason = first.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("{}", Failure::config("arguments", reason));
            return ExitCode::from(failure::EXIT_VALIDATION as u8);
        }
    };
    match run(&args) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("{f}");
            ExitCode::from(f.code as u8)
        }
    }
}

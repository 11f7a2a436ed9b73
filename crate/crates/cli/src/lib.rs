//! Batch front-end for the `dualbound` pipelines.
//!
//! Exit codes: 0 success, 1 usage, 2 computation error, 3 verification failure.

pub mod args;
pub mod cache;
pub mod config;
pub mod jobs;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::error::ErrorKind;
use clap::Parser;
use dualbound::magic::MagicCharge;
use rayon::prelude::*;
use serde_json::Value;

use args::{Cli, Command, Format, MagicCmd};
use cache::ResultCache;
use config::{parse_charge, parse_h_range, RunConfig, CACHE_ENV};
use jobs::{Job, Status};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_COMPUTATION: u8 = 2;
pub const EXIT_VERIFICATION: u8 = 3;

/// Validated command: a name for the output and the independent jobs it consists of.
fn plan(command: &Command) -> Result<(&'static str, Vec<Job>), String> {
    let charge = |c: u32| MagicCharge::new(c).map_err(|e| e.to_string());
    Ok(match command {
        Command::CodeBound { n } => {
            if let Some(bad) = n.iter().find(|&&n| n == 0) {
                return Err(format!("code length must be positive, got {bad}"));
            }
            ("code-bound", n.iter().map(|&n| Job::Code { n }).collect())
        }
        Command::LatticeBound { n } => {
            if n.contains(&0) {
                return Err("lattice rank must be positive".into());
            }
            ("lattice-bound", n.iter().map(|&n| Job::Lattice { n }).collect())
        }
        Command::VoaBound { c } => {
            let cs = c.iter().map(|s| parse_charge(s)).collect::<Result<Vec<_>, _>>()?;
            ("voa-bound", cs.into_iter().map(|c| Job::Voa { c }).collect())
        }
        Command::Magic {
            cmd: MagicCmd::Verify { c },
        } => ("magic-verify", vec![Job::MagicVerify { charge: charge(*c)? }]),
        Command::Magic {
            cmd: MagicCmd::Eval { c, h },
        } => {
            let m = charge(*c)?;
            let hs = parse_h_range(h)?;
            (
                "magic-eval",
                hs.into_iter()
                    .map(|h| Job::MagicPoint { charge: m.clone(), h })
                    .collect(),
            )
        }
    })
}

fn default_format(command: &Command) -> Format {
    match command {
        Command::Magic {
            cmd: MagicCmd::Eval { .. },
        } => Format::Csv,
        _ => Format::Text,
    }
}

/// Runs every job, in parallel, and returns the records in input order.
pub fn execute(jobs: &[Job], cfg: &RunConfig) -> Result<Vec<Value>, String> {
    let cache = match &cfg.cache_path {
        Some(dir) => Some(ResultCache::open(dir).map_err(|e| format!("cache {}: {e}", dir.display()))?),
        None => None,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cfg.jobs {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| e.to_string())?;
    Ok(pool.install(|| jobs.par_iter().map(|j| j.run(cfg, cache.as_ref())).collect()))
}

pub fn exit_code(records: &[Value]) -> u8 {
    match records.iter().map(Status::of).max() {
        Some(Status::Error) => EXIT_COMPUTATION,
        Some(Status::VerificationFailed) => EXIT_VERIFICATION,
        _ => EXIT_OK,
    }
}

pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let env_cache = std::env::var_os(CACHE_ENV).map(PathBuf::from);
    let cfg = match RunConfig::from_opts(&cli.opts, default_format(&cli.command), env_cache.as_deref()) {
        Ok(c) => c,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let (name, jobs) = match plan(&cli.command) {
        Ok(p) => p,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let records = match execute(&jobs, &cfg) {
        Ok(r) => r,
        Err(msg) => {
            let _ = writeln!(err, "error: {msg}");
            return EXIT_COMPUTATION;
        }
    };
    if let Err(e) = render::write_output(out, name, &cfg, &records) {
        let _ = writeln!(err, "error: writing output: {e}");
        return EXIT_COMPUTATION;
    }
    exit_code(&records)
}

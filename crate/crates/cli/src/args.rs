use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "dualbound",
    version,
    about = "Certified linear and semidefinite bounds for codes, lattices and VOAs"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: GlobalOpts,
}

#[derive(Debug, Args)]
pub struct GlobalOpts {
    /// Highest functional order is 2N+1.
    #[arg(long = "N", global = true, default_value_t = 12)]
    pub n_top: usize,
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    pub precision: u32,
    /// Bisection tolerance on Δ.
    #[arg(long, global = true, default_value_t = 1e-4)]
    pub tol: f64,
    /// Finest quadrature level for the magic functions.
    #[arg(long = "quad-level", global = true, default_value_t = 10)]
    pub quad_level: u32,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Result cache directory. DUALBOUND_CACHE takes precedence.
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Where bound certificates are written. Defaults to `<cache>/certificates`.
    #[arg(long = "cert-dir", global = true)]
    pub cert_dir: Option<PathBuf>,
    /// Vacuum term used by `voa-bound`.
    #[arg(long, global = true, value_enum, default_value_t = Vacuum::Leading)]
    pub vacuum: Vacuum,
    /// Worker threads; defaults to the number of cores.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Least k for which the binary code LP is infeasible.
    CodeBound {
        #[arg(required = true)]
        n: Vec<usize>,
    },
    /// Spectral gap bound for even unimodular lattices of rank n.
    LatticeBound {
        #[arg(required = true)]
        n: Vec<u32>,
    },
    /// Spectral gap bound for VOAs of central charge c (e.g. `8/7`, `23.5`).
    VoaBound {
        #[arg(required = true)]
        c: Vec<String>,
    },
    /// Magic-function verification suite and evaluation.
    Magic {
        #[command(subcommand)]
        cmd: MagicCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum MagicCmd {
    Verify {
        #[arg(long)]
        c: u32,
    },
    /// Values of f_c on `start:end:step`.
    Eval {
        #[arg(long)]
        c: u32,
        #[arg(long)]
        h: String,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Vacuum {
    Leading,
    Subtracted,
}

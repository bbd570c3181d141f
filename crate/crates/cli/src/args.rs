//! Command-line surface.

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "telegraph",
    version,
    about = "Telegraph-process simulation and rate estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one path and write the sampled positions.
    Simulate {
        /// Switch rate λ.
        #[arg(long)]
        lambda: f64,
        /// Speed v.
        #[arg(long)]
        v: f64,
        /// Grid spacing Δ.
        #[arg(long)]
        delta: f64,
        /// Number of grid increments n (n+1 rows are written).
        #[arg(long)]
        n: u64,
        /// Random seed; identical seeds give byte-identical output.
        #[arg(long)]
        seed: u64,
        /// Output path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Output format.
        #[arg(long, value_enum, default_value = "csv")]
        format: OutputFormat,
    },
    /// Tabulate E X(t)^p as CSV `p,t,lambda,v,value`.
    Moments {
        /// Moment orders, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        p: Vec<u32>,
        /// Times, comma-separated.
        #[arg(long, value_delimiter = ',', required = true)]
        t: Vec<f64>,
        /// Switch rate λ.
        #[arg(long)]
        lambda: f64,
        /// Speed v.
        #[arg(long)]
        v: f64,
        /// Output path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Estimate λ from a sampled path (CSV with header `t,x`).
    Estimate {
        /// Input sample path.
        #[arg(long)]
        input: PathBuf,
        /// Speed v (assumed known).
        #[arg(long)]
        v: f64,
        /// Estimators to run, comma-separated names:
        /// moment_implicit, moment_explicit, efficient, pseudo_mle.
        #[arg(long, value_delimiter = ',')]
        estimators: Option<Vec<String>>,
        /// Output path (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a Monte Carlo experiment from a JSON config.
    Experiment {
        /// Config file with keys {lambda0, v, delta, n, replications,
        /// master_seed, estimators, parallelism}.
        #[arg(long)]
        config: PathBuf,
        /// Output path for the JSON summary (stdout when absent).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Optional CSV of raw scaled errors `estimator,replication,z`.
        #[arg(long = "raw-z")]
        raw_z: Option<PathBuf>,
    },
}

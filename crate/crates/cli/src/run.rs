//! Subcommand dispatch.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use telegraph_core::estimators::{
    efficient_estimator, moment_estimator_explicit, moment_estimator_implicit, pseudo_mle,
    EstimateResult, EstimatorKind, Tolerances,
};
use telegraph_core::montecarlo::{
    run_replication, scaled_errors, summarize_experiment, ExperimentConfig, MonteCarloSummary,
    ReplicationRecord,
};
use telegraph_core::moments::MomentQuery;
use telegraph_core::simulate::{replication_rng, simulate_path};
use telegraph_core::{DiscreteSample, ModelParams};

use crate::args::{Cli, Command, OutputFormat};
use crate::sample_io;

/// Failures split by exit code: validation problems exit 1, runtime
/// problems exit 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
}

fn validation(err: impl std::fmt::Display) -> CliError {
    CliError::Validation(err.to_string())
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| CliError::Runtime(format!("writing to stdout: {e}")))
        }
    }
}

pub fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Simulate {
            lambda,
            v,
            delta,
            n,
            seed,
            out,
            format,
        } => simulate_cmd(lambda, v, delta, n, seed, out, format),
        Command::Moments { p, t, lambda, v, out } => moments_cmd(&p, &t, lambda, v, out),
        Command::Estimate {
            input,
            v,
            estimators,
            out,
        } => estimate_cmd(&input, v, estimators.as_deref(), out),
        Command::Experiment { config, out, raw_z } => experiment_cmd(&config, out, raw_z),
    }
}

#[derive(Serialize)]
struct JsonSample<'a> {
    delta: f64,
    n: usize,
    v: f64,
    positions: &'a [f64],
}

fn simulate_cmd(
    lambda: f64,
    v: f64,
    delta: f64,
    n: u64,
    seed: u64,
    out: Option<PathBuf>,
    format: OutputFormat,
) -> Result<(), CliError> {
    let params = ModelParams::new(lambda, v).map_err(validation)?;
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(CliError::Validation("delta must be positive and finite".into()));
    }
    if n == 0 {
        return Err(CliError::Validation("n must be positive".into()));
    }
    let horizon = n as f64 * delta;
    let mut rng = replication_rng(seed, 0);
    let path = simulate_path(params, horizon, &mut rng);
    let sample = path
        .sample_on_grid(delta, n as usize)
        .map_err(|e| CliError::Runtime(e.to_string()))?;
    let text = match format {
        OutputFormat::Csv => sample_io::to_csv(&sample),
        OutputFormat::Json => {
            let mut text = serde_json::to_string_pretty(&JsonSample {
                delta: sample.delta(),
                n: sample.n(),
                v: sample.v(),
                positions: sample.positions(),
            })
            .map_err(|e| CliError::Runtime(e.to_string()))?;
            text.push('\n');
            text
        }
    };
    write_output(out.as_deref(), &text)
}

fn moments_cmd(
    orders: &[u32],
    times: &[f64],
    lambda: f64,
    v: f64,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    let params = ModelParams::new(lambda, v).map_err(validation)?;
    let mut text = String::from("p,t,lambda,v,value\n");
    for &p in orders {
        for &t in times {
            let query = MomentQuery::new(p, t, params).map_err(validation)?;
            let value = telegraph_core::moments::moment_p(&query);
            let _ = writeln!(text, "{p},{t},{lambda},{v},{value:.16e}");
        }
    }
    write_output(out.as_deref(), &text)
}

/// The JSON record `estimate` emits per estimator.
#[derive(Serialize)]
struct EstimateRecord {
    kind: EstimatorKind,
    value: f64,
    converged: bool,
    at_boundary: bool,
    iterations: u32,
}

impl From<EstimateResult> for EstimateRecord {
    fn from(r: EstimateResult) -> Self {
        Self {
            kind: r.kind,
            value: r.value,
            converged: r.converged,
            at_boundary: r.at_boundary,
            iterations: r.iterations,
        }
    }
}

/// Estimators that work from a sample alone, in canonical order.
const SAMPLE_ESTIMATORS: [EstimatorKind; 4] = [
    EstimatorKind::MomentImplicit,
    EstimatorKind::MomentExplicit,
    EstimatorKind::Efficient,
    EstimatorKind::PseudoMle,
];

pub fn run_sample_estimator(
    kind: EstimatorKind,
    sample: &DiscreteSample,
    v: f64,
    tol: &Tolerances,
) -> Result<EstimateResult, CliError> {
    let run = match kind {
        EstimatorKind::MomentImplicit => moment_estimator_implicit(sample, v, tol),
        EstimatorKind::MomentExplicit => moment_estimator_explicit(sample, v),
        EstimatorKind::Efficient => efficient_estimator(sample, v, tol),
        EstimatorKind::PseudoMle => pseudo_mle(sample, v, tol),
        EstimatorKind::Oracle => {
            return Err(CliError::Validation(
                "estimators: 'oracle' needs the continuous path and cannot run on a sample"
                    .into(),
            ))
        }
    };
    run.map_err(|e| CliError::Runtime(e.to_string()))
}

fn estimate_cmd(
    input: &Path,
    v: f64,
    estimators: Option<&[String]>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    if !(v > 0.0 && v.is_finite()) {
        return Err(CliError::Validation("v must be positive and finite".into()));
    }
    let kinds: Vec<EstimatorKind> = match estimators {
        None => SAMPLE_ESTIMATORS.to_vec(),
        Some(names) => names
            .iter()
            .map(|name| {
                EstimatorKind::parse(name).ok_or_else(|| {
                    CliError::Validation(format!("estimators: unknown estimator '{name}'"))
                })
            })
            .collect::<Result<_, _>>()?,
    };
    let text = fs::read_to_string(input)
        .map_err(|e| CliError::Validation(format!("input: cannot read {}: {e}", input.display())))?;
    let sample = sample_io::from_csv(&text, v)?;
    let tol = Tolerances::default();
    let records: Vec<EstimateRecord> = kinds
        .iter()
        .map(|&kind| run_sample_estimator(kind, &sample, v, &tol).map(EstimateRecord::from))
        .collect::<Result<_, _>>()?;
    let mut text =
        serde_json::to_string_pretty(&records).map_err(|e| CliError::Runtime(e.to_string()))?;
    text.push('\n');
    write_output(out.as_deref(), &text)
}

/// Runs the replications, honoring the config's parallelism hint. The
/// records come back in replication order either way, so the reduced
/// summary is identical for every worker count.
pub fn run_experiment_with_hint(config: &ExperimentConfig) -> Result<Vec<ReplicationRecord>, CliError> {
    config.validate().map_err(validation)?;
    let records = match config.parallelism {
        Some(workers) if workers > 1 => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers as usize)
                .build()
                .map_err(|e| CliError::Runtime(format!("building thread pool: {e}")))?;
            pool.install(|| {
                (0..config.replications)
                    .into_par_iter()
                    .map(|r| run_replication(config, r))
                    .collect()
            })
        }
        _ => (0..config.replications)
            .map(|r| run_replication(config, r))
            .collect(),
    };
    Ok(records)
}

fn render_summary(summary: &MonteCarloSummary) -> Result<String, CliError> {
    let mut text =
        serde_json::to_string_pretty(summary).map_err(|e| CliError::Runtime(e.to_string()))?;
    text.push('\n');
    Ok(text)
}

fn render_raw_z(config: &ExperimentConfig, records: &[ReplicationRecord]) -> String {
    let mut text = String::from("estimator,replication,z\n");
    for (slot, kind) in config.estimators.iter().enumerate() {
        for record in records {
            let estimate = record.estimates[slot];
            let z = scaled_errors(&[estimate], config.lambda0, config.n, config.delta);
            if let Some(z) = z.first() {
                let _ = writeln!(text, "{},{},{z:.16e}", kind.name(), record.replication);
            }
        }
    }
    text
}

fn experiment_cmd(
    config_path: &Path,
    out: Option<PathBuf>,
    raw_z: Option<PathBuf>,
) -> Result<(), CliError> {
    let text = fs::read_to_string(config_path).map_err(|e| {
        CliError::Validation(format!("config: cannot read {}: {e}", config_path.display()))
    })?;
    let config: ExperimentConfig =
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("config: {e}")))?;
    let records = run_experiment_with_hint(&config)?;
    let summary = summarize_experiment(&config, &records).map_err(validation)?;
    if let Some(path) = raw_z {
        let csv = render_raw_z(&config, &records);
        fs::write(&path, csv)
            .map_err(|e| CliError::Runtime(format!("writing {}: {e}", path.display())))?;
    }
    write_output(out.as_deref(), &render_summary(&summary)?)
}

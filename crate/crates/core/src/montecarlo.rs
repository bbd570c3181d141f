//! Reproducible Monte Carlo experiments over the estimators.
//!
//! Replication `r` of an experiment owns the random substream
//! `(master_seed, r)`; per-replication results are reduced in replication
//! order, so a summary is bit-identical however the replications were
//! scheduled. The summary reports, per estimator, the bias of λ̂ and the
//! sample variance, skewness, and excess kurtosis of the scaled errors
//! `Z_r = √(nΔ)(λ̂_r − λ₀)` next to the asymptotic variance they should
//! approach: `6λ₀/5` for the two moment estimators, `λ₀` for the rest.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
#[cfg(not(feature = "std"))]
use crate::float::FloatExt;
use crate::estimators::{
    efficient_estimator, moment_estimator_explicit, moment_estimator_implicit, oracle_estimator,
    pseudo_mle, EstimateResult, EstimatorKind, Tolerances,
};
use crate::simulate::{replication_rng, simulate_path, ModelParams};

/// One experiment design point.
///
/// `parallelism` is an execution hint for external drivers; it never
/// affects results and is not echoed in summaries.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// True switching rate λ₀.
    pub lambda0: f64,
    /// Speed v (known to the estimators).
    pub v: f64,
    /// Grid spacing Δ.
    pub delta: f64,
    /// Number of grid increments n; the horizon is T = nΔ.
    pub n: u64,
    /// Number of replications R.
    pub replications: u32,
    /// Seed of the substream family.
    pub master_seed: u64,
    /// Which estimators to run.
    pub estimators: BTreeSet<EstimatorKind>,
    /// Worker-count hint for parallel drivers.
    #[serde(default, skip_serializing)]
    pub parallelism: Option<u32>,
}

impl ExperimentConfig {
    /// Validates the design point.
    pub fn validate(&self) -> Result<()> {
        if !(self.lambda0 > 0.0 && self.lambda0.is_finite()) {
            return Err(Error::InvalidConfig("lambda0 must be positive and finite"));
        }
        if !(self.v > 0.0 && self.v.is_finite()) {
            return Err(Error::InvalidConfig("v must be positive and finite"));
        }
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidConfig("delta must be positive and finite"));
        }
        if self.n == 0 {
            return Err(Error::InvalidConfig("n must be positive"));
        }
        if !(self.horizon() > 0.0 && self.horizon().is_finite()) {
            return Err(Error::InvalidConfig("n * delta must be positive and finite"));
        }
        if self.replications < 2 {
            return Err(Error::InvalidConfig("replications must be at least 2"));
        }
        if self.estimators.is_empty() {
            return Err(Error::InvalidConfig("estimators must not be empty"));
        }
        Ok(())
    }

    /// Observation horizon T = nΔ.
    pub fn horizon(&self) -> f64 {
        self.n as f64 * self.delta
    }
}

/// Estimates produced by one replication, ordered like `config.estimators`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReplicationRecord {
    /// Replication index r.
    pub replication: u32,
    /// One result per requested estimator.
    pub estimates: Vec<EstimateResult>,
}

/// Runs replication `r`: simulate one path on the substream
/// `(master_seed, r)`, sample the grid, and run every requested estimator.
pub fn run_replication(config: &ExperimentConfig, replication: u32) -> ReplicationRecord {
    let params =
        ModelParams::new(config.lambda0, config.v).expect("config validated before running");
    let tol = Tolerances::default();
    let mut rng = replication_rng(config.master_seed, u64::from(replication));
    let path = simulate_path(params, config.horizon(), &mut rng);
    let sample = path
        .sample_on_grid(config.delta, config.n as usize)
        .expect("grid matches the simulated horizon");

    let estimates = config
        .estimators
        .iter()
        .map(|kind| match kind {
            EstimatorKind::MomentImplicit => {
                moment_estimator_implicit(&sample, config.v, &tol)
            }
            EstimatorKind::MomentExplicit => moment_estimator_explicit(&sample, config.v),
            EstimatorKind::Efficient => efficient_estimator(&sample, config.v, &tol),
            EstimatorKind::PseudoMle => pseudo_mle(&sample, config.v, &tol),
            EstimatorKind::Oracle => Ok(oracle_estimator(&path)),
        })
        .map(|r| r.expect("simulated samples satisfy the estimator preconditions"))
        .collect();

    ReplicationRecord {
        replication,
        estimates,
    }
}

/// Scaled errors `Z_r = √(nΔ)(λ̂_r − λ₀)` of the converged, interior
/// estimates; boundary and non-converged results are skipped (the summary
/// counts them).
pub fn scaled_errors(
    estimates: &[EstimateResult],
    lambda0: f64,
    n: u64,
    delta: f64,
) -> Vec<f64> {
    let scale = (n as f64 * delta).sqrt();
    estimates
        .iter()
        .filter(|e| e.converged && !e.at_boundary)
        .map(|e| scale * (e.value - lambda0))
        .collect()
}

/// Moment statistics of a set of scaled errors.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SummaryStats {
    /// Sample mean.
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Standard error of the variance under approximate normality,
    /// `√(2/(R−1))·variance`.
    pub variance_stderr: f64,
    /// Sample skewness, zero when degenerate.
    pub skewness: f64,
    /// Sample excess kurtosis, zero when degenerate.
    pub excess_kurtosis: f64,
    /// True when the sample has zero variance, leaving the shape
    /// statistics undefined.
    pub degenerate: bool,
}

/// Mean, unbiased variance, skewness, and excess kurtosis of `z`, plus the
/// Gaussian-approximation standard error of the variance estimate.
pub fn summarize(z: &[f64], _theoretical_variance: f64) -> Result<SummaryStats> {
    let r = z.len();
    if r < 2 {
        return Err(Error::InvalidConfig(
            "summarizing needs at least two values",
        ));
    }
    let rf = r as f64;
    let mean = z.iter().sum::<f64>() / rf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &value in z {
        let d = value - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    let variance = m2 / (rf - 1.0);
    let variance_stderr = (2.0 / (rf - 1.0)).sqrt() * variance;
    let (skewness, excess_kurtosis, degenerate) = if m2 == 0.0 {
        (0.0, 0.0, true)
    } else {
        let m2n = m2 / rf;
        (
            (m3 / rf) / (m2n * m2n.sqrt()),
            (m4 / rf) / (m2n * m2n) - 3.0,
            false,
        )
    };
    Ok(SummaryStats {
        mean,
        variance,
        variance_stderr,
        skewness,
        excess_kurtosis,
        degenerate,
    })
}

/// Per-estimator block of a [`MonteCarloSummary`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSummary {
    /// Which estimator.
    pub kind: EstimatorKind,
    /// Mean of the included estimates λ̂.
    pub mean: f64,
    /// `mean − λ₀`.
    pub bias: f64,
    /// Sample variance of the scaled errors `√(nΔ)(λ̂ − λ₀)`.
    pub scaled_error_variance: f64,
    /// The limit the scaled-error variance should approach.
    pub theoretical_variance: f64,
    /// Standard error of the variance estimate.
    pub variance_stderr: f64,
    /// Sample skewness of the scaled errors.
    pub skewness: f64,
    /// Sample excess kurtosis of the scaled errors.
    pub excess_kurtosis: f64,
    /// Replications excluded as boundary or non-converged.
    pub boundary_count: u32,
    /// Replications entering the statistics.
    pub replications_used: u32,
    /// True when fewer than two replications survived exclusion.
    pub degenerate: bool,
}

/// Full outcome of an experiment: the design point and one summary per
/// estimator, in canonical estimator order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    /// The design point that produced the summaries.
    pub config: ExperimentConfig,
    /// Per-estimator statistics.
    pub estimators: Vec<EstimatorSummary>,
}

/// Asymptotic variance of the scaled error for each estimator.
pub fn theoretical_scaled_variance(kind: EstimatorKind, lambda0: f64) -> f64 {
    match kind {
        EstimatorKind::MomentImplicit | EstimatorKind::MomentExplicit => 1.2 * lambda0,
        EstimatorKind::Efficient | EstimatorKind::PseudoMle | EstimatorKind::Oracle => lambda0,
    }
}

/// Reduces per-replication records (in replication order) into the final
/// summary. The reduction is a fixed-order sequential fold, so the result
/// does not depend on how the records were produced.
pub fn summarize_experiment(
    config: &ExperimentConfig,
    records: &[ReplicationRecord],
) -> Result<MonteCarloSummary> {
    config.validate()?;
    if records.len() != config.replications as usize {
        return Err(Error::InvalidConfig(
            "record count does not match the configured replications",
        ));
    }
    let mut summaries = Vec::with_capacity(config.estimators.len());
    for (slot, kind) in config.estimators.iter().enumerate() {
        let mut values = Vec::with_capacity(records.len());
        let mut z = Vec::with_capacity(records.len());
        let scale = config.horizon().sqrt();
        for record in records {
            let estimate = record.estimates[slot];
            debug_assert_eq!(estimate.kind, *kind);
            if estimate.converged && !estimate.at_boundary {
                values.push(estimate.value);
                z.push(scale * (estimate.value - config.lambda0));
            }
        }
        let boundary_count = (records.len() - values.len()) as u32;
        let theoretical = theoretical_scaled_variance(*kind, config.lambda0);
        let summary = match summarize(&z, theoretical) {
            Ok(stats) => EstimatorSummary {
                kind: *kind,
                mean: values.iter().sum::<f64>() / values.len() as f64,
                bias: values.iter().sum::<f64>() / values.len() as f64 - config.lambda0,
                scaled_error_variance: stats.variance,
                theoretical_variance: theoretical,
                variance_stderr: stats.variance_stderr,
                skewness: stats.skewness,
                excess_kurtosis: stats.excess_kurtosis,
                boundary_count,
                replications_used: values.len() as u32,
                degenerate: stats.degenerate,
            },
            Err(_) => EstimatorSummary {
                kind: *kind,
                mean: 0.0,
                bias: 0.0,
                scaled_error_variance: 0.0,
                theoretical_variance: theoretical,
                variance_stderr: 0.0,
                skewness: 0.0,
                excess_kurtosis: 0.0,
                boundary_count,
                replications_used: values.len() as u32,
                degenerate: true,
            },
        };
        summaries.push(summary);
    }
    Ok(MonteCarloSummary {
        config: config.clone(),
        estimators: summaries,
    })
}

/// Runs the whole experiment sequentially. Parallel drivers can instead map
/// [`run_replication`] over `0..replications` themselves and feed the
/// ordered records to [`summarize_experiment`]; the summary is identical.
pub fn run_experiment(config: &ExperimentConfig) -> Result<MonteCarloSummary> {
    config.validate()?;
    let records: Vec<ReplicationRecord> = (0..config.replications)
        .map(|r| run_replication(config, r))
        .collect();
    summarize_experiment(config, &records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn base_config() -> ExperimentConfig {
        ExperimentConfig {
            lambda0: 1.0,
            v: 1.0,
            delta: 0.1,
            n: 100,
            replications: 8,
            master_seed: 99,
            estimators: BTreeSet::from([
                EstimatorKind::MomentExplicit,
                EstimatorKind::Efficient,
                EstimatorKind::Oracle,
            ]),
            parallelism: None,
        }
    }

    #[test]
    fn config_validation() {
        let mut c = base_config();
        assert!(c.validate().is_ok());
        c.replications = 1;
        assert!(c.validate().is_err());
        c = base_config();
        c.lambda0 = 0.0;
        assert!(c.validate().is_err());
        c = base_config();
        c.estimators.clear();
        assert!(c.validate().is_err());
        c = base_config();
        c.n = 0;
        assert!(c.validate().is_err());
    }

    #[test]
    fn scaled_errors_examples() {
        let mk = |value: f64, converged: bool, at_boundary: bool| EstimateResult {
            kind: EstimatorKind::MomentExplicit,
            value,
            converged,
            at_boundary,
            iterations: 0,
            objective_evals: 0,
        };
        // λ̂ = λ₀ → 0
        assert_eq!(scaled_errors(&[mk(1.0, true, false)], 1.0, 100, 0.01), vec![0.0]);
        // √(nΔ) = 1: value 1.3 → 0.3
        let z = scaled_errors(&[mk(1.3, true, false)], 1.0, 100, 0.01);
        assert!((z[0] - 0.3).abs() < 1e-15);
        // boundary and non-converged entries excluded
        let z = scaled_errors(
            &[mk(1.3, true, false), mk(0.0, true, true), mk(9.0, false, true)],
            1.0,
            100,
            0.01,
        );
        assert_eq!(z.len(), 1);
    }

    #[test]
    fn summarize_two_point_sample() {
        let stats = summarize(&[-1.0, 1.0], 1.0).unwrap();
        assert_eq!(stats.mean, 0.0);
        assert_eq!(stats.variance, 2.0);
        assert!(!stats.degenerate);
        assert!(summarize(&[0.5], 1.0).is_err());
    }

    #[test]
    fn summarize_constant_sample_is_degenerate() {
        let stats = summarize(&[3.0; 16], 1.0).unwrap();
        assert_eq!(stats.variance, 0.0);
        assert_eq!(stats.skewness, 0.0);
        assert_eq!(stats.excess_kurtosis, 0.0);
        assert!(stats.degenerate);
    }

    #[test]
    fn experiment_is_deterministic() {
        let config = base_config();
        let a = run_experiment(&config).unwrap();
        let b = run_experiment(&config).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn records_reduce_identically_in_any_production_order() {
        let config = base_config();
        let forward: Vec<_> = (0..config.replications)
            .map(|r| run_replication(&config, r))
            .collect();
        let mut backward: Vec<_> = (0..config.replications)
            .rev()
            .map(|r| run_replication(&config, r))
            .collect();
        backward.reverse();
        assert_eq!(
            summarize_experiment(&config, &forward).unwrap(),
            summarize_experiment(&config, &backward).unwrap()
        );
    }

    #[test]
    fn theoretical_targets() {
        assert_eq!(
            theoretical_scaled_variance(EstimatorKind::MomentExplicit, 2.0),
            2.4
        );
        assert_eq!(theoretical_scaled_variance(EstimatorKind::Efficient, 2.0), 2.0);
        assert_eq!(theoretical_scaled_variance(EstimatorKind::Oracle, 2.0), 2.0);
    }
}

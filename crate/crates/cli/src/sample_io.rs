//! CSV interchange format for sampled paths: header `t,x`, one row per
//! grid point, 17 significant digits so round-trips are bit-exact.

use std::fmt::Write as _;

use telegraph_core::DiscreteSample;

use crate::run::CliError;

/// Renders a sample as CSV.
pub fn to_csv(sample: &DiscreteSample) -> String {
    let mut out = String::with_capacity(40 * (sample.n() + 2));
    out.push_str("t,x\n");
    for (i, &x) in sample.positions().iter().enumerate() {
        let t = i as f64 * sample.delta();
        let _ = writeln!(out, "{t:.16e},{x:.16e}");
    }
    out
}

/// Parses the CSV sample format, inferring Δ and n from the grid.
///
/// The grid must start at t = 0 with x = 0 and be equidistant to 1e-9
/// relative; Δ is taken from the first step so a written file reproduces
/// the in-memory sample exactly.
pub fn from_csv(text: &str, v: f64) -> Result<DiscreteSample, CliError> {
    let mut lines = text.lines().enumerate();
    let header = lines
        .next()
        .ok_or_else(|| CliError::Validation("input: empty sample file".into()))?
        .1;
    if header.trim() != "t,x" {
        return Err(CliError::Validation(format!(
            "input: expected header 't,x', found '{}'",
            header.trim()
        )));
    }
    let mut times = Vec::new();
    let mut positions = Vec::new();
    for (lineno, line) in lines {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let (t_str, x_str) = line.split_once(',').ok_or_else(|| {
            CliError::Validation(format!("input line {}: expected 't,x' row", lineno + 1))
        })?;
        let parse = |name: &str, s: &str| -> Result<f64, CliError> {
            s.trim().parse::<f64>().map_err(|_| {
                CliError::Validation(format!(
                    "input line {}: malformed {name} value '{}'",
                    lineno + 1,
                    s.trim()
                ))
            })
        };
        times.push(parse("t", t_str)?);
        positions.push(parse("x", x_str)?);
    }
    if times.len() < 2 {
        return Err(CliError::Validation(
            "input: a sample needs at least two grid points".into(),
        ));
    }
    if times[0] != 0.0 {
        return Err(CliError::Validation("input: grid must start at t = 0".into()));
    }
    let delta = times[1] - times[0];
    if !(delta > 0.0) {
        return Err(CliError::Validation("input: grid times must increase".into()));
    }
    for i in 1..times.len() {
        let step = times[i] - times[i - 1];
        if (step - delta).abs() > 1e-9 * delta {
            return Err(CliError::Validation(format!(
                "input: grid is not equidistant at row {} (step {:e}, expected {:e})",
                i + 1,
                step,
                delta
            )));
        }
    }
    DiscreteSample::new(delta, v, positions)
        .map_err(|e| CliError::Validation(format!("input: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use telegraph_core::simulate::{replication_rng, simulate_path, ModelParams};

    #[test]
    fn round_trip_is_bit_exact() {
        let params = ModelParams::new(2.0, 0.7).unwrap();
        let mut rng = replication_rng(5, 1);
        let path = simulate_path(params, 3.0, &mut rng);
        let sample = path.sample_on_grid(0.003, 1000).unwrap();
        let csv = to_csv(&sample);
        let back = from_csv(&csv, 0.7).unwrap();
        assert_eq!(sample, back);
    }

    #[test]
    fn rejects_malformed_inputs() {
        assert!(from_csv("", 1.0).is_err());
        assert!(from_csv("a,b\n0,0\n", 1.0).is_err());
        assert!(from_csv("t,x\n0.0,0.0\n", 1.0).is_err());
        assert!(from_csv("t,x\n0.0,0.0\nnope,0.1\n", 1.0).is_err());
        assert!(from_csv("t,x\n0.1,0.0\n0.2,0.05\n", 1.0).is_err());
        // non-equidistant grid
        assert!(from_csv("t,x\n0.0,0.0\n0.1,0.05\n0.3,0.1\n", 1.0).is_err());
    }
}

//! Estimators of the switching rate λ from discretely observed positions,
//! plus the approximated transition density and likelihood they build on.
//!
//! Four estimators operate on a [`DiscreteSample`]:
//!
//! - the implicit moment estimator, inverting the mean squared increment
//!   through `f(λ)` by bisection;
//! - the explicit moment estimator `λ* = (3/(2nΔ)) Σ (1 − η²/(v²Δ²))`;
//! - the efficient estimator `λ̂ = −(1/Δ) log(1 − k/n)` built on the count
//!   of steps containing at least one switch;
//! - the pseudo-MLE, maximizing the product of approximated one-step
//!   transition densities by a grid scan plus golden-section refinement.
//!
//! A fifth, `N(T)/T`, needs the continuous path and serves as the
//! simulation-study oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
#[cfg(not(feature = "std"))]
use crate::float::FloatExt;
use crate::moments::increment_variance_fn;
use crate::search::{bisect_root, golden_max};
use crate::simulate::{DiscreteSample, TelegraphPath};
use crate::specfn::{bessel_i_scaled, BesselOrder};

/// Which estimator produced a result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorKind {
    /// Root of `mean(η²) = f(λ)`.
    MomentImplicit,
    /// Explicit first-order inversion of the same moment condition.
    MomentExplicit,
    /// Switch-count estimator with the log bias correction.
    Efficient,
    /// Maximizer of the approximated likelihood.
    PseudoMle,
    /// `N(T)/T` from the continuous path.
    Oracle,
}

impl EstimatorKind {
    /// All kinds, in canonical order.
    pub const ALL: [Self; 5] = [
        Self::MomentImplicit,
        Self::MomentExplicit,
        Self::Efficient,
        Self::PseudoMle,
        Self::Oracle,
    ];

    /// Stable lowercase name, matching the serialized form.
    pub fn name(self) -> &'static str {
        match self {
            Self::MomentImplicit => "moment_implicit",
            Self::MomentExplicit => "moment_explicit",
            Self::Efficient => "efficient",
            Self::PseudoMle => "pseudo_mle",
            Self::Oracle => "oracle",
        }
    }

    /// Parses the lowercase name back.
    pub fn parse(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == name)
    }
}

/// A point estimate with convergence diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimateResult {
    /// Which estimator ran.
    pub kind: EstimatorKind,
    /// The estimate λ̂ ≥ 0.
    pub value: f64,
    /// Whether the numerical search converged (always true for the
    /// closed-form estimators away from their boundaries).
    pub converged: bool,
    /// Whether the estimate sits at a boundary of its feasible range
    /// (all-flat or no-flat samples, failed brackets).
    pub at_boundary: bool,
    /// Iterations of the numerical search, zero for closed forms.
    pub iterations: u32,
    /// Objective evaluations, zero for closed forms.
    pub objective_evals: u32,
}

impl EstimateResult {
    fn closed_form(kind: EstimatorKind, value: f64, at_boundary: bool) -> Self {
        Self {
            kind,
            value,
            converged: true,
            at_boundary,
            iterations: 0,
            objective_evals: 0,
        }
    }
}

/// Numerical tolerances shared by the estimators.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Relative band for classifying `|η| = vΔ` (a flat step).
    pub flat_rel: f64,
    /// Absolute λ-tolerance of the bisection, scaled by `(1 + λ)`.
    pub root_abs: f64,
    /// Relative λ-tolerance of the likelihood maximizer.
    pub mle_rel: f64,
    /// Search bracket cap as a multiple of `1/Δ`. Beyond `λΔ ≈ 50` the flat
    /// probability is below `e^{-50}` and no sample can resolve larger λ.
    pub lambda_max_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            flat_rel: 1e-9,
            root_abs: 1e-10,
            mle_rel: 1e-8,
            lambda_max_factor: 50.0,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<()> {
        if !(self.flat_rel > 0.0 && self.flat_rel < 1e-3) {
            return Err(Error::InvalidConfig("flat_rel must lie in (0, 1e-3)"));
        }
        if !(self.root_abs > 0.0 && self.mle_rel > 0.0 && self.lambda_max_factor > 0.0) {
            return Err(Error::InvalidConfig("tolerances must be positive"));
        }
        Ok(())
    }
}

/// True when the increment is strictly inside the band `|η| < vΔ(1 − tol)`,
/// i.e. at least one switch occurred during the step. Errors when `|η|`
/// exceeds `vΔ` beyond tolerance, which no telegraph sample can produce.
pub fn classify_flat(eta: f64, v: f64, delta: f64, tol: &Tolerances) -> Result<bool> {
    let bound = v * delta;
    let a = eta.abs();
    if a > bound * (1.0 + tol.flat_rel) {
        return Err(Error::CorruptSample {
            index: 0,
            eta: a,
            bound,
        });
    }
    Ok(a < bound * (1.0 - tol.flat_rel))
}

fn classify_all(sample: &DiscreteSample, v: f64, tol: &Tolerances) -> Result<usize> {
    let delta = sample.delta();
    let mut switched = 0usize;
    for (i, eta) in sample.increments().into_iter().enumerate() {
        match classify_flat(eta, v, delta, tol) {
            Ok(true) => switched += 1,
            Ok(false) => {}
            Err(Error::CorruptSample { eta, bound, .. }) => {
                return Err(Error::CorruptSample {
                    index: i + 1,
                    eta,
                    bound,
                })
            }
            Err(e) => return Err(e),
        }
    }
    Ok(switched)
}

/// Implicit moment estimator: solves `f(λ) = mean(η²)` by bisection.
///
/// `f` decreases from `v²Δ²` to 0, so the root is bracketed whenever the
/// mean squared increment sits strictly inside that range; a mean at the
/// upper end means "no switches resolved" and returns λ = 0 flagged as a
/// boundary. If even the capped bracket (expanded up to three times) cannot
/// straddle the target, the capped value is returned unconverged.
pub fn moment_estimator_implicit(
    sample: &DiscreteSample,
    v: f64,
    tol: &Tolerances,
) -> Result<EstimateResult> {
    tol.validate()?;
    let kind = EstimatorKind::MomentImplicit;
    let delta = sample.delta();
    let eta = sample.increments();
    if eta.is_empty() {
        return Err(Error::EmptySample);
    }
    let mean_sq = eta.iter().map(|e| e * e).sum::<f64>() / eta.len() as f64;
    let cap = v * v * delta * delta;
    if mean_sq >= cap * (1.0 - tol.flat_rel) {
        return Ok(EstimateResult::closed_form(kind, 0.0, true));
    }

    let lo = tol.root_abs;
    let mut hi = tol.lambda_max_factor / delta;
    let mut evals = 1u32;
    let mut expansions = 0;
    while increment_variance_fn(hi, delta, v) > mean_sq {
        if expansions == 3 {
            return Ok(EstimateResult {
                kind,
                value: hi,
                converged: false,
                at_boundary: true,
                iterations: 0,
                objective_evals: evals,
            });
        }
        hi *= 10.0;
        expansions += 1;
        evals += 1;
    }

    let out = bisect_root(
        |lambda| increment_variance_fn(lambda, delta, v) - mean_sq,
        lo,
        hi,
        tol.root_abs,
    );
    Ok(EstimateResult {
        kind,
        value: out.x,
        converged: out.converged,
        at_boundary: false,
        iterations: out.iterations,
        objective_evals: evals + out.evaluations,
    })
}

/// Explicit moment estimator `λ* = (3/(2nΔ)) Σ (1 − η_i²/(v²Δ²))`.
///
/// Zero exactly when every step is flat; clamped at zero should grid
/// rounding push the sum microscopically negative.
pub fn moment_estimator_explicit(sample: &DiscreteSample, v: f64) -> Result<EstimateResult> {
    let delta = sample.delta();
    let eta = sample.increments();
    if eta.is_empty() {
        return Err(Error::EmptySample);
    }
    let cap = v * v * delta * delta;
    let sum: f64 = eta.iter().map(|e| 1.0 - e * e / cap).sum();
    let n = eta.len() as f64;
    let value = (1.5 / (n * delta) * sum).max(0.0);
    Ok(EstimateResult::closed_form(
        EstimatorKind::MomentExplicit,
        value,
        value == 0.0,
    ))
}

/// Efficient estimator: with `k` steps containing a switch,
/// `λ̃ = k/(nΔ)` and `λ̂ = −(1/Δ) log(1 − k/n)`.
///
/// `k = n` hits the log singularity and is returned unconverged at the
/// search cap; `k = 0` returns zero. Both are flagged as boundaries.
pub fn efficient_estimator(
    sample: &DiscreteSample,
    v: f64,
    tol: &Tolerances,
) -> Result<EstimateResult> {
    tol.validate()?;
    let kind = EstimatorKind::Efficient;
    let delta = sample.delta();
    let n = sample.n();
    let k = classify_all(sample, v, tol)?;
    if k == 0 {
        return Ok(EstimateResult::closed_form(kind, 0.0, true));
    }
    if k == n {
        return Ok(EstimateResult {
            kind,
            value: tol.lambda_max_factor / delta,
            converged: false,
            at_boundary: true,
            iterations: 0,
            objective_evals: 0,
        });
    }
    let value = -(1.0 - k as f64 / n as f64).ln() / delta;
    Ok(EstimateResult::closed_form(kind, value, false))
}

/// The approximated one-step transition law at displacement `dx`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransitionDensity {
    /// Absolutely continuous part evaluated at `dx`.
    pub density: f64,
    /// Mass of each of the two atoms at `dx = ±vΔ`, `e^{−λΔ}/2`.
    pub atom_mass: f64,
}

/// Continuous density and atom mass of the approximated transition law
///
/// ```text
/// p(dx) = (e^{−λΔ}/2v) { λ I₀(z) + vλΔ I₁(z)/√u },  z = (λ/v)√u,
/// u = v²Δ² − dx²,    atoms of e^{−λΔ}/2 at dx = ±vΔ,
/// ```
///
/// computed through `e^{−λΔ} I(z) = e^{−(λΔ−z)} [e^{−z} I(z)]` so the value
/// stays finite for `λΔ` up to 700.
pub fn transition_density(dx: f64, delta: f64, lambda: f64, v: f64) -> Result<TransitionDensity> {
    if !(delta > 0.0 && lambda > 0.0 && v > 0.0) {
        return Err(Error::Domain(
            "transition_density requires positive delta, lambda, v",
        ));
    }
    let bound = v * delta;
    if !(dx.abs() <= bound * (1.0 + 1e-12)) {
        return Err(Error::Domain("displacement exceeds v*delta"));
    }
    let u = (bound * bound - dx * dx).max(0.0);
    let z = lambda / v * u.sqrt();
    let exponent = z - lambda * delta; // ≤ 0
    let i0 = bessel_i_scaled(BesselOrder::ZERO, z).expect("z >= 0");
    // I₁(z)/√u = (λ/v) I₁(z)/z; the scaled ratio tends to 1/2 as z → 0
    let ratio = if z > 1e-8 {
        bessel_i_scaled(BesselOrder::ONE, z).expect("z >= 0") / z
    } else {
        0.5 * (-z).exp()
    };
    let density = exponent.exp() * (lambda * i0 + lambda * lambda * delta * ratio) / (2.0 * v);
    let atom_mass = 0.5 * (-lambda * delta).exp();
    Ok(TransitionDensity { density, atom_mass })
}

/// Log of the approximated likelihood at rate `lambda`: flat steps
/// contribute the atom mass, switched steps the continuous density at their
/// displacement.
pub fn log_likelihood(
    sample: &DiscreteSample,
    v: f64,
    lambda: f64,
    tol: &Tolerances,
) -> Result<f64> {
    if !(lambda > 0.0) {
        return Err(Error::Domain("log_likelihood requires lambda > 0"));
    }
    tol.validate()?;
    let delta = sample.delta();
    let log_atom = -lambda * delta - core::f64::consts::LN_2;
    let mut total = 0.0;
    for (i, eta) in sample.increments().into_iter().enumerate() {
        let switched = classify_flat(eta, v, delta, tol).map_err(|e| match e {
            Error::CorruptSample { eta, bound, .. } => Error::CorruptSample {
                index: i + 1,
                eta,
                bound,
            },
            other => other,
        })?;
        if switched {
            let td = transition_density(eta.clamp(-v * delta, v * delta), delta, lambda, v)?;
            total += td.density.ln();
        } else {
            total += log_atom;
        }
    }
    Ok(total)
}

/// Number of points in the coarse log-grid scan that seeds the maximizer.
const MLE_GRID_POINTS: usize = 64;

/// Pseudo-maximum-likelihood estimator: scans a 64-point log grid over
/// `(0, lambda_max_factor/Δ]`, then refines the best interior bracket by
/// golden section to `mle_rel` relative width. A best point at either grid
/// end is returned as an unconverged boundary.
pub fn pseudo_mle(sample: &DiscreteSample, v: f64, tol: &Tolerances) -> Result<EstimateResult> {
    tol.validate()?;
    let kind = EstimatorKind::PseudoMle;
    if sample.n() == 0 {
        return Err(Error::EmptySample);
    }
    let delta = sample.delta();
    let lambda_max = tol.lambda_max_factor / delta;
    let lambda_min = tol.root_abs;
    let log_lo = lambda_min.ln();
    let step = (lambda_max.ln() - log_lo) / (MLE_GRID_POINTS - 1) as f64;

    let mut best = (0usize, f64::NEG_INFINITY);
    let mut grid = [0.0; MLE_GRID_POINTS];
    for (i, slot) in grid.iter_mut().enumerate() {
        let lambda = (log_lo + step * i as f64).exp();
        *slot = lambda;
        let ll = log_likelihood(sample, v, lambda, tol)?;
        if ll > best.1 {
            best = (i, ll);
        }
    }
    let mut evals = MLE_GRID_POINTS as u32;

    if best.0 == 0 || best.0 == MLE_GRID_POINTS - 1 {
        return Ok(EstimateResult {
            kind,
            value: grid[best.0],
            converged: false,
            at_boundary: true,
            iterations: 0,
            objective_evals: evals,
        });
    }

    let lo = grid[best.0 - 1];
    let hi = grid[best.0 + 1];
    let out = golden_max(
        |lambda| log_likelihood(sample, v, lambda, tol).expect("bracket stays in domain"),
        lo,
        hi,
        tol.mle_rel,
    );
    evals += out.evaluations;
    Ok(EstimateResult {
        kind,
        value: out.x,
        converged: out.converged,
        at_boundary: false,
        iterations: out.iterations,
        objective_evals: evals,
    })
}

/// Continuous-observation oracle `N(T)/T`, available only in simulation
/// studies where the full path is known.
pub fn oracle_estimator(path: &TelegraphPath) -> EstimateResult {
    EstimateResult::closed_form(
        EstimatorKind::Oracle,
        path.event_count() as f64 / path.horizon(),
        false,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::ModelParams;
    use alloc::vec;

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    /// Sample with prescribed increments.
    fn sample_from_increments(delta: f64, v: f64, eta: &[f64]) -> DiscreteSample {
        let mut positions = vec![0.0];
        let mut acc = 0.0;
        for e in eta {
            acc += e;
            positions.push(acc);
        }
        DiscreteSample::new(delta, v, positions).unwrap()
    }

    #[test]
    fn classify_flat_basics() {
        let t = tol();
        assert!(!classify_flat(0.1, 1.0, 0.1, &t).unwrap());
        assert!(!classify_flat(-0.1, 1.0, 0.1, &t).unwrap());
        assert!(classify_flat(0.05, 1.0, 0.1, &t).unwrap());
        assert!(classify_flat(0.0, 1.0, 0.1, &t).unwrap());
        assert!(classify_flat(0.11, 1.0, 0.1, &t).is_err());
    }

    #[test]
    fn explicit_estimator_formula() {
        // n=2, Δ=0.1, v=1, η = [0.1, 0.05]: (3/(2·0.2))(0 + 0.75) = 5.625
        let sample = sample_from_increments(0.1, 1.0, &[0.1, 0.05]);
        let r = moment_estimator_explicit(&sample, 1.0).unwrap();
        assert!((r.value - 5.625).abs() < 1e-12);
        assert!(r.converged && !r.at_boundary);
    }

    #[test]
    fn explicit_estimator_all_flat_is_zero_boundary() {
        let sample = sample_from_increments(0.1, 1.0, &[0.1, -0.1, 0.1]);
        let r = moment_estimator_explicit(&sample, 1.0).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.at_boundary);
    }

    #[test]
    fn implicit_estimator_all_flat_is_zero_boundary() {
        let sample = sample_from_increments(0.1, 1.0, &[0.1, -0.1, 0.1]);
        let r = moment_estimator_implicit(&sample, 1.0, &tol()).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.at_boundary && r.converged);
    }

    #[test]
    fn implicit_estimator_inverts_forward_map() {
        // build increments whose mean square is exactly f(2.0)
        let (delta, v) = (0.01, 1.0);
        let target = increment_variance_fn(2.0, delta, v);
        let a = target.sqrt();
        let sample = sample_from_increments(delta, v, &[a, -a]);
        let r = moment_estimator_implicit(&sample, v, &tol()).unwrap();
        assert!(r.converged && !r.at_boundary);
        assert!((r.value - 2.0).abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn implicit_round_trip_across_rates() {
        let (delta, v) = (0.05, 1.3);
        let mut lambda0 = 0.1;
        while lambda0 <= 10.0 {
            let a = increment_variance_fn(lambda0, delta, v).sqrt();
            let sample = sample_from_increments(delta, v, &[a, -a, a, -a]);
            let r = moment_estimator_implicit(&sample, v, &tol()).unwrap();
            assert!(
                (r.value - lambda0).abs() < 1e-8 * (1.0 + lambda0),
                "lambda0 = {lambda0}, got {}",
                r.value
            );
            lambda0 *= 2.1;
        }
    }

    #[test]
    fn implicit_unresolvable_sample_caps_out() {
        // zero increments ask for λ = ∞; expansion gives up at the cap
        let sample = sample_from_increments(0.1, 1.0, &[0.0, 0.0]);
        let r = moment_estimator_implicit(&sample, 1.0, &tol()).unwrap();
        assert!(!r.converged && r.at_boundary);
        assert!(r.value >= 500.0);
    }

    #[test]
    fn efficient_estimator_examples() {
        let t = tol();
        // k = 0
        let flat = sample_from_increments(0.1, 1.0, &[0.1, -0.1]);
        let r = efficient_estimator(&flat, 1.0, &t).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.at_boundary && r.converged);

        // n = 10, k = 1: λ̂ = −10 ln 0.9
        let mut eta = [0.1; 10];
        eta[3] = 0.02;
        let one = sample_from_increments(0.1, 1.0, &eta);
        let r = efficient_estimator(&one, 1.0, &t).unwrap();
        assert!((r.value - 1.0536051565782630).abs() < 1e-15);
        assert!(r.converged && !r.at_boundary);

        // k = n hits the log singularity
        let all = sample_from_increments(0.1, 1.0, &[0.05, -0.03]);
        let r = efficient_estimator(&all, 1.0, &t).unwrap();
        assert!(!r.converged && r.at_boundary);
    }

    #[test]
    fn transition_density_atom_and_center() {
        let td = transition_density(0.0, 0.1, 1.0, 1.0).unwrap();
        // mpmath: e^{-0.1}/2 (I0(0.1) + I1(0.1)) and e^{-0.1}/2
        assert!((td.density - 0.47619968629555521072).abs() < 1e-14);
        assert!((td.atom_mass - 0.45241870901797978658).abs() < 1e-16);
    }

    #[test]
    fn transition_density_domain_and_edge() {
        assert!(transition_density(0.11, 0.1, 1.0, 1.0).is_err());
        // at the kinematic edge the I₁ term collapses to its limit
        let td = transition_density(0.1, 0.1, 1.0, 1.0).unwrap();
        let want = (-0.1f64).exp() / 2.0 * (1.0 + 1.0 * 0.1 / 2.0);
        assert!((td.density - want).abs() < 1e-14);
        // large λΔ stays finite
        let td = transition_density(0.0, 0.1, 6999.0, 1.0).unwrap();
        assert!(td.density.is_finite() && td.density > 0.0);
    }

    #[test]
    fn log_likelihood_all_flat_sample() {
        let sample = sample_from_increments(0.1, 1.0, &[0.1, -0.1, 0.1]);
        for lambda in [0.3, 1.0, 7.0] {
            let got = log_likelihood(&sample, 1.0, lambda, &tol()).unwrap();
            let want = 3.0 * (-lambda * 0.1 - core::f64::consts::LN_2);
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn log_likelihood_single_switched_increment() {
        let sample = sample_from_increments(0.1, 1.0, &[0.04]);
        let lambda = 2.5;
        let got = log_likelihood(&sample, 1.0, lambda, &tol()).unwrap();
        let want = transition_density(0.04, 0.1, lambda, 1.0)
            .unwrap()
            .density
            .ln();
        assert!((got - want).abs() < 1e-12);
    }

    #[test]
    fn log_likelihood_finite_on_grid() {
        let sample = sample_from_increments(0.1, 1.0, &[0.1, 0.04, -0.1, -0.07, 0.1]);
        let mut lambda = 1e-6;
        while lambda <= 50.0 {
            let ll = log_likelihood(&sample, 1.0, lambda, &tol()).unwrap();
            assert!(ll.is_finite(), "lambda = {lambda}");
            lambda *= 1.05;
        }
    }

    #[test]
    fn pseudo_mle_all_flat_is_low_boundary() {
        let sample = sample_from_increments(0.1, 1.0, &[0.1, -0.1, 0.1, 0.1]);
        let r = pseudo_mle(&sample, 1.0, &tol()).unwrap();
        assert!(r.at_boundary && !r.converged);
        assert!(r.value < 1e-9, "got {}", r.value);
    }

    #[test]
    fn pseudo_mle_recovers_interior_maximum() {
        // moderate mix of flat and switched steps has an interior argmax
        let sample = sample_from_increments(
            0.1,
            1.0,
            &[0.1, 0.04, 0.1, -0.1, 0.07, 0.1, 0.1, -0.02, 0.1, 0.1],
        );
        let r = pseudo_mle(&sample, 1.0, &tol()).unwrap();
        assert!(r.converged && !r.at_boundary);
        // maximizer beats its neighborhood
        let ll = |l: f64| log_likelihood(&sample, 1.0, l, &tol()).unwrap();
        let at = ll(r.value);
        assert!(at >= ll(r.value * 1.01) && at >= ll(r.value * 0.99));
        assert!(r.objective_evals > 64);
    }

    #[test]
    fn oracle_counts_events() {
        let params = ModelParams::new(1.0, 1.0).unwrap();
        let empty = TelegraphPath::new(params, 5.0, crate::simulate::Direction::Plus, vec![])
            .unwrap();
        assert_eq!(oracle_estimator(&empty).value, 0.0);

        let seven: Vec<f64> = (1..=7).map(|i| i as f64 * 0.4).collect();
        let path =
            TelegraphPath::new(params, 3.5, crate::simulate::Direction::Minus, seven).unwrap();
        assert_eq!(oracle_estimator(&path).value, 2.0);
    }

    #[test]
    fn estimator_kind_names_round_trip() {
        for kind in EstimatorKind::ALL {
            assert_eq!(EstimatorKind::parse(kind.name()), Some(kind));
        }
        assert_eq!(EstimatorKind::parse("bogus"), None);
    }
}

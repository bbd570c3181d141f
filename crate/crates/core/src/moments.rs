//! Closed-form moments of the telegraph position.
//!
//! The p-th moment of `X(t)` vanishes for odd p; for even p it equals
//!
//! ```text
//! E X(t)^p = (vt)^p (2/(λt))^{(p-1)/2} Γ((p+1)/2)
//!            [ e^{-λt} I_{(p+1)/2}(λt) + e^{-λt} I_{(p-1)/2}(λt) ]
//! ```
//!
//! assembled here entirely from scaled Bessel values so nothing overflows
//! for large `λt`. Dedicated second- and fourth-moment expressions and
//! their small-`t` expansions provide independent evaluation routes; the
//! increment-variance function `f(λ) = E η²` and its derivative feed the
//! moment-type estimators.

use crate::error::{Error, Result};
#[cfg(not(feature = "std"))]
use crate::float::FloatExt;
use crate::simulate::ModelParams;
use crate::specfn::{bessel_i_scaled, log_gamma, BesselOrder};

/// A validated moment request: order `p ≥ 1` at time `t > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentQuery {
    p: u32,
    t: f64,
    params: ModelParams,
}

impl MomentQuery {
    /// Builds a validated query.
    pub fn new(p: u32, t: f64, params: ModelParams) -> Result<Self> {
        if p == 0 {
            return Err(Error::Domain("moment order must be at least 1"));
        }
        if !(t > 0.0 && t.is_finite()) {
            return Err(Error::Domain("moment time must be positive and finite"));
        }
        Ok(Self { p, t, params })
    }

    /// Moment order p.
    pub fn p(self) -> u32 {
        self.p
    }

    /// Evaluation time t.
    pub fn t(self) -> f64 {
        self.t
    }

    /// Process parameters.
    pub fn params(self) -> ModelParams {
        self.params
    }
}

// Γ(3/2), Γ(5/2), Γ(7/2)
const GAMMA_3_2: f64 = 0.886_226_925_452_758_01;
const GAMMA_5_2: f64 = 1.329_340_388_179_137_02;
const GAMMA_7_2: f64 = 3.323_350_970_447_842_55;

/// `E X(t)^p`. Exactly zero for odd p; even p is assembled from scaled
/// Bessel values at orders `(p ± 1)/2`, with direct products for
/// p ∈ {2, 4, 6} and a log-space assembly for higher even orders.
pub fn moment_p(q: &MomentQuery) -> f64 {
    if q.p % 2 == 1 {
        return 0.0;
    }
    let lambda = q.params.lambda();
    let v = q.params.v();
    let u = lambda * q.t;
    let vt = v * q.t;
    let upper = bessel_i_scaled(BesselOrder::from_twice_nu(q.p + 1), u)
        .expect("u > 0 by construction");
    let lower = bessel_i_scaled(BesselOrder::from_twice_nu(q.p - 1), u)
        .expect("u > 0 by construction");
    let pair = upper + lower;
    match q.p {
        2 => vt * vt * (2.0 / u).sqrt() * GAMMA_3_2 * pair,
        4 => {
            let r = 2.0 / u;
            vt.powi(4) * r * r.sqrt() * GAMMA_5_2 * pair
        }
        6 => {
            let r = 2.0 / u;
            vt.powi(6) * r * r * r.sqrt() * GAMMA_7_2 * pair
        }
        p => {
            if pair == 0.0 {
                return 0.0;
            }
            let half_pm1 = f64::from(p - 1) / 2.0;
            let ln_gamma = log_gamma(f64::from(p + 1) / 2.0).expect("argument positive");
            (f64::from(p) * vt.ln() + half_pm1 * (2.0 / u).ln() + ln_gamma + pair.ln()).exp()
        }
    }
}

/// `E X²(t) = (v²/λ)(t − (1 − e^{−2λt})/(2λ))`.
///
/// Below `λt = 1e-4` the closed form cancels, so the small-`t` expansion
/// `v²t² − (2/3)v²λt³ + (1/3)v²λ²t⁴` takes over.
pub fn second_moment(t: f64, params: ModelParams) -> f64 {
    assert!(t > 0.0, "second_moment requires t > 0");
    let lambda = params.lambda();
    let v = params.v();
    let u = lambda * t;
    if u < 1e-4 {
        let vt = v * t;
        vt * vt * (1.0 - u * (2.0 / 3.0) + u * u / 3.0)
    } else {
        v * v / lambda * (t + (-2.0 * u).exp_m1() / (2.0 * lambda))
    }
}

/// `E X⁴(t) = 3(v/λ)⁴ e^{−λt}{λt(λt−3)cosh λt + (3 + λt(λt−1))sinh λt}`,
/// evaluated through `e^{−λt}cosh = (1+e^{−2λt})/2` and the sinh analogue.
///
/// Below `λt = 1e-3` the bracket cancels to `(λt)⁴/3` and the expansion
/// `v⁴t⁴ − (4/5)v⁴λt⁵ + (2/5)v⁴λ²t⁶` takes over.
pub fn fourth_moment(t: f64, params: ModelParams) -> f64 {
    assert!(t > 0.0, "fourth_moment requires t > 0");
    let lambda = params.lambda();
    let v = params.v();
    let u = lambda * t;
    if u < 1e-3 {
        let vt = v * t;
        vt.powi(4) * (1.0 - u * (4.0 / 5.0) + u * u * (2.0 / 5.0))
    } else {
        let e = (-2.0 * u).exp();
        let ch = 0.5 * (1.0 + e);
        let sh = 0.5 * (1.0 - e);
        3.0 * (v / lambda).powi(4) * (u * (u - 3.0) * ch + (3.0 + u * (u - 1.0)) * sh)
    }
}

/// Leading three terms of `E X(t)^p` for `t → 0`, for p ∈ {2, 4, 6}:
/// `v^p t^p − c₁ v^p λ t^{p+1} + c₂ v^p λ² t^{p+2}` with
/// `(c₁, c₂) = (2/3, 1/3), (4/5, 2/5), (6/7, 3/7)`.
pub fn moment_expansion(p: u32, t: f64, params: ModelParams) -> Result<f64> {
    let (c1, c2) = match p {
        2 => (2.0 / 3.0, 1.0 / 3.0),
        4 => (4.0 / 5.0, 2.0 / 5.0),
        6 => (6.0 / 7.0, 3.0 / 7.0),
        _ => return Err(Error::Domain("expansion only covers p in {2, 4, 6}")),
    };
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain("moment time must be positive and finite"));
    }
    let lambda = params.lambda();
    let vp = params.v().powi(p as i32);
    let tp = t.powi(p as i32);
    Ok(vp * tp * (1.0 - c1 * lambda * t + c2 * lambda * lambda * t * t))
}

/// Expected squared increment over a step of length Δ:
/// `f(λ) = (v²/λ)(Δ − (1 − e^{−2λΔ})/(2λ))`, strictly decreasing in λ with
/// `f(0+) = v²Δ²` and `f(∞) = 0`.
pub fn increment_variance_fn(lambda: f64, delta: f64, v: f64) -> f64 {
    assert!(
        lambda > 0.0 && delta > 0.0 && v > 0.0,
        "increment_variance_fn requires positive arguments"
    );
    second_moment(delta, ModelParams::new(lambda, v).expect("validated above"))
}

/// Derivative of [`increment_variance_fn`] in λ:
/// `f′(λ) = −v²(e^{−2Δλ}(1 + Δλ) + (Δλ − 1))/λ³`, always negative.
///
/// Below `Δλ = 1e-4` the bracket cancels to `(2/3)(Δλ)³`, so the series
/// `−v²Δ³(2/3 − (2/3)u + (2/5)u² − (8/45)u³)` takes over.
pub fn increment_variance_fn_deriv(lambda: f64, delta: f64, v: f64) -> f64 {
    assert!(
        lambda > 0.0 && delta > 0.0 && v > 0.0,
        "increment_variance_fn_deriv requires positive arguments"
    );
    let u = delta * lambda;
    if u < 1e-4 {
        let d3 = delta * delta * delta;
        -v * v * d3 * (2.0 / 3.0 - u * (2.0 / 3.0) + u * u * (2.0 / 5.0) - u * u * u * (8.0 / 45.0))
    } else {
        let bracket = (-2.0 * u).exp() * (1.0 + u) + (u - 1.0);
        -v * v * bracket / (lambda * lambda * lambda)
    }
}

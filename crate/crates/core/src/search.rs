//! One-dimensional bracketed solvers: bisection for monotone root finding
//! and golden-section search for unimodal maximization.

/// Result of a bracketed search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOutcome {
    /// Final abscissa.
    pub x: f64,
    /// Iterations performed.
    pub iterations: u32,
    /// Objective evaluations performed.
    pub evaluations: u32,
    /// Whether the requested width was reached.
    pub converged: bool,
}

const MAX_ITERATIONS: u32 = 200;

/// Bisection root of `g` on `[lo, hi]`, assuming `g(lo)` and `g(hi)` have
/// opposite signs. Stops when the bracket width drops below
/// `xtol_abs * (1 + |mid|)`.
pub fn bisect_root<F: Fn(f64) -> f64>(g: F, lo: f64, hi: f64, xtol_abs: f64) -> SearchOutcome {
    debug_assert!(lo < hi);
    let mut lo = lo;
    let mut hi = hi;
    let sign_lo = g(lo) >= 0.0;
    let mut evaluations = 1;
    let mut iterations = 0;
    let mut mid = 0.5 * (lo + hi);
    while hi - lo > xtol_abs * (1.0 + mid.abs()) {
        if iterations >= MAX_ITERATIONS {
            return SearchOutcome {
                x: mid,
                iterations,
                evaluations,
                converged: false,
            };
        }
        mid = 0.5 * (lo + hi);
        if (g(mid) >= 0.0) == sign_lo {
            lo = mid;
        } else {
            hi = mid;
        }
        evaluations += 1;
        iterations += 1;
    }
    SearchOutcome {
        x: 0.5 * (lo + hi),
        iterations,
        evaluations,
        converged: true,
    }
}

/// Inverse golden ratio, (√5 − 1)/2.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section maximizer of `f` on `[lo, hi]`, assuming a single interior
/// maximum. Stops when the bracket width drops below
/// `rel_tol * (1 + |mid|)`.
pub fn golden_max<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, rel_tol: f64) -> SearchOutcome {
    debug_assert!(lo < hi);
    let mut a = lo;
    let mut b = hi;
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    let mut evaluations = 2;
    let mut iterations = 0;
    loop {
        let mid = 0.5 * (a + b);
        if b - a <= rel_tol * (1.0 + mid.abs()) {
            return SearchOutcome {
                x: mid,
                iterations,
                evaluations,
                converged: true,
            };
        }
        if iterations >= MAX_ITERATIONS {
            return SearchOutcome {
                x: mid,
                iterations,
                evaluations,
                converged: false,
            };
        }
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
        evaluations += 1;
        iterations += 1;
    }
}

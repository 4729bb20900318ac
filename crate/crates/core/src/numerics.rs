//! Tolerance constants shared by validation and filtering code.

/// Allowed deviation of a probability vector's sum from one.
pub const PROB_SUM_TOL: f64 = 1e-12;

/// Default truncation accuracy: the horizon is the smallest `N` with `rho^N <= epsilon`.
pub const DEFAULT_EPSILON: f64 = 1e-6;

/// Default cap on the truncation horizon.
pub const DEFAULT_MAX_HORIZON: usize = 512;

/// Agreement required between two routes to the same information quantity.
pub const IDENTITY_TOL: f64 = 1e-10;

/// Upper bound on brute-force enumeration size in the oracle.
pub const ORACLE_BUDGET: u128 = 10_000_000;

/// Numerically stable `ln(sum(exp(xs)))`; returns `-inf` for an empty or all `-inf` slice.
pub fn log_sum_exp(xs: &[f64]) -> f64 {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return f64::NEG_INFINITY;
    }
    max + xs.iter().map(|x| (x - max).exp()).sum::<f64>().ln()
}

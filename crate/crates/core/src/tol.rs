//! Numerical tolerances shared across the crate.

/// Tolerance for closed-form metric identities.
pub const GEO_EXACT: f64 = 1e-9;

/// Tolerance for quantities that come out of a numerical minimization.
pub const GEO_NUMERIC: f64 = 1e-6;

/// Relative factor used by [`check`].
pub const CHECK_REL: f64 = 1e-6;

/// Pass/fail tolerance for an inequality whose sides have the given magnitude.
pub fn check(magnitude: f64) -> f64 {
    check_with(CHECK_REL, magnitude)
}

pub fn check_with(rel: f64, magnitude: f64) -> f64 {
    rel * (1.0 + magnitude.abs())
}

/// Float noise floor for sums of a handful of distances of size `scale`.
pub(crate) fn noise(scale: f64) -> f64 {
    1e-12 * (1.0 + scale.abs())
}

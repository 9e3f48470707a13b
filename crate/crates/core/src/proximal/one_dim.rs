use crate::error::{Error, Result};
use crate::tol;

/// A convex, non-decreasing, piecewise-linear function on `[0, T]` given by
/// its values at increasing knots `0 = s₀ < s₁ < … < s_m = T`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvexTable {
    knots: Vec<f64>,
    values: Vec<f64>,
}

impl ConvexTable {
    pub fn new(knots: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if knots.len() < 2 || knots.len() != values.len() {
            return Err(Error::InvalidArgument(format!(
                "need at least two knots with one value each, got {} knots and {} values",
                knots.len(),
                values.len()
            )));
        }
        if knots[0] != 0.0 {
            return Err(Error::InvalidArgument(format!(
                "first knot must be 0, got {}",
                knots[0]
            )));
        }
        if knots.windows(2).any(|w| !(w[1] > w[0]))
            || knots.iter().chain(&values).any(|v| !v.is_finite())
        {
            return Err(Error::InvalidArgument(
                "knots must be finite and strictly increasing".into(),
            ));
        }
        let table = Self { knots, values };
        let slopes: Vec<f64> = (0..table.pieces()).map(|i| table.slope(i)).collect();
        if slopes[0] < -tol::noise(slopes[0]) {
            return Err(Error::InvalidArgument(format!(
                "table must be non-decreasing, first slope is {}",
                slopes[0]
            )));
        }
        for (i, w) in slopes.windows(2).enumerate() {
            if w[1] < w[0] - tol::noise(w[0].abs().max(w[1].abs())) {
                return Err(Error::NonConvexTable {
                    index: i + 1,
                    prev: w[0],
                    next: w[1],
                });
            }
        }
        Ok(table)
    }

    pub fn end(&self) -> f64 {
        *self.knots.last().expect("validated")
    }

    fn pieces(&self) -> usize {
        self.knots.len() - 1
    }

    fn slope(&self, i: usize) -> f64 {
        (self.values[i + 1] - self.values[i]) / (self.knots[i + 1] - self.knots[i])
    }

    pub fn value(&self, s: f64) -> f64 {
        let s = s.clamp(0.0, self.end());
        let i = self.knots[1..]
            .partition_point(|&k| k < s)
            .min(self.pieces() - 1);
        self.values[i] + self.slope(i) * (s - self.knots[i])
    }
}

/// The unique minimizer of `f(s) + (t − s)²/(2τ)` over `[0, T]`.
///
/// On the piece `[a, b]` with slope `m` the minimizer is `t − τm` clamped to
/// the piece, so comparing the pieces gives the exact answer.
pub fn prox_1d(f: &ConvexTable, t: f64, tau: f64) -> Result<f64> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tau must be positive, got {tau}"
        )));
    }
    if !(0.0..=f.end()).contains(&t) {
        return Err(Error::OutOfRange {
            what: "prox_1d argument",
            value: t,
            lo: 0.0,
            hi: f.end(),
        });
    }
    let objective = |s: f64| f.value(s) + (t - s) * (t - s) / (2.0 * tau);
    let mut best = (0.0, objective(0.0));
    for i in 0..f.pieces() {
        let s = (t - tau * f.slope(i)).clamp(f.knots[i], f.knots[i + 1]);
        let v = objective(s);
        if v < best.1 {
            best = (s, v);
        }
    }
    Ok(best.0)
}

//! Pass/fail records for individual inequality instances.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::tol;

/// Which inequality a report evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Theorem {
    /// `d(p,y) ≤ d(p,x) − d(x,y) + 4√(2τLδ)/√(Kτ+1)`
    Conv,
    /// The `K > 0, τ > 1/K` refinement of [`Theorem::Conv`].
    ConvD,
    /// `d(x,y) ≥ (1 − 1/(Kτ))(f(x) − f(p))/L`
    StepDisplacement,
    /// `f(y) ≤ f(x) − (Kτ−1)²(f(x)−f(p))²/(2(KL)²τ³)`
    StepDecrease,
    /// First flow index inside the distance ball is below `d(p,x₀)ε⁻²`.
    IterationCount,
    /// `d²(p,x_N) ≤ 2Lτ/(Kτ−1)·(4√(2τLδ)/√(Kτ+1) + ε²)`
    IterationBall,
    /// First flow index inside the value ball is below `(f(x₀)−f(p))ε⁻²`.
    FValueCount,
    /// `f(x_N) ≤ f(p) + KLτ√(2τ)/(Kτ−1)·ε`
    FValueBall,
    /// `d²(p,x_N) ≤ 2Lτ√(2τ)/(Kτ−1)·ε`
    FValueDistance,
    Cont1,
    Cont1Plus,
    Cont2,
    Tripod,
    Projection,
    /// `d(x,γ) − 2δ ≤ (y|z)_x`
    GromovLower,
    /// `(y|z)_x ≤ d(x,γ)`
    GromovUpper,
    APriori,
}

impl Theorem {
    pub fn name(&self) -> &'static str {
        match self {
            Theorem::Conv => "conv",
            Theorem::ConvD => "conv_d",
            Theorem::StepDisplacement => "step_displacement",
            Theorem::StepDecrease => "step_decrease",
            Theorem::IterationCount => "iteration_count",
            Theorem::IterationBall => "iteration_ball",
            Theorem::FValueCount => "fvalue_count",
            Theorem::FValueBall => "fvalue_ball",
            Theorem::FValueDistance => "fvalue_distance",
            Theorem::Cont1 => "cont1",
            Theorem::Cont1Plus => "cont1_plus",
            Theorem::Cont2 => "cont2",
            Theorem::Tripod => "tripod",
            Theorem::Projection => "projection",
            Theorem::GromovLower => "gromov_lower",
            Theorem::GromovUpper => "gromov_upper",
            Theorem::APriori => "a_priori",
        }
    }
}

/// One evaluated inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub inputs: Value,
    pub lhs: f64,
    pub rhs: f64,
    pub slack: f64,
    pub pass: bool,
    pub delta_check: f64,
    pub epsilon_cvx: f64,
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub flags: Vec<String>,
}

impl TheoremReport {
    pub fn is_skipped(&self) -> bool {
        self.skipped.is_some()
    }

    pub fn failed(&self) -> bool {
        !self.pass && self.skipped.is_none()
    }

    pub fn status(&self) -> &'static str {
        match (self.is_skipped(), self.pass) {
            (true, _) => "skipped",
            (false, true) => "pass",
            (false, false) => "fail",
        }
    }
}

/// Shared parameters of a batch of checks.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CheckContext {
    /// The hyperbolicity constant fed to the bounds.
    pub delta: f64,
    /// Audited convexity violation of the objective, 0 when exact.
    pub epsilon_cvx: f64,
    /// Diameter scale used by the approximate-convexity allowance.
    pub diameter: f64,
    pub seed: u64,
    /// Relative tolerance factor, see [`tol::check_with`].
    pub tol_rel: f64,
}

impl Default for CheckContext {
    fn default() -> Self {
        Self {
            delta: 0.0,
            epsilon_cvx: 0.0,
            diameter: 0.0,
            seed: 0,
            tol_rel: tol::CHECK_REL,
        }
    }
}

impl CheckContext {
    pub fn with_delta(delta: f64) -> Self {
        Self {
            delta,
            ..Self::default()
        }
    }

    pub fn tolerance(&self, magnitude: f64) -> f64 {
        tol::check_with(self.tol_rel, magnitude)
    }

    /// Extra right-hand side granted when the objective is only approximately
    /// convex: `ε_cvx · (2τ + diameter) / min(1, L)`.
    pub fn convexity_allowance(&self, tau: f64, lipschitz: f64) -> f64 {
        if self.epsilon_cvx <= 0.0 {
            0.0
        } else {
            self.epsilon_cvx * (2.0 * tau + self.diameter) / lipschitz.min(1.0)
        }
    }

    pub fn report(&self, theorem: Theorem, inputs: Value, lhs: f64, rhs: f64) -> TheoremReport {
        let slack = rhs - lhs;
        let pass = slack >= -self.tolerance(lhs.abs().max(rhs.abs()));
        TheoremReport {
            theorem,
            inputs,
            lhs,
            rhs,
            slack,
            pass,
            delta_check: self.delta,
            epsilon_cvx: self.epsilon_cvx,
            seed: self.seed,
            skipped: None,
            flags: Vec::new(),
        }
    }

    /// Like [`Self::report`], flagging the allowance when one was added.
    pub(crate) fn report_with_allowance(
        &self,
        theorem: Theorem,
        inputs: Value,
        lhs: f64,
        rhs: f64,
        allowance: f64,
    ) -> TheoremReport {
        let mut r = self.report(theorem, inputs, lhs, rhs + allowance);
        if allowance > 0.0 {
            r.flags.push("approximate-convexity".into());
        }
        r
    }

    pub fn skipped(
        &self,
        theorem: Theorem,
        inputs: Value,
        reason: impl Into<String>,
    ) -> TheoremReport {
        TheoremReport {
            theorem,
            inputs,
            lhs: 0.0,
            rhs: 0.0,
            slack: 0.0,
            pass: true,
            delta_check: self.delta,
            epsilon_cvx: self.epsilon_cvx,
            seed: self.seed,
            skipped: Some(reason.into()),
            flags: Vec::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn tolerance_scales_with_magnitude() {
        let ctx = CheckContext::default();
        assert!(ctx.report(Theorem::Conv, json!({}), 1000.0005, 1000.0).pass);
        assert!(!ctx.report(Theorem::Conv, json!({}), 1.01, 1.0).pass);
    }

    #[test]
    fn serializes_schema_fields() {
        let ctx = CheckContext::with_delta(0.5);
        let r = ctx.report(Theorem::ConvD, json!({"tau": 1.0}), 1.0, 2.0);
        let v = serde_json::to_value(&r).unwrap();
        for key in [
            "theorem",
            "inputs",
            "lhs",
            "rhs",
            "slack",
            "pass",
            "delta_check",
            "epsilon_cvx",
            "seed",
        ] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert_eq!(v["theorem"], "conv_d");
        let s = ctx.skipped(Theorem::ConvD, json!({}), "requires K>0");
        assert!(!s.failed());
        assert_eq!(s.status(), "skipped");
    }
}

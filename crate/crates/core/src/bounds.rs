//! Both sides of the tendency, step, iteration and contraction estimates on
//! concrete instances.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::metric::gromov_product;
use crate::objective::Objective;
use crate::proximal::{FlowTrace, ProxResult};
use crate::report::{CheckContext, Theorem, TheoremReport};
use crate::spaces::Space;
use crate::tol;

/// The constants of the contraction estimate for close-to-minimizer pairs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundConstants {
    #[serde(rename = "K")]
    pub k: f64,
    #[serde(rename = "L")]
    pub l: f64,
    #[serde(rename = "D")]
    pub d: f64,
    pub tau: f64,
    pub delta: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c: f64,
}

/// `C₁ = 2√(2τLδ)/√(Kτ+1) + 2δ`, `C₂ = √(2τ/(Kτ+1)·(L + D/τ)·C₁)`,
/// `C₃ = √(16τ/(Kτ+1)·(L + (D+2δ)/τ)·δ)` and `C = 12δ + 10C₁ + 6C₂ + C₃`.
pub fn constants(k: f64, l: f64, d: f64, tau: f64, delta: f64) -> Result<BoundConstants> {
    for (name, v, strict) in [
        ("K", k, false),
        ("L", l, true),
        ("D", d, false),
        ("tau", tau, true),
        ("delta", delta, false),
    ] {
        let ok = v.is_finite() && if strict { v > 0.0 } else { v >= 0.0 };
        if !ok {
            return Err(Error::InvalidArgument(format!(
                "{name} = {v} is out of range"
            )));
        }
    }
    let kt1 = k * tau + 1.0;
    let c1 = 2.0 * (2.0 * tau * l * delta).sqrt() / kt1.sqrt() + 2.0 * delta;
    let c2 = (2.0 * tau / kt1 * (l + d / tau) * c1).sqrt();
    let c3 = (16.0 * tau / kt1 * (l + (d + 2.0 * delta) / tau) * delta).sqrt();
    Ok(BoundConstants {
        k,
        l,
        d,
        tau,
        delta,
        c1,
        c2,
        c3,
        c: 12.0 * delta + 10.0 * c1 + 6.0 * c2 + c3,
    })
}

/// `4√(2τLδ)/√(Kτ+1)`
pub fn tendency_term(k: f64, l: f64, tau: f64, delta: f64) -> f64 {
    4.0 * (2.0 * tau * l * delta).sqrt() / (k * tau + 1.0).sqrt()
}

fn refined(k: f64, tau: f64) -> bool {
    k > 0.0 && k * tau > 1.0
}

/// Squared radius `2Lτ/(Kτ−1)·(4√(2τLδ)/√(Kτ+1) + ε²)` of the distance
/// ball reached by the flow, defined for `K > 0`, `τ > 1/K`.
pub fn iteration_ball(k: f64, l: f64, tau: f64, delta: f64, epsilon: f64) -> Option<f64> {
    refined(k, tau).then(|| {
        2.0 * l * tau / (k * tau - 1.0) * (tendency_term(k, l, tau, delta) + epsilon * epsilon)
    })
}

/// Excess `f(x) − f(p)` above which `d(p,·)` strictly decreases under one
/// prox step: `4KLτ√(2τLδ)/((Kτ−1)√(Kτ+1))`.
pub fn decrease_threshold(k: f64, l: f64, tau: f64, delta: f64) -> Option<f64> {
    refined(k, tau).then(|| k * l * tau * tendency_term(k, l, tau, delta) / (k * tau - 1.0))
}

fn base_inputs(space: &Space, f: &Objective, tau: f64, ctx: &CheckContext) -> Value {
    json!({
        "space": space.kind(),
        "objective": f.descriptor(space),
        "K": f.k(),
        "L": f.l(),
        "tau": tau,
        "delta": ctx.delta,
    })
}

fn flag_regime(mut r: TheoremReport, f: &Objective, tau: f64, ctx: &CheckContext) -> TheoremReport {
    if 2.0 * tau * f.l() < ctx.delta {
        r.flags.push("small-step".into());
    }
    r
}

/// `d(p,y) ≤ d(p,x) − d(x,y) + 4√(2τLδ)/√(Kτ+1)`.
pub fn check_conv(
    space: &Space,
    f: &Objective,
    step: &ProxResult,
    tau: f64,
    ctx: &CheckContext,
) -> TheoremReport {
    let p = f.minimizer();
    let (x, y) = (step.x, step.y);
    let mut inputs = base_inputs(space, f, tau, ctx);
    inputs["x"] = json!(space.describe(&x));
    inputs["y"] = json!(space.describe(&y));
    let lhs = space.dist(&p, &y);
    let rhs = space.dist(&p, &x) - space.dist(&x, &y) + tendency_term(f.k(), f.l(), tau, ctx.delta);
    let allowance = ctx.convexity_allowance(tau, f.l());
    flag_regime(
        ctx.report_with_allowance(Theorem::Conv, inputs, lhs, rhs, allowance),
        f,
        tau,
        ctx,
    )
}

/// `d(p,y) ≤ d(p,x) − (1 − 1/(Kτ))(f(x) − f(p))/L + 4√(2τLδ)/√(Kτ+1)`,
/// for `K > 0` and `τ > 1/K`.
pub fn check_conv_d(
    space: &Space,
    f: &Objective,
    step: &ProxResult,
    tau: f64,
    ctx: &CheckContext,
) -> TheoremReport {
    let p = f.minimizer();
    let (x, y) = (step.x, step.y);
    let (k, l) = (f.k(), f.l());
    let mut inputs = base_inputs(space, f, tau, ctx);
    inputs["x"] = json!(space.describe(&x));
    inputs["y"] = json!(space.describe(&y));
    if !refined(k, tau) {
        return ctx.skipped(Theorem::ConvD, inputs, "requires K>0 and tau>1/K");
    }
    let excess = f.eval(space, &x) - f.min_value();
    let threshold = decrease_threshold(k, l, tau, ctx.delta).expect("refined");
    inputs["decrease_threshold"] = json!(threshold);
    inputs["above_threshold"] = json!(excess > threshold);
    let lhs = space.dist(&p, &y);
    let rhs = space.dist(&p, &x) - (1.0 - 1.0 / (k * tau)) * excess / l
        + tendency_term(k, l, tau, ctx.delta);
    let allowance = ctx.convexity_allowance(tau, l);
    flag_regime(
        ctx.report_with_allowance(Theorem::ConvD, inputs, lhs, rhs, allowance),
        f,
        tau,
        ctx,
    )
}

/// `(1 − 1/(Kτ))(f(x) − f(p))/L ≤ d(x,y)` and
/// `f(y) ≤ f(x) − (Kτ−1)²(f(x) − f(p))²/(2(KL)²τ³)`, for `K > 0`, `τ > 1/K`.
pub fn check_step_bounds(
    space: &Space,
    f: &Objective,
    step: &ProxResult,
    tau: f64,
    ctx: &CheckContext,
) -> [TheoremReport; 2] {
    let (x, y) = (step.x, step.y);
    let (k, l) = (f.k(), f.l());
    let mut inputs = base_inputs(space, f, tau, ctx);
    inputs["x"] = json!(space.describe(&x));
    inputs["y"] = json!(space.describe(&y));
    if !refined(k, tau) {
        let why = "requires K>0 and tau>1/K";
        return [
            ctx.skipped(Theorem::StepDisplacement, inputs.clone(), why),
            ctx.skipped(Theorem::StepDecrease, inputs, why),
        ];
    }
    let fx = f.eval(space, &x);
    let excess = fx - f.min_value();
    let allowance = ctx.convexity_allowance(tau, l);
    let displacement = ctx.report_with_allowance(
        Theorem::StepDisplacement,
        inputs.clone(),
        (1.0 - 1.0 / (k * tau)) * excess / l,
        space.dist(&x, &y),
        allowance,
    );
    let kt = k * tau - 1.0;
    let decrease = ctx.report_with_allowance(
        Theorem::StepDecrease,
        inputs,
        f.eval(space, &y),
        fx - kt * kt * excess * excess / (2.0 * (k * l).powi(2) * tau.powi(3)),
        allowance * l,
    );
    [displacement, decrease]
}

/// A "first index below a budget" check: passes when `n` is 0 (the start
/// is already inside) or `n < budget`.
fn count_report(
    ctx: &CheckContext,
    theorem: Theorem,
    inputs: Value,
    n: Option<usize>,
    len: usize,
    budget: f64,
) -> TheoremReport {
    match n {
        Some(n) => {
            let mut r = ctx.report(theorem, inputs, n as f64, budget);
            r.pass = n == 0 || (n as f64) < budget;
            r
        }
        None => {
            let mut r = ctx.report(theorem, inputs, len as f64, budget);
            r.pass = false;
            r.flags.push("ball-not-reached".into());
            r
        }
    }
}

/// The iteration-count estimates on a flow trace from `x₀ = trace[0]`:
///
/// * the first `N` with `d²(p,x_N) ≤ 2Lτ/(Kτ−1)·(4√(2τLδ)/√(Kτ+1) + ε²)`
///   satisfies `N < d(p,x₀)ε⁻²` (count and ball reports),
/// * the first `N'` with `f(x_N') ≤ f(p) + KLτ√(2τ)/(Kτ−1)·ε` satisfies
///   `N' < (f(x₀) − f(p))ε⁻²`, and `d²(p,x_N') ≤ 2Lτ√(2τ)/(Kτ−1)·ε`.
pub fn check_iteration(
    space: &Space,
    f: &Objective,
    trace: &FlowTrace,
    epsilon: f64,
    ctx: &CheckContext,
) -> Vec<TheoremReport> {
    let tau = trace.tau;
    let (k, l) = (f.k(), f.l());
    let mut inputs = base_inputs(space, f, tau, ctx);
    let x0 = &trace.iterates[0];
    inputs["x0"] = json!(space.describe(&x0.x));
    inputs["epsilon"] = json!(epsilon);
    inputs["trace_length"] = json!(trace.iterates.len());
    inputs["stop_reason"] = json!(trace.stop_reason);
    let theorems = [
        Theorem::IterationCount,
        Theorem::IterationBall,
        Theorem::FValueCount,
        Theorem::FValueBall,
        Theorem::FValueDistance,
    ];
    if !refined(k, tau) {
        return theorems
            .iter()
            .map(|&t| ctx.skipped(t, inputs.clone(), "requires K>0 and tau>1/K"))
            .collect();
    }
    let allowance = ctx.convexity_allowance(tau, l);
    let eps2 = epsilon * epsilon;
    let len = trace.iterates.len();

    let ball = iteration_ball(k, l, tau, ctx.delta, epsilon).expect("refined");
    let n = trace
        .iterates
        .iter()
        .position(|s| s.dist_to_p * s.dist_to_p <= ball + ctx.tolerance(ball));
    let mut dist_inputs = inputs.clone();
    dist_inputs["N"] = json!(n);
    let count = count_report(
        ctx,
        Theorem::IterationCount,
        dist_inputs.clone(),
        n,
        len,
        x0.dist_to_p / eps2,
    );
    let at_n = &trace.iterates[n.unwrap_or(len - 1)];
    let ball_report = ctx.report_with_allowance(
        Theorem::IterationBall,
        dist_inputs,
        at_n.dist_to_p * at_n.dist_to_p,
        ball,
        allowance * 2.0 * l * tau / (k * tau - 1.0),
    );

    let gap = k * l * tau * (2.0 * tau).sqrt() / (k * tau - 1.0) * epsilon;
    let fp = f.min_value();
    let n2 = trace
        .iterates
        .iter()
        .position(|s| s.f_value <= fp + gap + ctx.tolerance(fp + gap));
    let mut value_inputs = inputs;
    value_inputs["N"] = json!(n2);
    let value_count = count_report(
        ctx,
        Theorem::FValueCount,
        value_inputs.clone(),
        n2,
        len,
        (x0.f_value - fp) / eps2,
    );
    let at_n2 = &trace.iterates[n2.unwrap_or(len - 1)];
    let value_ball = ctx.report_with_allowance(
        Theorem::FValueBall,
        value_inputs.clone(),
        at_n2.f_value,
        fp + gap,
        allowance * l,
    );
    let value_distance = ctx.report_with_allowance(
        Theorem::FValueDistance,
        value_inputs,
        at_n2.dist_to_p * at_n2.dist_to_p,
        2.0 * l * tau * (2.0 * tau).sqrt() / (k * tau - 1.0) * epsilon,
        allowance * 2.0 * l / k.max(f64::MIN_POSITIVE),
    );
    vec![count, ball_report, value_count, value_ball, value_distance]
}

/// The contraction estimates for two prox steps.
///
/// After relabelling so that `d(p,y₁) ≤ d(p,y₂)`, case (i)
/// `d(p,y₁) ≥ (x₁|x₂)_p` gives `cont1` (and `cont1_plus` when `K > 0`,
/// `τ > 1/K`); case (ii) gives `cont2` with the constant `C`. Near-ties are
/// checked under both cases.
pub fn check_contraction(
    space: &Space,
    f: &Objective,
    step1: &ProxResult,
    step2: &ProxResult,
    tau: f64,
    ctx: &CheckContext,
) -> Result<Vec<TheoremReport>> {
    let p = f.minimizer();
    let (k, l, delta) = (f.k(), f.l(), ctx.delta);
    let (s1, s2) = if space.dist(&p, &step1.y) <= space.dist(&p, &step2.y) {
        (step1, step2)
    } else {
        (step2, step1)
    };
    let (x1, x2, y1, y2) = (s1.x, s2.x, s1.y, s2.y);
    let g = gromov_product(space, &p, &x1, &x2)?;
    let reach = space.dist(&p, &y1);
    let tie = tol::GEO_NUMERIC * (1.0 + g);
    let case_i = reach >= g - tie;
    let case_ii = reach < g + tie;

    let d12 = space.dist(&x1, &x2);
    let lhs = space.dist(&y1, &y2);
    let hyperbolic = 2.0 * tendency_term(k, l, tau, delta) + 12.0 * delta;
    let allowance = 2.0 * ctx.convexity_allowance(tau, l);
    let mut inputs = base_inputs(space, f, tau, ctx);
    inputs["x1"] = json!(space.describe(&x1));
    inputs["x2"] = json!(space.describe(&x2));
    inputs["y1"] = json!(space.describe(&y1));
    inputs["y2"] = json!(space.describe(&y2));
    inputs["gromov_x1x2_p"] = json!(g);
    inputs["d_p_y1"] = json!(reach);

    let mut out = Vec::new();
    if case_i {
        let mut case_inputs = inputs.clone();
        case_inputs["case"] = json!("i");
        let rhs = d12 - space.dist(&x1, &y1) - space.dist(&x2, &y2) + hyperbolic;
        out.push(ctx.report_with_allowance(
            Theorem::Cont1,
            case_inputs.clone(),
            lhs,
            rhs,
            allowance,
        ));
        if refined(k, tau) {
            let excess = f.eval(space, &x1) + f.eval(space, &x2) - 2.0 * f.min_value();
            let rhs = d12 - (1.0 - 1.0 / (k * tau)) * excess / l + hyperbolic;
            out.push(ctx.report_with_allowance(
                Theorem::Cont1Plus,
                case_inputs,
                lhs,
                rhs,
                allowance,
            ));
        }
    }
    if case_ii {
        let big_d = space.dist(&p, &x1).max(space.dist(&p, &x2));
        let c = constants(k, l, big_d, tau, delta)?;
        let mut case_inputs = inputs;
        case_inputs["case"] = json!("ii");
        case_inputs["constants"] = json!(c);
        let rhs = d12 - gromov_product(space, &x1, &p, &x2)? + c.c;
        out.push(ctx.report_with_allowance(Theorem::Cont2, case_inputs, lhs, rhs, allowance));
    }
    Ok(out
        .into_iter()
        .map(|r| flag_regime(r, f, tau, ctx))
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::Point;
    use crate::proximal::{flow, prox, FlowParams, ProxConfig};
    use crate::spaces::{build_path, build_tripod};

    #[test]
    fn constants_examples() {
        let z = constants(1.0, 1.0, 3.0, 2.0, 0.0).unwrap();
        assert_eq!((z.c1, z.c2, z.c3, z.c), (0.0, 0.0, 0.0, 0.0));
        let a = constants(0.0, 1.0, 0.0, 1.0, 1.0).unwrap();
        assert!((a.c1 - (2.0 * 2f64.sqrt() + 2.0)).abs() < 1e-12);
        let b = constants(1.0, 1.0, 3.0, 2.0, 0.01).unwrap();
        let c1 = 2.0 * 0.04f64.sqrt() / 3f64.sqrt() + 0.02;
        assert!((b.c1 - c1).abs() < 1e-12 && (b.c1 - 0.25094).abs() < 1e-5);
        let c2 = ((4.0 / 3.0) * (1.0 + 1.5) * c1).sqrt();
        let c3 = ((32.0_f64 / 3.0) * (1.0 + 3.02 / 2.0) * 0.01).sqrt();
        assert!((b.c2 - c2).abs() < 1e-12 && (b.c3 - c3).abs() < 1e-12);
        assert!((b.c - (0.12 + 10.0 * c1 + 6.0 * c2 + c3)).abs() < 1e-12);
        assert!(constants(-1.0, 1.0, 0.0, 1.0, 0.0).is_err());
        assert!(constants(0.0, 0.0, 0.0, 1.0, 0.0).is_err());
    }

    #[test]
    fn conv_on_a_segment_is_tight() {
        let path = build_path(&[10.0]).unwrap();
        let s = path.space();
        let f = Objective::distance(s, Point::Vertex(0), 1.0).unwrap();
        let x = path.graph().locate(0, 3.0);
        let step = prox(s, &f, &x, &ProxConfig::new(1.0)).unwrap();
        let r = check_conv(s, &f, &step, 1.0, &CheckContext::default());
        assert!(r.pass && (r.lhs - 2.0).abs() < 1e-9 && r.slack.abs() < 1e-9);
        let at_p = prox(s, &f, &Point::Vertex(0), &ProxConfig::new(1.0)).unwrap();
        let r = check_conv(s, &f, &at_p, 1.0, &CheckContext::default());
        assert!(r.pass && r.lhs == 0.0 && r.rhs == 0.0);
    }

    #[test]
    fn conv_d_and_step_bounds_on_a_segment() {
        let path = build_path(&[10.0]).unwrap();
        let s = path.space();
        let f = Objective::squared_distance(s, Point::Vertex(0), 1.0, 10.0).unwrap();
        let x = path.graph().locate(0, 3.0);
        let step = prox(s, &f, &x, &ProxConfig::new(2.0)).unwrap();
        let ctx = CheckContext::default();
        let r = check_conv_d(s, &f, &step, 2.0, &ctx);
        assert!(
            r.pass && (r.lhs - 1.0).abs() < 1e-6 && (r.rhs - 2.775).abs() < 1e-9,
            "{r:?}"
        );
        let [disp, dec] = check_step_bounds(s, &f, &step, 2.0, &ctx);
        assert!(disp.pass && (disp.rhs - 2.0).abs() < 1e-6 && (disp.lhs - 0.225).abs() < 1e-12);
        assert!(dec.pass);
        let d = Objective::distance(s, Point::Vertex(0), 1.0).unwrap();
        let step = prox(s, &d, &x, &ProxConfig::new(2.0)).unwrap();
        assert!(check_conv_d(s, &d, &step, 2.0, &ctx).is_skipped());
    }

    #[test]
    fn iteration_on_a_segment() {
        let path = build_path(&[10.0]).unwrap();
        let s = path.space();
        let f = Objective::squared_distance(s, Point::Vertex(0), 1.0, 10.0).unwrap();
        let x0 = path.graph().locate(0, 3.0);
        let trace = flow(s, &f, &x0, &FlowParams::new(1.0, 20), &ProxConfig::new(2.0)).unwrap();
        let reports = check_iteration(s, &f, &trace, 1.0, &CheckContext::default());
        assert_eq!(reports.len(), 5);
        assert!(reports.iter().all(|r| r.pass), "{reports:#?}");
        assert_eq!(reports[0].lhs, 0.0);
        assert_eq!(reports[1].lhs, 9.0);
        assert_eq!(reports[1].rhs, 40.0);
    }

    #[test]
    fn tripod_contraction_cases() {
        let t = build_tripod([5.0, 5.0, 5.0]).unwrap();
        let s = t.space();
        let g = t.graph();
        let f = Objective::distance(s, Point::Vertex(0), 1.0).unwrap();
        let ctx = CheckContext::default();

        let (x1, x2) = (
            g.point_on(0, 1, 3.0).unwrap(),
            g.point_on(0, 2, 4.0).unwrap(),
        );
        let cfg = ProxConfig::new(1.0);
        let r1 = prox(s, &f, &x1, &cfg).unwrap();
        let r2 = prox(s, &f, &x2, &cfg).unwrap();
        let reps = check_contraction(s, &f, &r1, &r2, 1.0, &ctx).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].theorem, Theorem::Cont1);
        assert!(reps[0].pass && (reps[0].lhs - 5.0).abs() < 1e-9 && reps[0].slack.abs() < 1e-9);

        let (x1, x2) = (
            g.point_on(0, 1, 3.0).unwrap(),
            g.point_on(0, 1, 4.0).unwrap(),
        );
        let cfg = ProxConfig::new(2.0);
        let r1 = prox(s, &f, &x1, &cfg).unwrap();
        let r2 = prox(s, &f, &x2, &cfg).unwrap();
        let reps = check_contraction(s, &f, &r2, &r1, 2.0, &ctx).unwrap();
        assert_eq!(reps.len(), 1);
        assert_eq!(reps[0].theorem, Theorem::Cont2);
        assert!(reps[0].pass && (reps[0].lhs - 1.0).abs() < 1e-9 && reps[0].slack.abs() < 1e-9);
    }
}

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use anyhow::{Context, Result};
use hypflow_core::harness::{HarnessConfig, Summary};
use hypflow_core::{FlowTrace, ProxResult, Space, TheoremReport};
use serde_json::{json, Value};

use crate::VerifyArgs;

fn write_text(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

pub fn emit_json(out: Option<&Path>, doc: &Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(doc)?;
    text.push('\n');
    write_text(out, &text)
}

pub fn prox_json(space: &Space, r: &ProxResult, status: &str) -> Value {
    json!({
        "format": 1,
        "status": status,
        "x": space.describe(&r.x),
        "y": space.describe(&r.y),
        "moreau_value": r.moreau_value,
        "displacement": r.displacement,
        "certificate": r.certificate,
        "alternatives": r.alternatives.iter().map(|p| space.describe(p)).collect::<Vec<_>>(),
    })
}

pub fn emit_trace(out: Option<&Path>, trace: &FlowTrace) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "iter",
        "f_value",
        "dist_to_p",
        "displacement",
        "moreau_value",
    ])?;
    for (i, s) in trace.iterates.iter().enumerate() {
        w.write_record([
            i.to_string(),
            s.f_value.to_string(),
            s.dist_to_p.to_string(),
            s.displacement.to_string(),
            s.moreau_value.to_string(),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    write_text(out, &String::from_utf8(bytes)?)
}

/// Writes the JSON bundle to `out` and the per-report CSV next to it.
pub fn write_bundle(
    out: &Path,
    config: &HarnessConfig,
    args: &VerifyArgs,
    reports: &[TheoremReport],
    summary: &Summary,
) -> Result<()> {
    let doc = json!({
        "format": 1,
        "suite": config.suite.name(),
        "space": args.space,
        "delta_build": args.delta_build,
        "trials": config.trials,
        "seed": config.seed,
        "tol": config.tol_rel,
        "summary": {
            "total": summary.total,
            "passed": summary.passed,
            "failed": summary.failed,
            "skipped": summary.skipped,
        },
        "reports": reports,
    });
    emit_json(Some(out), &doc)?;

    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record([
        "index",
        "suite",
        "trial",
        "theorem",
        "status",
        "lhs",
        "rhs",
        "slack",
        "delta_check",
        "epsilon_cvx",
        "seed",
        "flags",
    ])?;
    for (i, r) in reports.iter().enumerate() {
        let field = |key: &str| {
            r.inputs
                .get(key)
                .map(|v| v.to_string().trim_matches('"').to_string())
        };
        w.write_record([
            i.to_string(),
            field("suite").unwrap_or_default(),
            field("trial").unwrap_or_default(),
            r.theorem.name().to_string(),
            r.status().to_string(),
            r.lhs.to_string(),
            r.rhs.to_string(),
            r.slack.to_string(),
            r.delta_check.to_string(),
            r.epsilon_cvx.to_string(),
            r.seed.to_string(),
            r.flags.join(";"),
        ])?;
    }
    let bytes = w.into_inner().map_err(|e| e.into_error())?;
    let csv_path = out.with_extension("csv");
    fs::write(&csv_path, bytes).with_context(|| format!("writing {}", csv_path.display()))
}

//! Report emission: the summary table, the JSON report document and the
//! plot-ready CSV. Every number prints with 12 significant digits and
//! its error fields; identical configs produce byte-identical files.

use anyhow::{Context, Result};
use serde_json::{json, Value};

use crate::runner::{CaseResult, Outcome};

/// 12 significant digits.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf".into() } else { "-inf".into() }
    } else {
        format!("{x:.11e}")
    }
}

fn opt_f64(x: f64) -> Value {
    if x.is_finite() {
        json!(sig12(x))
    } else {
        json!(null)
    }
}

pub fn status_of(result: &CaseResult) -> &'static str {
    match &result.outcome {
        Outcome::HypothesisViolated(_) => "hypothesis-violated",
        Outcome::Report(rep) => {
            if rep.vacuous {
                "vacuous"
            } else if rep.pass == Some(true) {
                "pass"
            } else {
                "fail"
            }
        }
    }
}

pub fn json_document(results: &[CaseResult]) -> Value {
    let cases: Vec<Value> = results
        .iter()
        .map(|r| match &r.outcome {
            Outcome::HypothesisViolated(msg) => json!({
                "case": r.id,
                "status": "hypothesis-violated",
                "s": sig12(r.s),
                "p": sig12(r.p),
                "q": r.q.map(sig12),
                "detail": msg,
            }),
            Outcome::Report(rep) => json!({
                "case": r.id,
                "status": status_of(r),
                "theorem": rep.theorem.as_str(),
                "function": rep.function_id,
                "s": sig12(r.s),
                "p": sig12(r.p),
                "q": r.q.map(sig12),
                "lhs": {
                    "value": opt_f64(rep.lhs.value),
                    "error_estimate": opt_f64(rep.lhs.error_estimate),
                    "truncation_bound": opt_f64(rep.lhs.truncation_bound),
                    "samples_used": rep.lhs.samples_used,
                },
                "rhs": {
                    "value": opt_f64(rep.rhs.value),
                    "error_estimate": opt_f64(rep.rhs.error_estimate),
                    "truncation_bound": opt_f64(rep.rhs.truncation_bound),
                    "samples_used": rep.rhs.samples_used,
                },
                "constant": opt_f64(rep.constant),
                "constant_provenance": format!("{:?}", rep.constant_provenance),
                "beta_used": rep.beta_used.map(sig12),
                "d1": rep.d1.as_ref().map(|d| json!({
                    "value": opt_f64(d.d1),
                    "smallness": opt_f64(d.smallness),
                    "admissible": d.admissible,
                    "method": format!("{:?}", d.method),
                    "error_estimate": opt_f64(d.error_estimate),
                    "sup_radius": d.sup_radius.map(sig12),
                    "warning": d.warning,
                })),
                "ratio": rep.ratio.map(sig12),
                "pass": rep.pass,
                "vacuous": rep.vacuous,
                "notes": rep.notes,
            }),
        })
        .collect();
    let summary = summarize(results);
    json!({
        "cases": cases,
        "summary": {
            "pass": summary.0,
            "fail": summary.1,
            "vacuous": summary.2,
            "hypothesis_violated": summary.3,
        },
    })
}

pub const CSV_HEADER: &str = "case,theorem,function,s,p,q,d1,smallness,constant,\
lhs,lhs_error,rhs,rhs_error,ratio,pass,status";

pub fn csv_rows(results: &[CaseResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in results {
        let q = r.q.map(sig12).unwrap_or_default();
        match &r.outcome {
            Outcome::HypothesisViolated(_) => {
                out.push_str(&format!(
                    "{},,,{},{},{q},,,,,,,,,,hypothesis-violated\n",
                    r.id,
                    sig12(r.s),
                    sig12(r.p),
                ));
            }
            Outcome::Report(rep) => {
                let (d1, smallness) = rep
                    .d1
                    .as_ref()
                    .map(|d| (sig12(d.d1), sig12(d.smallness)))
                    .unwrap_or_default();
                out.push_str(&format!(
                    "{},{},{},{},{},{q},{d1},{smallness},{},{},{},{},{},{},{},{}\n",
                    r.id,
                    rep.theorem.as_str(),
                    rep.function_id,
                    sig12(r.s),
                    sig12(r.p),
                    sig12(rep.constant),
                    sig12(rep.lhs.value),
                    sig12(rep.lhs.total_error()),
                    sig12(rep.rhs.value),
                    sig12(rep.rhs.total_error()),
                    rep.ratio.map(sig12).unwrap_or_default(),
                    rep.pass.map(|p| p.to_string()).unwrap_or_default(),
                    status_of(r),
                ));
            }
        }
    }
    out
}

/// (pass, fail, vacuous, hypothesis-violated) counts.
pub fn summarize(results: &[CaseResult]) -> (usize, usize, usize, usize) {
    let mut counts = (0, 0, 0, 0);
    for r in results {
        match status_of(r) {
            "pass" => counts.0 += 1,
            "fail" => counts.1 += 1,
            "vacuous" => counts.2 += 1,
            _ => counts.3 += 1,
        }
    }
    counts
}

pub fn print_summary_line(result: &CaseResult) {
    match &result.outcome {
        Outcome::HypothesisViolated(msg) => {
            println!("{:<28} hypothesis-violated: {msg}", result.id);
        }
        Outcome::Report(rep) => {
            let ratio = rep
                .ratio
                .map(sig12)
                .unwrap_or_else(|| "-".into());
            let constant = if rep.constant.is_nan() {
                "-".into()
            } else {
                sig12(rep.constant)
            };
            println!(
                "{:<28} {:<8} lhs {} rhs {} C {} ratio {}",
                result.id,
                status_of(result),
                sig12(rep.lhs.value),
                sig12(rep.rhs.value),
                constant,
                ratio,
            );
        }
    }
}

pub fn write_outputs(
    results: &[CaseResult],
    json_path: Option<&str>,
    csv_path: Option<&str>,
) -> Result<()> {
    if let Some(path) = json_path {
        let doc = serde_json::to_string_pretty(&json_document(results))?;
        std::fs::write(path, doc + "\n").context(format!("writing {path}"))?;
    }
    if let Some(path) = csv_path {
        std::fs::write(path, csv_rows(results)).context(format!("writing {path}"))?;
    }
    Ok(())
}

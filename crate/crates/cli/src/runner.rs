//! Case execution: dispatches one expanded case to its verifier,
//! classifies the outcome, and runs batches concurrently under the
//! HARDY_VERIFY_THREADS worker budget with deterministic aggregation.

use anyhow::{anyhow, Result};
use std::sync::Mutex;

use hardy_verify::corpus::builtin;
use hardy_verify::error::HardyError;
use hardy_verify::inequalities::{
    verify_fractional_hardy, verify_fractional_hardy_sobolev, verify_integral_hardy,
    verify_log_hardy_sobolev, verify_log_holder, verify_nash, InequalityCase, LogHolderMeasure,
    Theorem, VerificationReport,
};
use hardy_verify::weights::{RadialWeight, WeightSpec};
use hardy_verify::{QuadratureConfig, SpaceDescriptor};

use crate::config::CaseInstance;

/// How one case ended: a report, or a reason it was excluded from
/// pass/fail accounting.
#[derive(Debug)]
pub enum Outcome {
    Report(VerificationReport),
    /// The theorem's hypotheses fail for these parameters (reported,
    /// excluded from pass/fail).
    HypothesisViolated(String),
}

pub struct CaseResult {
    pub id: String,
    pub s: f64,
    pub p: f64,
    pub q: Option<f64>,
    pub outcome: Outcome,
}

pub fn run_case(inst: &CaseInstance, cfg: &QuadratureConfig) -> Result<CaseResult> {
    let space = SpaceDescriptor::from_config_str(&inst.spec.space)
        .map_err(|e| anyhow!("case '{}': {e}", inst.id))?;
    let weights = WeightSpec::from_family(&inst.spec.weights)
        .map_err(|e| anyhow!("case '{}': {e}", inst.id))?;
    let u = builtin(&inst.spec.function).map_err(|e| anyhow!("case '{}': {e}", inst.id))?;
    let case = InequalityCase {
        id: inst.id.clone(),
        theorem: inst.spec.theorem,
        s: inst.s,
        p: inst.p,
        q: inst.q,
        space,
        weights,
    };

    let verdict = match inst.spec.theorem {
        Theorem::IntegralHardy => {
            let g = inst
                .spec
                .weight_g
                .as_deref()
                .ok_or_else(|| anyhow!("case '{}': integral_hardy needs weight_g", inst.id))
                .and_then(|f| RadialWeight::from_family(f).map_err(|e| anyhow!("{e}")))?;
            let h = inst
                .spec
                .weight_h
                .as_deref()
                .ok_or_else(|| anyhow!("case '{}': integral_hardy needs weight_h", inst.id))
                .and_then(|f| RadialWeight::from_family(f).map_err(|e| anyhow!("{e}")))?;
            verify_integral_hardy(&case, &u, &g, &h, cfg)
        }
        Theorem::FractionalHardy | Theorem::GroupHardy | Theorem::HeisenbergHardy => {
            verify_fractional_hardy(&case, &u, cfg)
        }
        Theorem::FractionalHardySobolev
        | Theorem::GroupHardySobolev
        | Theorem::HeisenbergHardySobolev => verify_fractional_hardy_sobolev(&case, &u, cfg),
        Theorem::LogHolder => {
            let q = case
                .q
                .ok_or_else(|| anyhow!("case '{}': log_holder needs q", inst.id))?;
            verify_log_holder(
                &LogHolderMeasure::Radial {
                    space: &case.space,
                    u: &u,
                },
                case.p,
                q,
                cfg,
            )
        }
        Theorem::LogHardySobolev => verify_log_hardy_sobolev(&case, &u, cfg),
        Theorem::NashType => verify_nash(&case, &u, cfg),
    };

    let outcome = match verdict {
        Ok(mut report) => {
            report.case_id = inst.id.clone();
            Outcome::Report(report)
        }
        Err(e @ (HardyError::NotAdmissible { .. } | HardyError::HypothesisViolated(_))) => {
            Outcome::HypothesisViolated(e.to_string())
        }
        Err(e) => return Err(anyhow!("case '{}': {e}", inst.id)),
    };
    Ok(CaseResult {
        id: inst.id.clone(),
        s: inst.s,
        p: inst.p,
        q: inst.q,
        outcome,
    })
}

fn worker_budget() -> usize {
    std::env::var("HARDY_VERIFY_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n >= 1)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}

/// Runs every instance, up to the worker budget at a time; results come
/// back sorted by case id so the output is deterministic.
pub fn run_all(instances: &[CaseInstance], cfg: &QuadratureConfig) -> Result<Vec<CaseResult>> {
    let workers = worker_budget().min(instances.len().max(1));
    let next = Mutex::new(0usize);
    let results: Mutex<Vec<(usize, Result<CaseResult>)>> = Mutex::new(Vec::new());
    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                let idx = {
                    let mut guard = next.lock().expect("scheduler lock");
                    if *guard >= instances.len() {
                        break;
                    }
                    let i = *guard;
                    *guard += 1;
                    i
                };
                let res = run_case(&instances[idx], cfg);
                results.lock().expect("result lock").push((idx, res));
            });
        }
    });
    let mut collected = results.into_inner().expect("result lock");
    collected.sort_by_key(|(idx, _)| *idx);
    collected.into_iter().map(|(_, res)| res).collect()
}

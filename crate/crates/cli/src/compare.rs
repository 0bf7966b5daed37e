//! Side-by-side evaluation of one word by several engines.

use serde::{Deserialize, Serialize};

use crate::error::{CliError, ErrorKind};
use crate::job::{Engine, JobSpec};
use crate::run::{run, Report};

/// Engine outcome: a report, or the reason the engine declined.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EngineOutcome {
    pub engine: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub report: Option<Report>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub skipped: Option<String>,
}

/// Agreement of two engines.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairCheck {
    pub a: String,
    pub b: String,
    pub deviation: f64,
    /// `3·sqrt(se_a² + se_b²)` plus both truncation bounds plus `1e-8`.
    pub allowance: f64,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub engines: Vec<EngineOutcome>,
    pub pairs: Vec<PairCheck>,
    pub all_agree: bool,
}

fn split_error(r: &Report) -> (f64, f64) {
    match r.error_kind.as_str() {
        "standard_error" => (r.error, 0.0),
        _ => (0.0, r.error),
    }
}

/// Runs `base` once per engine, dropping parameters the engine does not
/// take. Engines refusing the word are listed as skipped.
pub fn compare(base: &JobSpec, engines: &[Engine]) -> Result<Comparison, CliError> {
    let mut outcomes = Vec::new();
    for &e in engines {
        let mut job = base.clone();
        job.engine = e;
        if e != Engine::Series {
            job.k_max = None;
            job.budget = None;
        }
        if !matches!(e, Engine::Mc | Engine::Holonomy) {
            job.samples = None;
            job.seed = None;
        }
        if e != Engine::Holonomy {
            job.steps = None;
            job.stepper = None;
        }
        if !e.needs_n() {
            job.n = None;
            job.group = "U".into();
        }
        match run(&job) {
            Ok(r) => outcomes.push(EngineOutcome {
                engine: e.to_string(),
                report: Some(r),
                skipped: None,
            }),
            Err(err) if err.kind == ErrorKind::Refusal => outcomes.push(EngineOutcome {
                engine: e.to_string(),
                report: None,
                skipped: Some(err.message),
            }),
            Err(err) => return Err(err),
        }
    }
    let done: Vec<&Report> = outcomes.iter().filter_map(|o| o.report.as_ref()).collect();
    let mut pairs = Vec::new();
    for i in 0..done.len() {
        for j in i + 1..done.len() {
            let (a, b) = (done[i], done[j]);
            let (sa, ta) = split_error(a);
            let (sb, tb) = split_error(b);
            let deviation = (a.value - b.value).abs();
            let allowance = 3.0 * (sa * sa + sb * sb).sqrt() + ta + tb + 1e-8;
            pairs.push(PairCheck {
                a: a.engine.clone(),
                b: b.engine.clone(),
                deviation,
                allowance,
                agree: deviation <= allowance,
            });
        }
    }
    let all_agree = pairs.iter().all(|p| p.agree);
    Ok(Comparison {
        engines: outcomes,
        pairs,
        all_agree,
    })
}

//! Dispatch of a job to its engine and the report format.

use std::collections::BTreeMap;
use std::time::Instant;

use holonomy_sim::{holonomy_trace_mc, HolonomyParams};
use loopspec::{EngineResult, GroupSpec, LassoWord};
use masterfield::{forest_polynomial, master_field};
use mc_engine::{estimate, McParams};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use series_engine::{evaluate, SeriesParams, DEFAULT_BUDGET};
use walk_engine::{build_action_graph, evaluate_walk};

use crate::error::CliError;
use crate::job::{Engine, JobSpec};

/// Version tag written into every report.
pub const SCHEMA_VERSION: &str = "ym2.report/1";

/// Column names of the CSV output.
pub const CSV_HEADER: &str = "word,group,N,engine,value,error,seconds";

/// Result of one job.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub schema: String,
    pub value: f64,
    pub error: f64,
    pub error_kind: String,
    pub engine: String,
    pub params: Value,
    pub word_canonical: String,
    pub group: String,
    #[serde(rename = "N")]
    pub n: Option<u32>,
    pub normalized: bool,
    pub wall_time_ms: f64,
    pub metadata: BTreeMap<String, String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    /// One CSV row in the order of [`CSV_HEADER`].
    pub fn to_csv_row(&self) -> String {
        let n = self.n.map_or_else(|| "inf".to_string(), |n| n.to_string());
        format!(
            "{},{},{},{},{:e},{:e},{}",
            csv_field(&self.word_canonical),
            self.group,
            n,
            self.engine,
            self.value,
            self.error,
            self.wall_time_ms / 1000.0
        )
    }
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Validates and runs a job.
pub fn run(job: &JobSpec) -> Result<Report, CliError> {
    job.validate()?;
    let w = job.parse_word()?;
    let start = Instant::now();
    let (result, params) = dispatch(job, &w)?;
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let mut metadata = result.metadata.clone();
    let error_kind = metadata
        .remove("error_kind")
        .unwrap_or_else(|| "exact".to_string());
    Ok(Report {
        schema: SCHEMA_VERSION.to_string(),
        value: result.value,
        error: result.error,
        error_kind,
        engine: job.engine.to_string(),
        params,
        word_canonical: w.canonical(),
        group: job.group.parse::<loopspec::GroupKind>()?.to_string(),
        n: job.n,
        normalized: job.normalized,
        wall_time_ms: if job.deterministic { 0.0 } else { elapsed },
        metadata,
    })
}

fn required<T: Copy>(v: Option<T>, name: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::parse(format!("missing parameter `{name}`")))
}

fn group(job: &JobSpec) -> Result<GroupSpec, CliError> {
    job.group_spec()?
        .ok_or_else(|| CliError::parse("missing parameter `N`"))
}

/// `N^loops`, the factor between normalized and plain traces.
fn loop_scale(g: &GroupSpec, w: &LassoWord) -> f64 {
    g.n_f64().powi(w.n_loops() as i32)
}

fn dispatch(job: &JobSpec, w: &LassoWord) -> Result<(EngineResult, Value), CliError> {
    match job.engine {
        Engine::Series => {
            let g = group(job)?;
            let p = SeriesParams {
                k_max: job.k_max,
                budget: job.budget.unwrap_or(DEFAULT_BUDGET),
                normalized: job.normalized,
                ..SeriesParams::default()
            };
            let r = evaluate(w, &g, &p)?;
            let k = r.meta("k_max").and_then(|s| s.parse::<usize>().ok());
            Ok((r, json!({ "k_max": k, "budget": p.budget })))
        }
        Engine::Mc => {
            let g = group(job)?;
            let mut p = McParams::new(
                required(job.samples, "samples")?,
                required(job.seed, "seed")?,
            );
            p.normalized = job.normalized;
            let r = estimate(w, &g, &p)?;
            Ok((r, json!({ "samples": p.samples, "seed": p.seed })))
        }
        Engine::Walk => {
            let g = group(job)?;
            let graph = build_action_graph(w)?;
            let mut v = evaluate_walk(&graph, w, g.n())?;
            if !job.normalized {
                v *= loop_scale(&g, w);
            }
            let r = EngineResult::new(v, 0.0, graph.n_states() as u64)
                .with("engine", "walk")
                .with("states", graph.n_states())
                .with("error_kind", "exact");
            Ok((r, json!({})))
        }
        Engine::Holonomy => {
            let g = group(job)?;
            let mut p = HolonomyParams::new(
                required(job.steps, "J")?,
                required(job.samples, "samples")?,
                required(job.seed, "seed")?,
            );
            if let Some(s) = &job.stepper {
                p.stepper = s.parse().map_err(CliError::parse)?;
            }
            let mut r = holonomy_trace_mc(w, &g, &p)?;
            if !job.normalized {
                let f = loop_scale(&g, w);
                r.value *= f;
                r.error *= f;
                r.metadata.insert("normalized".into(), "false".into());
            }
            let stepper = r.meta("stepper").unwrap_or("exponential").to_string();
            Ok((
                r,
                json!({ "J": p.steps, "samples": p.samples, "seed": p.seed, "stepper": stepper }),
            ))
        }
        Engine::Master => {
            let v = master_field(w)?;
            let r = EngineResult::new(v, 0.0, 0)
                .with("engine", "master")
                .with("route", "cumulant")
                .with("error_kind", "rounding");
            Ok((r, json!({ "route": "cumulant" })))
        }
        Engine::Forest => {
            let r = forest_value(w, job.normalized)?;
            Ok((r, json!({})))
        }
    }
}

/// Forest polynomial of `w` evaluated at its areas, times `e^{-len/2}` when
/// `normalized`.
pub fn forest_value(w: &LassoWord, normalized: bool) -> Result<EngineResult, CliError> {
    let poly = forest_polynomial(w)?;
    let values: BTreeMap<String, f64> = (0..w.alphabet_len())
        .map(|i| (w.name(i).to_string(), w.area(i)))
        .collect();
    let mut v = poly.eval(&values)?;
    if normalized {
        v *= (-w.total_length() / 2.0).exp();
    }
    Ok(EngineResult::new(v, 0.0, poly.terms().len() as u64)
        .with("engine", "forest")
        .with("polynomial", &poly)
        .with("normalized", normalized)
        .with("error_kind", "rounding"))
}

/// Ways of computing the master field.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MasterRoute {
    /// Free cumulants of single-letter blocks.
    #[default]
    Cumulant,
    /// Planar part of the `U(N)` series.
    NcSeries,
    /// Normalized forest polynomial; words without inverses only.
    Forest,
    /// Unbiased Poisson estimator of the forest polynomial.
    Poisson,
}

impl MasterRoute {
    pub fn as_str(self) -> &'static str {
        match self {
            MasterRoute::Cumulant => "cumulant",
            MasterRoute::NcSeries => "nc-series",
            MasterRoute::Forest => "forest",
            MasterRoute::Poisson => "poisson",
        }
    }
}

/// Parameters of [`run_master`].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct MasterOptions {
    pub route: MasterRoute,
    pub k_max: Option<usize>,
    pub budget: Option<u64>,
    pub samples: Option<u64>,
    pub seed: Option<u64>,
    pub deterministic: bool,
}

/// Master field of `w` by the chosen route, as a report with `N` unset.
pub fn run_master(w: &LassoWord, opts: &MasterOptions) -> Result<Report, CliError> {
    use masterfield::{master_field_nc_series, poisson_forest_estimate, PoissonParams};
    let route = opts.route;
    let sampling = route == MasterRoute::Poisson;
    if !sampling && (opts.samples.is_some() || opts.seed.is_some()) {
        return Err(CliError::parse(format!(
            "samples and seed do not apply to route `{}`",
            route.as_str()
        )));
    }
    if route != MasterRoute::NcSeries && (opts.k_max.is_some() || opts.budget.is_some()) {
        return Err(CliError::parse(format!(
            "k_max and budget do not apply to route `{}`",
            route.as_str()
        )));
    }
    let start = Instant::now();
    let (result, params) = match route {
        MasterRoute::Cumulant => (
            EngineResult::new(master_field(w)?, 0.0, 0).with("error_kind", "rounding"),
            json!({}),
        ),
        MasterRoute::NcSeries => {
            let p = SeriesParams {
                k_max: opts.k_max,
                budget: opts.budget.unwrap_or(DEFAULT_BUDGET),
                ..SeriesParams::default()
            };
            let r = master_field_nc_series(w, &p)?;
            let k = r.meta("k_max").and_then(|s| s.parse::<usize>().ok());
            (r, json!({ "k_max": k, "budget": p.budget }))
        }
        MasterRoute::Forest => (forest_value(w, true)?, json!({})),
        MasterRoute::Poisson => {
            let p = PoissonParams::new(
                required(opts.samples, "samples")?,
                required(opts.seed, "seed")?,
            );
            let mut r = poisson_forest_estimate(w, &p)?;
            // The estimator targets the raw polynomial.
            let f = (-w.total_length() / 2.0).exp();
            r.value *= f;
            r.error *= f;
            (r, json!({ "samples": p.samples, "seed": p.seed }))
        }
    };
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let mut metadata = result.metadata.clone();
    let error_kind = metadata
        .remove("error_kind")
        .unwrap_or_else(|| "exact".to_string());
    metadata.insert("route".into(), route.as_str().into());
    metadata.insert("engine".into(), "master".into());
    metadata.insert("normalized".into(), "true".into());
    Ok(Report {
        schema: SCHEMA_VERSION.to_string(),
        value: result.value,
        error: result.error,
        error_kind,
        engine: "master".into(),
        params,
        word_canonical: w.canonical(),
        group: "U".into(),
        n: None,
        normalized: true,
        wall_time_ms: if opts.deterministic { 0.0 } else { elapsed },
        metadata,
    })
}

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{instance, parse_range, CliError, CliResult, Family, Format};
use crate::bounds::{self, Rational};
use crate::exact::{self, SearchLimits};
use crate::heuristics::{self, Method, SolveReport};
use crate::paths::Path;

/// A list of integers, written as `[1, 2]`, `7` or `"1..10"`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RangeList {
    List(Vec<u64>),
    One(u64),
    Text(String),
}

impl RangeList {
    pub fn values(&self) -> CliResult<Vec<u64>> {
        let v = match self {
            RangeList::List(v) => v.clone(),
            RangeList::One(x) => vec![*x],
            RangeList::Text(s) => parse_range(s)?,
        };
        if v.is_empty() {
            return Err(CliError::Input("empty range in experiment spec".into()));
        }
        Ok(v)
    }
}

fn default_seeds() -> RangeList {
    RangeList::One(1)
}

fn default_k() -> RangeList {
    RangeList::One(1)
}

fn default_format() -> Format {
    Format::Csv
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSpec {
    pub family: Family,
    pub n: RangeList,
    #[serde(default = "default_seeds")]
    pub seeds: RangeList,
    #[serde(default = "default_k")]
    pub k: RangeList,
    pub methods: Vec<Method>,
    #[serde(default)]
    pub budget_nodes: Option<u64>,
    #[serde(default)]
    pub budget_ms: Option<u64>,
    #[serde(default)]
    pub max_n: Option<usize>,
    #[serde(default = "default_format")]
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentRow {
    pub family: Family,
    pub n: usize,
    pub seed: u64,
    pub k: u32,
    pub method: Method,
    pub length: usize,
    pub bound_num: i128,
    pub bound_den: i128,
    pub bound: f64,
    pub ratio: f64,
    pub meets_bound: bool,
    pub exhaustive: Option<bool>,
    pub palette: usize,
    pub runtime_ms: f64,
}

struct Job {
    n: usize,
    seed: u64,
    k: u32,
    method: Method,
}

fn limits(spec: &ExperimentSpec) -> SearchLimits {
    SearchLimits {
        max_n: spec.max_n.unwrap_or(SearchLimits::default().max_n),
        node_budget: spec.budget_nodes,
        time_budget: spec.budget_ms.map(Duration::from_millis),
    }
}

fn run_job(spec: &ExperimentSpec, job: &Job) -> CliResult<ExperimentRow> {
    let g = instance(spec.family, job.n, job.seed)?;
    let clock = Instant::now();
    let report: SolveReport = match job.method {
        Method::Greedy => heuristics::greedy_extend(&g, 0, job.k)?,
        Method::Maximalize => heuristics::maximalize(&g, &Path::single(0), job.k)?,
        Method::Ladder => heuristics::ladder(&g, job.k)?.pop().expect("ladder returns k reports"),
        Method::Naive => heuristics::naive_recursive(&g, job.k, 0)?,
        Method::Exact => exact::max_k_rainbow_path_exact(&g, job.k, &limits(spec))?.into_report(&g, job.k)?,
    };
    let runtime_ms = clock.elapsed().as_secs_f64() * 1e3;
    let b: Rational = report.guaranteed_bound;
    Ok(ExperimentRow {
        family: spec.family,
        n: job.n,
        seed: job.seed,
        k: job.k,
        method: job.method,
        length: report.len(),
        bound_num: *b.numer(),
        bound_den: *b.denom(),
        bound: *b.numer() as f64 / *b.denom() as f64,
        ratio: report.len() as f64 / job.n as f64,
        meets_bound: bounds::meets(report.len(), &b),
        exhaustive: report.exhaustive,
        palette: g.palette_len(),
        runtime_ms,
    })
}

/// Runs every (n, seed, k, method) combination. Rows are computed in
/// parallel and returned in spec order.
pub fn run_experiment(spec: &ExperimentSpec) -> CliResult<Vec<ExperimentRow>> {
    if spec.methods.is_empty() {
        return Err(CliError::Input("experiment spec lists no methods".into()));
    }
    let ns = spec.n.values()?;
    let seeds = spec.seeds.values()?;
    let ks = spec.k.values()?;
    if let Some(&k) = ks.iter().find(|&&k| k == 0 || k > u64::from(bounds::MAX_K)) {
        return Err(CliError::Input(format!("k = {k} out of range")));
    }
    let lim = limits(spec);
    if spec.methods.contains(&Method::Exact) && !lim.has_budget() {
        if let Some(&n) = ns.iter().find(|&&n| n as usize > lim.max_n) {
            return Err(CliError::Input(format!("exact method at n = {n} needs a budget or a larger max_n")));
        }
    }
    let mut jobs = Vec::new();
    for &n in &ns {
        // Fail fast on sizes the family cannot produce.
        instance(spec.family, n as usize, seeds[0])?;
        for &seed in &seeds {
            for &k in &ks {
                for &method in &spec.methods {
                    jobs.push(Job { n: n as usize, seed, k: k as u32, method });
                }
            }
        }
    }
    jobs.par_iter().map(|j| run_job(spec, j)).collect()
}

pub fn render(rows: &[ExperimentRow], format: Format) -> CliResult<String> {
    match format {
        Format::Json => Ok(serde_json::to_string_pretty(rows)? + "\n"),
        Format::Csv | Format::Text => {
            let mut w = csv::Writer::from_writer(Vec::new());
            for r in rows {
                w.serialize(r).map_err(|e| CliError::Input(e.to_string()))?;
            }
            let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
            String::from_utf8(bytes).map_err(|e| CliError::Input(e.to_string()))
        }
    }
}

//! Multi-seed comparison of the two controllers.

use rayon::prelude::*;
use serde::Serialize;

use crate::harness::{run_mode, HarnessError, MetricMeans, Mode, RunSummary, Scenario};

/// Mean and population standard deviation over the seeds that report a
/// value. `n` counts those seeds.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stat {
    pub mean: f64,
    pub std: f64,
    pub n: usize,
}

impl Stat {
    pub fn of(values: &[f64]) -> Option<Stat> {
        if values.is_empty() {
            return None;
        }
        let n = values.len() as f64;
        let mean = values.iter().sum::<f64>() / n;
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n;
        Some(Stat {
            mean,
            std: var.sqrt(),
            n: values.len(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    /// `all`, `near` (steps closer than the visibility range) or a sequence name.
    pub scope: String,
    pub metric: &'static str,
    pub cinewild: Option<Stat>,
    pub baseline: Option<Stat>,
}

#[derive(Serialize)]
pub struct SeedPair {
    pub seed: u64,
    pub cinewild: RunSummary,
    pub baseline: RunSummary,
}

pub struct Comparison {
    pub paired: Vec<SeedPair>,
    pub rows: Vec<ComparisonRow>,
}

type Metric = (&'static str, fn(&MetricMeans) -> Option<f64>);
type Scope = (String, Box<dyn Fn(&RunSummary) -> Option<&MetricMeans>>);

const METRICS: [Metric; 11] = [
    ("d_dt", |m| m.d_dt),
    ("f", |m| m.f),
    ("abs_e_im_x", |m| m.abs_e_im_x),
    ("abs_e_im_y", |m| m.abs_e_im_y),
    ("a_norm", |m| m.a_norm),
    ("v_norm", |m| m.v_norm),
    ("j_prox", |m| m.j_prox),
    ("e_yaw", |m| m.e_yaw),
    ("abs_e_yaw", |m| m.abs_e_yaw),
    ("im_d_x_cent", |m| m.im_d_x_cent),
    ("pct_inside_fov", |m| m.pct_inside_fov),
];

/// Runs both modes for seeds `0..seeds`. Runs execute in parallel but are
/// collected in seed order, so the output does not depend on scheduling.
pub fn run_comparison(scenario: &Scenario, seeds: u64) -> Result<Comparison, HarnessError> {
    let jobs: Vec<(u64, Mode)> = (0..seeds).flat_map(|s| [(s, Mode::Cinewild), (s, Mode::Baseline)]).collect();
    let results: Vec<RunSummary> = jobs
        .par_iter()
        .map(|&(seed, mode)| run_mode(scenario, mode, seed).map(|o| o.summary))
        .collect::<Result<_, _>>()?;
    let mut it = results.into_iter();
    let paired: Vec<SeedPair> = (0..seeds)
        .map(|seed| SeedPair {
            seed,
            cinewild: it.next().expect("two runs per seed"),
            baseline: it.next().expect("two runs per seed"),
        })
        .collect();
    let names: Vec<String> = scenario.sequences.iter().map(|s| s.name.clone()).collect();
    Ok(Comparison {
        rows: comparison_rows(&paired, &names),
        paired,
    })
}

/// One row per (scope, metric).
pub fn comparison_rows(paired: &[SeedPair], sequence_names: &[String]) -> Vec<ComparisonRow> {
    let mut scopes: Vec<Scope> = vec![
        ("all".to_string(), Box::new(|s| Some(&s.overall))),
        ("near".to_string(), Box::new(|s| (s.near.steps > 0).then_some(&s.near))),
    ];
    for (i, name) in sequence_names.iter().enumerate() {
        scopes.push((name.clone(), Box::new(move |s| s.per_sequence.get(i))));
    }
    let mut rows = Vec::new();
    for (scope, pick) in &scopes {
        for (metric, get) in METRICS {
            let collect = |which: fn(&SeedPair) -> &RunSummary| {
                let values: Vec<f64> = paired.iter().filter_map(|p| pick(which(p)).and_then(get)).collect();
                Stat::of(&values)
            };
            rows.push(ComparisonRow {
                scope: scope.clone(),
                metric,
                cinewild: collect(|p| &p.cinewild),
                baseline: collect(|p| &p.baseline),
            });
        }
    }
    rows
}

fn cells(s: Option<Stat>) -> [String; 2] {
    match s {
        Some(s) => [format!("{}", s.mean), format!("{}", s.std)],
        None => [String::new(), String::new()],
    }
}

pub fn rows_to_csv(rows: &[ComparisonRow]) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["scope", "metric", "cinewild_mean", "cinewild_std", "baseline_mean", "baseline_std"])
        .expect("in-memory write");
    for r in rows {
        let [cm, cs] = cells(r.cinewild);
        let [bm, bs] = cells(r.baseline);
        w.write_record([r.scope.as_str(), r.metric, &cm, &cs, &bm, &bs]).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Fixed-width text table of the `all` and `near` scopes.
pub fn render_table(name: &str, seeds: u64, rows: &[ComparisonRow]) -> String {
    let fmt = |s: Option<Stat>| s.map_or("-".to_string(), |s| format!("{:.2} ± {:.2}", s.mean, s.std));
    let mut out = format!("{name}, {seeds} seed(s)\n");
    out += &format!("{:<6} {:<16} {:>22} {:>22}\n", "scope", "metric", "cinewild", "baseline");
    for r in rows.iter().filter(|r| r.scope == "all" || r.scope == "near") {
        out += &format!("{:<6} {:<16} {:>22} {:>22}\n", r.scope, r.metric, fmt(r.cinewild), fmt(r.baseline));
    }
    out
}

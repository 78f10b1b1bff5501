//! Mean ± std of a few metrics over several seeds, both controllers.
//!
//! cargo run --release --example compare_modes -- [e1|e2] [seeds]

use cinewild::cli::{comparison_rows, Stat};
use cinewild::harness::{experiment1_preset, experiment2_preset, run_mode, Mode};

fn main() {
    let mut args = std::env::args().skip(1);
    let scenario = match args.next().as_deref() {
        Some("e2") => experiment2_preset(),
        _ => experiment1_preset(),
    };
    let seeds: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(3);
    let paired: Vec<_> = (0..seeds)
        .map(|seed| cinewild::cli::SeedPair {
            seed,
            cinewild: run_mode(&scenario, Mode::Cinewild, seed).unwrap().summary,
            baseline: run_mode(&scenario, Mode::Baseline, seed).unwrap().summary,
        })
        .collect();
    let names: Vec<String> = scenario.sequences.iter().map(|s| s.name.clone()).collect();
    let fmt = |s: Option<Stat>| s.map_or("-".into(), |s| format!("{:.2} ± {:.2}", s.mean, s.std));
    println!("{} over {seeds} seed(s)", scenario.name);
    for r in comparison_rows(&paired, &names) {
        if matches!(r.metric, "d_dt" | "f" | "a_norm" | "pct_inside_fov") {
            println!("{:<16} {:<15} {:>18} {:>18}", r.scope, r.metric, fmt(r.cinewild), fmt(r.baseline));
        }
    }
}

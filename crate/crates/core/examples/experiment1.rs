//! Giraffe experiment: both controllers on the same seed, summary side by side.
//!
//! cargo run --release --example experiment1 -- [seed]

use std::time::Instant;

use cinewild::harness::{experiment1_preset, run_mode, MetricMeans, Mode};

fn row(label: &str, m: &MetricMeans) {
    let v = |x: Option<f64>| x.map_or("-".to_string(), |x| format!("{x:.2}"));
    println!(
        "{label:<22} d_dt {:>7}  f {:>7}  |e_x| {:>7}  |e_y| {:>7}  |a| {:>6}  J_prox {:>7}",
        v(m.d_dt),
        v(m.f),
        v(m.abs_e_im_x),
        v(m.abs_e_im_y),
        v(m.a_norm),
        v(m.j_prox)
    );
}

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let scenario = experiment1_preset();
    for mode in [Mode::Cinewild, Mode::Baseline] {
        let start = Instant::now();
        let out = run_mode(&scenario, mode, seed).expect("preset runs");
        println!("{mode} ({:.1} s)", start.elapsed().as_secs_f64());
        row("  whole run", &out.summary.overall);
        for (s, m) in scenario.sequences.iter().zip(&out.summary.per_sequence) {
            row(&format!("  {}", s.name), m);
        }
    }
}

//! Runs the tiger scenario and writes every SVG panel next to its metrics.csv.
//!
//! cargo run --release --example plot_run -- [out_dir]

use std::path::PathBuf;

use cinewild::cli::plot::{render, Panel};
use cinewild::harness::{experiment2_preset, io, run};

fn main() {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "plot_run_out".into()));
    std::fs::create_dir_all(&dir).expect("create output dir");
    let out = run(&experiment2_preset(), 0).expect("preset runs");
    io::write_csv(&dir.join("metrics.csv"), &out.records).expect("write csv");
    for p in Panel::ALL {
        let path = dir.join(format!("{}.svg", p.key()));
        io::write_atomic(&path, render(p, &out.records).as_bytes()).expect("write svg");
        println!("wrote {}", path.display());
    }
}

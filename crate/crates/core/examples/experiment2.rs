//! Tiger experiment: how long each controller stays in the animal's view.
//!
//! cargo run --release --example experiment2 -- [seed]

use cinewild::harness::{experiment2_preset, run_mode, Mode};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(0);
    let scenario = experiment2_preset();
    let v = |x: Option<f64>| x.map_or("-".to_string(), |x| format!("{x:.2}"));
    for mode in [Mode::Cinewild, Mode::Baseline] {
        let out = run_mode(&scenario, mode, seed).expect("preset runs");
        let near = &out.summary.near;
        println!(
            "{mode:<9} inside FoV {:>6}%  |u_d - c_u| {:>7} px  |e_yaw| {:>6} rad  (over {} steps within range)",
            v(near.pct_inside_fov),
            v(near.im_d_x_cent),
            v(near.abs_e_yaw),
            near.steps
        );
        for (s, m) in scenario.sequences.iter().zip(&out.summary.per_sequence) {
            println!("  {:<16} d_dt {:>6} m  f {:>7} mm  inside {:>6}%", s.name, v(m.d_dt), v(m.f), v(m.pct_inside_fov));
        }
    }
}

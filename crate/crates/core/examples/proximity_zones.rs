//! Tabulates the proximity cost across the no-fly, caution and respectful zones.
//!
//! cargo run --example proximity_zones

use cinewild::costs::j_prox;
use cinewild::{EthicsParams, SpeciesPreset};

fn main() {
    let e = EthicsParams::new(20.0, 5.0, 12.0, SpeciesPreset::Lateral.eye());
    println!("d_sf = {} m, d_ac = {} m", e.d_sf, e.d_ac);
    println!("{:>6}  {:>10}  zone", "d (m)", "J_prox");
    for d in [1.0, 3.0, 4.9, 5.0, 5.1, 8.0, 12.0, 16.0, 19.9, 20.0, 20.1, 25.0, 35.0, 60.0] {
        let zone = if d < e.d_sf {
            "no-fly"
        } else if d < e.d_ac {
            "caution"
        } else {
            "respectful"
        };
        println!("{d:>6.1}  {:>10.4}  {zone}", j_prox(d, &e, 1.0));
    }
}

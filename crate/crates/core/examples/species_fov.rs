//! Which of a ring of drone positions each species eye model can see.
//!
//! cargo run --example species_fov

use std::f64::consts::PI;

use cinewild::camera::{field_of_view, relative_position_in_frame, visibility};
use cinewild::{EulerAngles, SpeciesPreset, Vec3};

fn main() {
    let animal = Vec3::new(0.0, 0.0, 1.0);
    let heading = EulerAngles::default().to_rotation();
    let d_vis = 12.0;
    for species in [SpeciesPreset::ForwardFacing, SpeciesPreset::Lateral, SpeciesPreset::Stereoscopic, SpeciesPreset::Tiger] {
        let eye = species.eye();
        let (fx, fy) = field_of_view(&eye);
        let mut ring = String::new();
        for i in 0..24 {
            let bearing = 2.0 * PI * i as f64 / 24.0;
            let p = animal + Vec3::new(bearing.cos(), bearing.sin(), 0.1) * 8.0;
            let p_td = relative_position_in_frame(&heading, &animal, &p);
            ring.push(if visibility(&eye, &p_td, (p - animal).norm(), d_vis) { '#' } else { '.' });
        }
        println!("{:<14} FoV {:5.1}° × {:5.1}°  {ring}", format!("{species:?}"), fx.to_degrees(), fy.to_degrees());
    }
    println!("ring: 24 bearings at 8 m, counterclockwise from straight ahead");
}

//! Projects a few world points into a gimballed filming camera and back.
//!
//! cargo run --example projection

use cinewild::camera::{self, back_project, field_of_view, project};
use cinewild::{EulerAngles, Intrinsics, SensorSpec, Vec3};

fn show(p: &Vec3) -> String {
    format!("({:5.1}, {:5.1}, {:5.1})", p.x, p.y, p.z)
}

fn main() {
    let sensor = SensorSpec::new(1280.0, 720.0, 36.0, 20.25);
    let drone = Vec3::new(-10.0, 0.0, 4.0);
    // yaw 0 looks along +X; positive pitch tilts the camera down
    let gimbal = EulerAngles::new(0.0, 0.2, 0.0).to_rotation();

    for f in [24.0, 50.0, 120.0] {
        let k = Intrinsics::centered(f, sensor);
        let (fx, fy) = field_of_view(&k);
        println!("f = {f} mm, FoV {:.1}° × {:.1}°", fx.to_degrees(), fy.to_degrees());
        for p in [Vec3::new(0.0, 0.0, 2.0), Vec3::new(0.0, 3.0, 0.0), Vec3::new(-12.0, 0.0, 0.0)] {
            let body = camera::relative_position_in_frame(&gimbal, &drone, &p);
            match project(&k, &body) {
                Ok(px) => {
                    let ray = back_project(&k, &px);
                    let err = (ray - body.normalize()).norm();
                    let tag = if k.contains(&px) { "in frame" } else { "outside" };
                    println!("  {} -> ({:7.1}, {:7.1}) {tag}, ray error {err:.1e}", show(&p), px.u, px.v);
                }
                Err(e) => println!("  {} -> {e}", show(&p)),
            }
        }
    }
}

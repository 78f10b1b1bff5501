//! Solves one receding-horizon problem and prints the plan's cost terms.
//!
//! cargo run --release --example single_plan

use cinewild::harness::experiment1_preset;
use cinewild::plant::forecast_target;
use cinewild::{plan, CostModel, PlanningProblem};

fn main() {
    let s = experiment1_preset();
    let seq = &s.sequences[1];
    let model = CostModel::new(seq.weights, s.ethics, s.camera_sensor);
    let forecast = forecast_target(&s.animal.initial(), s.sim.dt, s.sim.horizon);
    let problem = PlanningProblem {
        drone: s.initial_drone,
        camera: s.initial_camera,
        forecast: &forecast,
        objective: &seq.objective,
        model: &model,
        limits: &s.limits,
        dt: s.sim.dt,
    };
    let p = plan(&problem, &s.solver, None).expect("valid problem");
    println!("zero input {:.2}  sampled {:.2}  refined {:.2}", p.zero_input_cost, p.sampled_cost, p.predicted_cost);
    println!("{:>4} {:>9} {:>9} {:>9} {:>9} {:>9}", "step", "J_prox", "J_soft", "J_im", "J_p", "total");
    for (k, b) in p.breakdowns.iter().enumerate() {
        println!("{:>4} {:>9.3} {:>9.3} {:>9.3} {:>9.3} {:>9.3}", k + 1, b.j_prox, b.j_soft, b.j_im, b.j_p, b.total);
    }
    let (u, c) = p.first();
    println!("first input: accel {:?}, gimbal rate {:?}, zoom {:.2} mm/s", u.accel.as_slice(), u.gimbal_rate.as_slice(), c.focal_rate);
}

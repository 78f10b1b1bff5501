use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::camera;
use crate::costs::{CostModel, EthicsParams, ShotObjective};
use crate::geometry::{distance, relative_rotation, wrap_angle, CameraState, DroneState, TargetState};
use crate::planner::{self, derive_seed, Plan, PlanError, PlanningProblem};
use crate::plant;

use super::metrics::{summarize, RunSummary};
use super::scenario::{AnimalMotion, Mode, Scenario, ScenarioError};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Scenario(#[from] ScenarioError),
    #[error(transparent)]
    Plan(#[from] PlanError),
}

/// One closed-loop step, logged after the first planned input is applied.
///
/// The state columns describe the post-step state at time `t`; `a_norm` and
/// the cost columns belong to the input that produced it. Field order is the
/// CSV column order.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub k: usize,
    pub t: f64,
    pub sequence: usize,
    pub p_d_x: f64,
    pub p_d_y: f64,
    pub p_d_z: f64,
    pub v_d_x: f64,
    pub v_d_y: f64,
    pub v_d_z: f64,
    pub gimbal_roll: f64,
    pub gimbal_pitch: f64,
    pub gimbal_yaw: f64,
    pub f: f64,
    pub p_t_x: f64,
    pub p_t_y: f64,
    pub p_t_z: f64,
    pub heading_roll: f64,
    pub heading_pitch: f64,
    pub heading_yaw: f64,
    pub d_dt: f64,
    /// Target in the filming image; empty when it is behind the camera.
    pub im_t_u: Option<f64>,
    pub im_t_v: Option<f64>,
    pub im_star_u: f64,
    pub im_star_v: f64,
    /// Drone in the animal's eye image; empty when behind the animal.
    pub im_d_u: Option<f64>,
    pub im_d_v: Option<f64>,
    /// `|im_d_u − c_u|`, clipped to the eye image diagonal, which is also
    /// logged when the drone is behind the animal.
    pub im_d_x_cent: f64,
    pub inside_fov: bool,
    pub e_im_x: Option<f64>,
    pub e_im_y: Option<f64>,
    /// Yaw of the residual rotation between the achieved and desired
    /// relative orientation.
    pub e_yaw: f64,
    pub a_norm: f64,
    pub v_norm: f64,
    pub j_prox: f64,
    pub j_fov: f64,
    pub j_soft: f64,
    pub j_im: f64,
    pub j_p: f64,
    pub j_total: f64,
    pub d_ac: f64,
    pub d_sf: f64,
    pub d_vis: f64,
    pub image_width_px: f64,
    pub image_height_px: f64,
    pub eye_width_px: f64,
    pub eye_height_px: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunOutput {
    pub records: Vec<StepRecord>,
    pub summary: RunSummary,
}

/// Builds the logged record for a state. `accel` is the input that led here.
#[allow(clippy::too_many_arguments)]
pub fn record_step(
    k: usize,
    t: f64,
    sequence: usize,
    drone: &DroneState,
    cam: &CameraState,
    target: &TargetState,
    accel: &crate::geometry::Vec3,
    objective: &ShotObjective,
    model: &CostModel,
) -> StepRecord {
    let ethics: &EthicsParams = &model.ethics;
    let eye = ethics.effective_eye();
    let d_dt = distance(&drone.position, &target.position);
    let im_t = model.pixel_of(drone, cam, &target.position);
    let p_td = camera::relative_position_in_frame(&target.heading_rotation(), &target.position, &drone.position);
    let im_d = camera::project(&eye, &p_td).ok();
    let diag = eye.sensor.diagonal_px();
    let im_d_x_cent = im_d.map_or(diag, |p| (p.u - eye.cu).abs().min(diag));
    let r_dt = relative_rotation(&drone.gimbal_rotation(), &target.heading_rotation());
    let e_yaw = wrap_angle(r_dt.compose(&objective.r_star).yaw());
    let cost = model.stage_cost(drone, cam, target, accel, objective);
    let g = drone.gimbal;
    let h = target.heading;
    StepRecord {
        k,
        t,
        sequence,
        p_d_x: drone.position.x,
        p_d_y: drone.position.y,
        p_d_z: drone.position.z,
        v_d_x: drone.velocity.x,
        v_d_y: drone.velocity.y,
        v_d_z: drone.velocity.z,
        gimbal_roll: g.roll,
        gimbal_pitch: g.pitch,
        gimbal_yaw: g.yaw,
        f: cam.focal_length,
        p_t_x: target.position.x,
        p_t_y: target.position.y,
        p_t_z: target.position.z,
        heading_roll: h.roll,
        heading_pitch: h.pitch,
        heading_yaw: h.yaw,
        d_dt,
        im_t_u: im_t.map(|p| p.u),
        im_t_v: im_t.map(|p| p.v),
        im_star_u: objective.im_star.u,
        im_star_v: objective.im_star.v,
        im_d_u: im_d.map(|p| p.u),
        im_d_v: im_d.map(|p| p.v),
        im_d_x_cent,
        inside_fov: camera::visibility(&eye, &p_td, d_dt, ethics.d_vis),
        e_im_x: im_t.map(|p| p.u - objective.im_star.u),
        e_im_y: im_t.map(|p| p.v - objective.im_star.v),
        e_yaw,
        a_norm: accel.norm(),
        v_norm: drone.velocity.norm(),
        j_prox: cost.j_prox,
        j_fov: cost.j_fov,
        j_soft: cost.j_soft,
        j_im: cost.j_im,
        j_p: cost.j_p,
        j_total: cost.total,
        d_ac: ethics.d_ac,
        d_sf: ethics.d_sf,
        d_vis: ethics.d_vis,
        image_width_px: model.sensor.width_px,
        image_height_px: model.sensor.height_px,
        eye_width_px: eye.sensor.width_px,
        eye_height_px: eye.sensor.height_px,
    }
}

/// Runs the scenario in closed loop: each step observes the animal, plans
/// over the horizon, applies the first input and logs the result.
///
/// The per-step solver seed and the perception noise are both derived from
/// `seed`, so a `(scenario, seed)` pair fully determines the output.
pub fn run(scenario: &Scenario, seed: u64) -> Result<RunOutput, HarnessError> {
    scenario.validate()?;
    let scenario = scenario.with_mode(scenario.mode);
    let dt = scenario.sim.dt;
    let horizon = scenario.sim.horizon;
    let limits = &scenario.limits;

    let mut animal = AnimalMotion::new(scenario.animal.clone());
    let mut drone = plant::clamp_drone_state(&scenario.initial_drone, limits);
    let mut cam = plant::clamp_camera_state(&scenario.initial_camera, limits);
    let noise = (scenario.perception_noise > 0.0)
        .then(|| Normal::new(0.0, scenario.perception_noise).expect("validated noise level"));

    let mut records = Vec::with_capacity(scenario.total_steps());
    let mut warm: Option<Plan> = None;
    let mut k = 0usize;
    for (si, (sequence, steps)) in scenario.sequences.iter().zip(scenario.steps_per_sequence()).enumerate() {
        let model = CostModel::new(sequence.weights, sequence.ethics(&scenario.ethics), scenario.camera_sensor);
        let objective = sequence.objective;
        for _ in 0..steps {
            let mut observed = animal.state();
            if let Some(n) = &noise {
                let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, k as u64, 2));
                for c in observed.position.iter_mut() {
                    *c += n.sample(&mut rng);
                }
            }
            let forecast = plant::forecast_target(&observed, dt, horizon);
            let problem = PlanningProblem {
                drone,
                camera: cam,
                forecast: &forecast,
                objective: &objective,
                model: &model,
                limits,
                dt,
            };
            let solver = planner::SolverConfig {
                seed: derive_seed(seed, k as u64, 1),
                ..scenario.solver
            };
            let p = planner::plan(&problem, &solver, warm.as_ref())?;
            let (u_d, u_c) = p.first();
            let (_, _, u_d, u_c) = plant::clamp_to_limits(&drone, &cam, &u_d, &u_c, limits);
            drone = plant::clamp_drone_state(&plant::step_drone(&drone, &u_d, dt), limits);
            cam = plant::clamp_camera_state(&plant::step_camera(&cam, &u_c, dt), limits);
            animal.step(dt);
            warm = Some(p);

            let t = (k + 1) as f64 * dt;
            records.push(record_step(k, t, si, &drone, &cam, &animal.state(), &u_d.accel, &objective, &model));
            k += 1;
        }
    }
    let summary = summarize(&records).expect("validated scenarios produce at least one step");
    Ok(RunOutput { records, summary })
}

/// Convenience: runs `scenario` after switching it to `mode`.
pub fn run_mode(scenario: &Scenario, mode: Mode, seed: u64) -> Result<RunOutput, HarnessError> {
    run(&scenario.with_mode(mode), seed)
}

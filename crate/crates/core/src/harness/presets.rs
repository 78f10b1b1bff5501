//! Ready-made scenarios for the giraffe (proximity) and tiger (visibility)
//! experiments.
//!
//! Values not fixed by the experiment description are marked *invented*:
//! animal speed, initial poses, sequence durations, sensor, framing targets,
//! subject sizes, speed caps and perception noise.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::camera::{Intrinsics, PixelPoint, SensorSpec, SpeciesPreset};
use crate::costs::{CostWeights, EthicsParams, ExtentAxis, ShotObjective, SubjectExtent};
use crate::geometry::{CameraState, DroneState, EulerAngles, Rotation, TargetState, Vec3};
use crate::planner::SolverConfig;
use crate::plant::{Limits, SimConfig};

use super::scenario::{AnimalModel, Mode, Scenario, Sequence};

/// Filming camera: 1280×720 px on a full-frame-width 16:9 sensor (invented).
pub fn drone_sensor() -> SensorSpec {
    SensorSpec::new(1280.0, 720.0, 36.0, 20.25)
}

/// Drone position that puts `target` at pixel `im` when the gimbal has
/// orientation `gimbal` and the target sits `depth` meters along the optical
/// axis.
pub fn framed_position(
    target: &Vec3,
    gimbal: EulerAngles,
    depth: f64,
    focal_mm: f64,
    im: PixelPoint,
    sensor: SensorSpec,
) -> Vec3 {
    let k = Intrinsics::centered(focal_mm, sensor);
    // body frame: X forward, Y left, Z up
    let body = Vec3::new(
        depth,
        -(im.u - k.cu) * depth / (sensor.beta_x() * focal_mm),
        -(im.v - k.cv) * depth / (sensor.beta_y() * focal_mm),
    );
    target - gimbal.to_rotation().apply(&body)
}

/// Focal length giving a subject of `length_m` a span of `px` pixels at `depth`.
pub fn focal_for_extent(length_m: f64, px: f64, depth: f64, beta: f64) -> f64 {
    px * depth / (beta * length_m)
}

fn thirds(sensor: SensorSpec) -> PixelPoint {
    PixelPoint::new(sensor.width_px / 3.0, sensor.height_px / 2.0)
}

fn centered(sensor: SensorSpec) -> PixelPoint {
    PixelPoint::new(sensor.width_px / 2.0, sensor.height_px / 2.0)
}

/// Light sampling budget, since the warm start carries most of the work
/// between steps, plus a terminal relative-velocity term so plans end moving
/// with the animal. Invented values.
pub fn tracking_solver() -> SolverConfig {
    SolverConfig {
        n_samples: 32,
        n_elites: 8,
        n_iterations: 3,
        refine_steps: 8,
        terminal_velocity_weight: 20.0,
        ..SolverConfig::default()
    }
}

/// Giraffe walking at 0.8 m/s; three 20 s sequences: from behind on the
/// thirds line, from its right side, then a zoomed close-up.
pub fn experiment1_preset() -> Scenario {
    let sensor = drone_sensor();
    let giraffe = TargetState {
        position: Vec3::new(0.0, 0.0, 2.5),
        velocity: Vec3::new(0.8, 0.0, 0.0),
        heading: EulerAngles::default(),
    };
    // invented: 5 m tall subject shown 400 px high, then 650 px for the close-up
    let body = |px| SubjectExtent {
        axis: ExtentAxis::Vertical,
        length_m: 5.0,
        desired_px: px,
    };
    let shot = |r_star: Rotation, im_star, px| ShotObjective {
        im_star,
        d_star: 0.0,
        r_star,
        use_d: false,
        use_r: true,
        extent: Some(body(px)),
    };
    let seq = |name: &str, objective| Sequence {
        name: name.to_string(),
        duration: 20.0,
        objective,
        weights: CostWeights::EXPERIMENT_1,
        ethics_overrides: None,
    };

    // starts 10 m behind, inside the acoustic perimeter
    let depth = 10.0;
    let f0 = focal_for_extent(5.0, 400.0, depth, sensor.beta_y());
    let gimbal = EulerAngles::default();
    let mut drone = DroneState::at_rest(
        framed_position(&giraffe.position, gimbal, depth, f0, thirds(sensor), sensor),
        gimbal,
    );
    drone.velocity = giraffe.velocity;

    Scenario {
        name: "experiment1-giraffe".to_string(),
        mode: Mode::Cinewild,
        sim: SimConfig::default(),
        // invented: filming speed cap. At full speed a fast reframing swings the
        // drone wide, and nothing in this cost brings it back in.
        limits: Limits {
            v_max: 4.0,
            ..Limits::default()
        },
        solver: tracking_solver(),
        ethics: EthicsParams::new(20.0, 5.0, 12.0, SpeciesPreset::Lateral.eye()),
        camera_sensor: sensor,
        animal: AnimalModel::ConstantVelocity { initial: giraffe },
        sequences: vec![
            seq("behind", shot(Rotation::identity(), thirds(sensor), 400.0)),
            seq("right-side", shot(Rotation::about_z(FRAC_PI_2), thirds(sensor), 400.0)),
            seq("close-up", shot(Rotation::about_z(FRAC_PI_2), centered(sensor), 650.0)),
        ],
        initial_drone: drone,
        initial_camera: CameraState { focal_length: f0 },
        perception_noise: 0.05,
    }
}

/// Stationary tiger filmed from the front: free zoom at 10 m, a 1 m wide
/// subject held at a fixed size at 10 m, then 15 m beyond the visibility range.
pub fn experiment2_preset() -> Scenario {
    let sensor = drone_sensor();
    let tiger = TargetState {
        position: Vec3::new(0.0, 0.0, 1.0),
        velocity: Vec3::zeros(),
        heading: EulerAngles::default(),
    };
    let frontal = Rotation::about_z(PI);
    let shot = |d_star, extent| ShotObjective {
        im_star: thirds(sensor),
        d_star,
        r_star: frontal,
        use_d: true,
        use_r: true,
        extent,
    };
    let seq = |name: &str, objective| Sequence {
        name: name.to_string(),
        duration: 20.0,
        objective,
        weights: CostWeights::EXPERIMENT_2,
        ethics_overrides: None,
    };
    // invented: 1 m flank-to-flank width shown at 1/9 of the frame width
    let width = SubjectExtent {
        axis: ExtentAxis::Lateral,
        length_m: 1.0,
        desired_px: sensor.width_px / 9.0,
    };

    // starts 10 m ahead and visible to the tiger
    let f0 = 38.0;
    let gimbal = EulerAngles::from_yaw(PI);
    let drone = DroneState::at_rest(
        framed_position(&tiger.position, gimbal, 10.0, f0, thirds(sensor), sensor),
        gimbal,
    );

    Scenario {
        name: "experiment2-tiger".to_string(),
        mode: Mode::Cinewild,
        sim: SimConfig::default(),
        limits: Limits::default(),
        solver: tracking_solver(),
        // d_ac and d_sf are unused here (w_prox = 0) but must be well formed
        ethics: EthicsParams::new(20.0, 5.0, 12.0, SpeciesPreset::Tiger.eye()),
        camera_sensor: sensor,
        animal: AnimalModel::Stationary { initial: tiger },
        sequences: vec![
            seq("exit-fov", shot(10.0, None)),
            seq("screen-presence", shot(10.0, Some(width))),
            seq("distant", shot(15.0, None)),
        ],
        initial_drone: drone,
        initial_camera: CameraState { focal_length: f0 },
        // exact perception: the cheapest unseen spot sits on the edge of the
        // animal's view, and any jitter keeps pushing the drone back inside
        perception_noise: 0.0,
    }
}

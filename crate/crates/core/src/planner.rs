//! Receding-horizon planner.
//!
//! The decision vector is the flattened input sequence, seven numbers per
//! step: `[ax, ay, az, roll_rate, pitch_rate, yaw_rate, focal_rate]`. A
//! cross-entropy search over Gaussian samples finds a good basin, then a
//! projected Levenberg–Marquardt descent on finite-difference Jacobians of the
//! stage residuals polishes it.
//!
//! Stage convention: a rollout of `N` inputs scores the `N` post-step states,
//! each together with the acceleration that produced it. The terms of the
//! starting state do not depend on the inputs and are left out.
//!
//! The planner may add a terminal term, `w·‖v_d − v_t‖²` on the last state,
//! so a plan has to end moving with the subject. Without it, any direction in
//! which the stage cost is flat lets the drone keep whatever momentum it has.

use nalgebra::{DMatrix, DVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::costs::{CostBreakdown, CostModel, ShotObjective, RESIDUALS_PER_STAGE};
use crate::geometry::{CameraInput, CameraState, DroneInput, DroneState, TargetState, Vec3};
use crate::plant::{self, Limits};

/// Inputs per horizon step in the flattened decision vector.
pub const INPUT_DIM: usize = 7;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PlanError {
    #[error("invalid planner configuration: {0}")]
    InvalidConfig(String),
}

/// Per-channel scale used for sampling spread and for preconditioning the
/// refinement.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputScale {
    pub accel: f64,
    pub gimbal_rate: f64,
    pub focal_rate: f64,
}

impl InputScale {
    fn channel(&self, i: usize) -> f64 {
        match i % INPUT_DIM {
            0..=2 => self.accel,
            3..=5 => self.gimbal_rate,
            _ => self.focal_rate,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub n_samples: usize,
    pub n_elites: usize,
    pub n_iterations: usize,
    pub init_stddev: InputScale,
    /// Sampling spread never shrinks below this fraction of `init_stddev`.
    pub min_stddev_fraction: f64,
    pub refine_steps: usize,
    /// Initial Levenberg–Marquardt damping.
    pub refine_damping: f64,
    /// Central-difference perturbation used during refinement.
    pub fd_step: f64,
    /// Weight of the terminal relative-velocity term; 0 disables it.
    pub terminal_velocity_weight: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n_samples: 256,
            n_elites: 32,
            n_iterations: 8,
            init_stddev: InputScale {
                accel: 1.0,
                gimbal_rate: 0.3,
                focal_rate: 10.0,
            },
            min_stddev_fraction: 0.05,
            refine_steps: 20,
            refine_damping: 1e-3,
            fd_step: 1e-4,
            terminal_velocity_weight: 0.0,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), PlanError> {
        let bad = |m: &str| Err(PlanError::InvalidConfig(m.to_string()));
        if self.n_samples == 0 || self.n_elites == 0 || self.n_iterations == 0 {
            return bad("n_samples, n_elites and n_iterations must be at least 1");
        }
        if self.n_elites > self.n_samples {
            return bad("n_elites cannot exceed n_samples");
        }
        let s = self.init_stddev;
        if ![s.accel, s.gimbal_rate, s.focal_rate].iter().all(|v| v.is_finite() && *v > 0.0) {
            return bad("init_stddev entries must be positive");
        }
        if !(self.fd_step > 0.0 && self.refine_damping > 0.0) {
            return bad("fd_step and refine_damping must be positive");
        }
        if !(self.min_stddev_fraction >= 0.0 && self.terminal_velocity_weight >= 0.0) {
            return bad("min_stddev_fraction and terminal_velocity_weight cannot be negative");
        }
        Ok(())
    }
}

/// One receding-horizon problem instance.
#[derive(Clone, Copy, Debug)]
pub struct PlanningProblem<'a> {
    pub drone: DroneState,
    pub camera: CameraState,
    /// Target states at steps `1..=N`; its length sets the horizon.
    pub forecast: &'a [TargetState],
    pub objective: &'a ShotObjective,
    pub model: &'a CostModel,
    pub limits: &'a Limits,
    pub dt: f64,
}

fn unpack(chunk: &[f64]) -> (DroneInput, CameraInput) {
    (
        DroneInput {
            accel: Vec3::new(chunk[0], chunk[1], chunk[2]),
            gimbal_rate: Vec3::new(chunk[3], chunk[4], chunk[5]),
        },
        CameraInput { focal_rate: chunk[6] },
    )
}

fn pack(d: &DroneInput, c: &CameraInput, out: &mut [f64]) {
    out[..3].copy_from_slice(d.accel.as_slice());
    out[3..6].copy_from_slice(d.gimbal_rate.as_slice());
    out[6] = c.focal_rate;
}

pub fn flatten(drone_inputs: &[DroneInput], camera_inputs: &[CameraInput]) -> Vec<f64> {
    let mut flat = vec![0.0; drone_inputs.len() * INPUT_DIM];
    for ((d, c), chunk) in drone_inputs.iter().zip(camera_inputs).zip(flat.chunks_mut(INPUT_DIM)) {
        pack(d, c, chunk);
    }
    flat
}

pub fn unflatten(flat: &[f64]) -> (Vec<DroneInput>, Vec<CameraInput>) {
    flat.chunks(INPUT_DIM).map(unpack).unzip()
}

impl PlanningProblem<'_> {
    pub fn horizon(&self) -> usize {
        self.forecast.len()
    }

    pub fn dimension(&self) -> usize {
        self.horizon() * INPUT_DIM
    }

    /// Walks the plant forward, calling `visit` with each post-step state,
    /// its target and the applied acceleration.
    fn walk(&self, flat: &[f64], mut visit: impl FnMut(&DroneState, &CameraState, &TargetState, &Vec3)) {
        assert_eq!(flat.len(), self.dimension(), "input length does not match the forecast horizon");
        let (mut x_d, mut x_c) = (self.drone, self.camera);
        for (chunk, target) in flat.chunks(INPUT_DIM).zip(self.forecast) {
            let (u_d, u_c) = unpack(chunk);
            let (_, _, u_d, u_c) = plant::clamp_to_limits(&x_d, &x_c, &u_d, &u_c, self.limits);
            x_d = plant::clamp_drone_state(&plant::step_drone(&x_d, &u_d, self.dt), self.limits);
            x_c = plant::clamp_camera_state(&plant::step_camera(&x_c, &u_c, self.dt), self.limits);
            visit(&x_d, &x_c, target, &u_d.accel);
        }
    }

    fn simulate(&self, flat: &[f64], mut visit: impl FnMut(CostBreakdown)) {
        self.walk(flat, |x_d, x_c, target, accel| visit(self.model.stage_cost(x_d, x_c, target, accel, self.objective)));
    }

    pub fn cost(&self, flat: &[f64]) -> f64 {
        let mut total = 0.0;
        self.simulate(flat, |b| total += b.total);
        total
    }

    pub fn breakdowns(&self, flat: &[f64]) -> (f64, Vec<CostBreakdown>) {
        let mut out = Vec::with_capacity(self.horizon());
        let mut total = 0.0;
        self.simulate(flat, |b| {
            total += b.total;
            out.push(b);
        });
        (total, out)
    }

    /// Stacked per-stage residuals; their squares sum to [`Self::cost`].
    pub fn residuals(&self, flat: &[f64]) -> Vec<f64> {
        self.objective_residuals(flat, 0.0)
    }

    /// Stage cost plus the terminal term weighted by `w`.
    pub fn objective(&self, flat: &[f64], w: f64) -> f64 {
        let mut total = 0.0;
        let mut last = Vec3::zeros();
        self.walk(flat, |x_d, x_c, target, accel| {
            total += self.model.stage_cost(x_d, x_c, target, accel, self.objective).total;
            last = x_d.velocity - target.velocity;
        });
        total + w * last.norm_squared()
    }

    /// Residuals whose squares sum to [`Self::objective`]; with `w > 0` the
    /// last three are the weighted terminal velocity error.
    fn objective_residuals(&self, flat: &[f64], w: f64) -> Vec<f64> {
        let stages = self.horizon() * RESIDUALS_PER_STAGE;
        let mut out = vec![0.0; stages + if w > 0.0 { 3 } else { 0 }];
        let (stage_part, terminal) = out.split_at_mut(stages);
        let mut chunks = stage_part.chunks_mut(RESIDUALS_PER_STAGE);
        let mut last = Vec3::zeros();
        self.walk(flat, |x_d, x_c, target, accel| {
            let chunk = chunks.next().expect("one chunk per stage");
            self.model.stage_residuals(x_d, x_c, target, accel, self.objective, chunk);
            last = x_d.velocity - target.velocity;
        });
        if w > 0.0 {
            terminal.copy_from_slice((last * w.sqrt()).as_slice());
        }
        out
    }

    /// Clamps every step's inputs onto the input limits.
    pub fn project(&self, flat: &mut [f64]) {
        for chunk in flat.chunks_mut(INPUT_DIM) {
            let (d, c) = unpack(chunk);
            let d = plant::clamp_drone_input(&d, self.limits);
            let c = plant::clamp_camera_input(&c, self.limits);
            pack(&d, &c, chunk);
        }
    }
}

/// Total horizon cost and per-stage breakdowns of an input sequence.
pub fn rollout_cost(
    problem: &PlanningProblem<'_>,
    drone_inputs: &[DroneInput],
    camera_inputs: &[CameraInput],
) -> (f64, Vec<CostBreakdown>) {
    assert_eq!(drone_inputs.len(), camera_inputs.len(), "input sequences differ in length");
    problem.breakdowns(&flatten(drone_inputs, camera_inputs))
}

/// Central-difference gradient of the horizon cost with respect to the
/// flattened inputs.
pub fn finite_difference_gradient(problem: &PlanningProblem<'_>, flat: &[f64], h: f64) -> Vec<f64> {
    assert!(h > 0.0, "perturbation must be positive");
    (0..flat.len())
        .into_par_iter()
        .map(|i| {
            let mut x = flat.to_vec();
            x[i] = flat[i] + h;
            let up = problem.cost(&x);
            x[i] = flat[i] - h;
            let down = problem.cost(&x);
            (up - down) / (2.0 * h)
        })
        .collect()
}

/// Output of one planning call.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Plan {
    pub drone_inputs: Vec<DroneInput>,
    pub camera_inputs: Vec<CameraInput>,
    /// Planner objective: the stage costs plus any terminal term.
    pub predicted_cost: f64,
    pub breakdowns: Vec<CostBreakdown>,
    /// Best cost seen after each sampling iteration.
    pub iteration_trace: Vec<f64>,
    /// Best cost before refinement.
    pub sampled_cost: f64,
    /// Cost of holding every input at zero.
    pub zero_input_cost: f64,
}

impl Plan {
    /// Drops the first step and repeats the last one.
    pub fn shifted(&self) -> (Vec<DroneInput>, Vec<CameraInput>) {
        let shift = |n: usize| (1..=n).map(move |i| i.min(n - 1));
        let n = self.drone_inputs.len();
        (
            shift(n).map(|i| self.drone_inputs[i]).collect(),
            shift(n).map(|i| self.camera_inputs[i]).collect(),
        )
    }

    pub fn first(&self) -> (DroneInput, CameraInput) {
        (self.drone_inputs[0], self.camera_inputs[0])
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Mixes a base seed with stream coordinates into an independent seed.
pub fn derive_seed(seed: u64, a: u64, b: u64) -> u64 {
    splitmix64(splitmix64(seed ^ splitmix64(a)) ^ b.wrapping_mul(0xD6E8_FEB8_6659_FD93))
}

fn sample_rng(seed: u64, iteration: usize, index: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, iteration as u64, index as u64))
}

/// Minimizes the horizon cost. `warm` is a previous plan, shifted by one step
/// before use.
pub fn plan(problem: &PlanningProblem<'_>, solver: &SolverConfig, warm: Option<&Plan>) -> Result<Plan, PlanError> {
    solver.validate()?;
    if problem.horizon() == 0 {
        return Err(PlanError::InvalidConfig("horizon must be at least 1".into()));
    }
    if !(problem.dt > 0.0 && problem.dt.is_finite()) {
        return Err(PlanError::InvalidConfig(format!("dt must be positive, got {}", problem.dt)));
    }
    let dim = problem.dimension();
    let scale: Vec<f64> = (0..dim).map(|i| solver.init_stddev.channel(i)).collect();

    let w = solver.terminal_velocity_weight;
    let zero = vec![0.0; dim];
    let zero_cost = problem.objective(&zero, w);

    let mut mean = match warm {
        Some(p) if p.drone_inputs.len() == problem.horizon() => {
            let (d, c) = p.shifted();
            flatten(&d, &c)
        }
        _ => zero.clone(),
    };
    problem.project(&mut mean);

    let (mut best, mut best_cost) = (zero, zero_cost);
    let mean_cost = problem.objective(&mean, w);
    if mean_cost < best_cost {
        best = mean.clone();
        best_cost = mean_cost;
    }

    let mut std = scale.clone();
    let mut trace = Vec::with_capacity(solver.n_iterations);
    for it in 0..solver.n_iterations {
        let scored: Vec<(f64, Vec<f64>)> = (0..solver.n_samples)
            .into_par_iter()
            .map(|idx| {
                let mut x = mean.clone();
                if idx > 0 {
                    let mut rng = sample_rng(solver.seed, it, idx);
                    for (xi, si) in x.iter_mut().zip(&std) {
                        let z: f64 = StandardNormal.sample(&mut rng);
                        *xi += si * z;
                    }
                    problem.project(&mut x);
                }
                (problem.objective(&x, w), x)
            })
            .collect();

        let mut order: Vec<usize> = (0..scored.len()).collect();
        order.sort_by(|&a, &b| scored[a].0.total_cmp(&scored[b].0).then(a.cmp(&b)));
        let elites = &order[..solver.n_elites];

        if scored[elites[0]].0 < best_cost {
            best_cost = scored[elites[0]].0;
            best = scored[elites[0]].1.clone();
        }
        trace.push(best_cost);

        let k = elites.len() as f64;
        for i in 0..dim {
            let m = elites.iter().map(|&e| scored[e].1[i]).sum::<f64>() / k;
            let var = elites.iter().map(|&e| (scored[e].1[i] - m).powi(2)).sum::<f64>() / k;
            mean[i] = m;
            std[i] = var.sqrt().max(solver.min_stddev_fraction * scale[i]);
        }
    }
    let sampled_cost = best_cost;

    let (x, predicted_cost) = refine(problem, solver, &scale, best, best_cost);
    let (drone_inputs, camera_inputs) = unflatten(&x);
    let (_, breakdowns) = problem.breakdowns(&x);
    debug_assert!(predicted_cost <= zero_cost, "plan worse than zero input");
    debug_assert!(predicted_cost <= sampled_cost);

    Ok(Plan {
        drone_inputs,
        camera_inputs,
        predicted_cost,
        breakdowns,
        iteration_trace: trace,
        sampled_cost,
        zero_input_cost: zero_cost,
    })
}

/// Levenberg–Marquardt on the stage residuals in coordinates scaled by
/// `scale`. The Jacobian comes from central differences; steps are projected
/// onto the input limits and only strict improvements are accepted.
fn refine(problem: &PlanningProblem<'_>, solver: &SolverConfig, scale: &[f64], mut x: Vec<f64>, mut cost: f64) -> (Vec<f64>, f64) {
    let n = x.len();
    let w = solver.terminal_velocity_weight;
    let mut r = problem.objective_residuals(&x, w);
    let m = r.len();
    let mut lambda = solver.refine_damping;
    for _ in 0..solver.refine_steps {
        let cols: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let h = solver.fd_step;
                let mut xp = x.clone();
                xp[i] += h;
                let up = problem.objective_residuals(&xp, w);
                xp[i] = x[i] - h;
                let down = problem.objective_residuals(&xp, w);
                up.iter().zip(&down).map(|(a, b)| (a - b) / (2.0 * h) * scale[i]).collect()
            })
            .collect();
        let jac = DMatrix::from_fn(m, n, |row, col| cols[col][row]);
        let jtj = jac.transpose() * &jac;
        let grad = jac.transpose() * DVector::from_column_slice(&r);
        if !(grad.norm() > 1e-12) {
            break;
        }
        let mut accepted = false;
        for _ in 0..10 {
            let mut a = jtj.clone();
            for i in 0..n {
                a[(i, i)] += lambda * (jtj[(i, i)] + 1e-9) + 1e-12;
            }
            let Some(chol) = a.cholesky() else {
                lambda *= 10.0;
                continue;
            };
            let delta = chol.solve(&(-&grad));
            let mut trial: Vec<f64> = x.iter().zip(delta.iter()).zip(scale).map(|((xi, di), si)| xi + di * si).collect();
            problem.project(&mut trial);
            let c = problem.objective(&trial, w);
            if c < cost {
                x = trial;
                cost = c;
                r = problem.objective_residuals(&x, w);
                lambda = (lambda / 3.0).max(1e-9);
                accepted = true;
                break;
            }
            lambda *= 4.0;
        }
        if !accepted {
            break;
        }
    }
    (x, cost)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::camera::{PixelPoint, SensorSpec, SpeciesPreset};
    use crate::costs::{CostWeights, EthicsParams};
    use crate::geometry::{EulerAngles, Rotation};

    fn sensor() -> SensorSpec {
        SensorSpec::new(1280.0, 720.0, 36.0, 20.25)
    }

    fn ethics() -> EthicsParams {
        EthicsParams::new(20.0, 5.0, 12.0, SpeciesPreset::Tiger.eye())
    }

    fn objective() -> ShotObjective {
        ShotObjective {
            im_star: PixelPoint::new(640.0, 360.0),
            d_star: 10.0,
            r_star: Rotation::identity(),
            use_d: true,
            use_r: true,
            extent: None,
        }
    }

    fn still_target() -> TargetState {
        TargetState { position: Vec3::new(0.0, 0.0, 2.0), velocity: Vec3::zeros(), heading: EulerAngles::default() }
    }

    fn small_solver() -> SolverConfig {
        SolverConfig { n_samples: 64, n_elites: 8, n_iterations: 4, refine_steps: 10, ..Default::default() }
    }

    #[test]
    fn flatten_round_trip() {
        let d = vec![DroneInput { accel: Vec3::new(1.0, 2.0, 3.0), gimbal_rate: Vec3::new(4.0, 5.0, 6.0) }; 2];
        let c = vec![CameraInput { focal_rate: 7.0 }, CameraInput { focal_rate: -1.0 }];
        let flat = flatten(&d, &c);
        assert_eq!(&flat[..7], &[1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0]);
        assert_eq!(unflatten(&flat), (d, c));
    }

    #[test]
    fn rollout_examples() {
        let lim = Limits::default();
        let obj = objective();
        let targets = vec![still_target(); 3];
        let drone = DroneState::at_rest(Vec3::new(-10.0, 0.0, 2.0), EulerAngles::default());
        let camera = CameraState { focal_length: 35.0 };

        let zero_model = CostModel::new(CostWeights::default(), ethics(), sensor());
        let p = PlanningProblem { drone, camera, forecast: &targets, objective: &obj, model: &zero_model, limits: &lim, dt: 0.2 };
        let d = vec![DroneInput { accel: Vec3::new(2.0, -1.0, 0.5), gimbal_rate: Vec3::new(0.3, 0.0, 0.1) }; 3];
        let c = vec![CameraInput { focal_rate: 4.0 }; 3];
        assert_eq!(rollout_cost(&p, &d, &c).0, 0.0);

        let soft = CostModel::new(CostWeights { w_soft: 10.0, ..Default::default() }, ethics(), sensor());
        let one = &targets[..1];
        let p1 = PlanningProblem { forecast: one, model: &soft, ..p };
        let a = vec![DroneInput { accel: Vec3::new(1.0, 1.0, 1.0), ..Default::default() }];
        let (total, parts) = rollout_cost(&p1, &a, &[CameraInput::default()]);
        assert!((total - 30.0).abs() < 1e-12);
        assert_eq!(parts.len(), 1);

        // static scene, zero inputs: constant stage cost
        let prox = CostModel::new(CostWeights { w_prox: 15.0, ..Default::default() }, ethics(), sensor());
        let short = vec![still_target(); 4];
        let long = vec![still_target(); 8];
        let ps = PlanningProblem { forecast: &short, model: &prox, ..p };
        let pl = PlanningProblem { forecast: &long, model: &prox, ..p };
        let cs = ps.cost(&vec![0.0; 4 * INPUT_DIM]);
        let cl = pl.cost(&vec![0.0; 8 * INPUT_DIM]);
        assert!((cl - 2.0 * cs).abs() < 1e-9);
    }

    #[test]
    fn gradient_examples() {
        let lim = Limits::default();
        let obj = objective();
        let targets = vec![still_target(); 4];
        let drone = DroneState::at_rest(Vec3::new(-10.0, 0.0, 2.0), EulerAngles::default());
        let camera = CameraState { focal_length: 35.0 };
        let zero = CostModel::new(CostWeights::default(), ethics(), sensor());
        let p = PlanningProblem { drone, camera, forecast: &targets, objective: &obj, model: &zero, limits: &lim, dt: 0.2 };
        let x: Vec<f64> = (0..p.dimension()).map(|i| (i as f64 * 0.37).sin()).collect();
        assert!(finite_difference_gradient(&p, &x, 1e-4).iter().all(|g| *g == 0.0));

        let soft = CostModel::new(CostWeights { w_soft: 10.0, ..Default::default() }, ethics(), sensor());
        let ps = PlanningProblem { model: &soft, ..p };
        let g = finite_difference_gradient(&ps, &x, 1e-4);
        for (i, gi) in g.iter().enumerate() {
            let expected = if i % INPUT_DIM < 3 { 2.0 * 10.0 * x[i] } else { 0.0 };
            assert!((gi - expected).abs() < 1e-6, "coordinate {i}: {gi} vs {expected}");
        }
    }

    #[test]
    fn rejects_degenerate_configs() {
        let lim = Limits::default();
        let obj = objective();
        let model = CostModel::new(CostWeights::default(), ethics(), sensor());
        let drone = DroneState::at_rest(Vec3::zeros(), EulerAngles::default());
        let camera = CameraState { focal_length: 35.0 };
        let empty: Vec<TargetState> = vec![];
        let p = PlanningProblem { drone, camera, forecast: &empty, objective: &obj, model: &model, limits: &lim, dt: 0.2 };
        assert!(matches!(plan(&p, &SolverConfig::default(), None), Err(PlanError::InvalidConfig(_))));
        let targets = vec![still_target(); 3];
        let p = PlanningProblem { forecast: &targets, ..p };
        let bad = SolverConfig { n_samples: 0, ..Default::default() };
        assert!(plan(&p, &bad, None).is_err());
        let bad = SolverConfig { n_elites: 300, ..Default::default() };
        assert!(plan(&p, &bad, None).is_err());
    }

    #[test]
    fn plan_invariants_hold() {
        let lim = Limits::default();
        let obj = ShotObjective { im_star: PixelPoint::new(426.0, 360.0), ..objective() };
        let model = CostModel::new(CostWeights::EXPERIMENT_1, ethics(), sensor());
        let target = TargetState { velocity: Vec3::new(0.8, 0.0, 0.0), ..still_target() };
        let targets = crate::plant::forecast_target(&target, 0.2, 10);
        let drone = DroneState::at_rest(Vec3::new(-12.0, 1.0, 2.0), EulerAngles::from_yaw(0.1));
        let camera = CameraState { focal_length: 40.0 };
        let p = PlanningProblem { drone, camera, forecast: &targets, objective: &obj, model: &model, limits: &lim, dt: 0.2 };
        let solver = small_solver();
        let out = plan(&p, &solver, None).unwrap();

        assert_eq!(out.drone_inputs.len(), 10);
        for (d, c) in out.drone_inputs.iter().zip(&out.camera_inputs) {
            assert!(d.accel.norm() <= lim.a_max + 1e-12);
            assert!(d.gimbal_rate.iter().all(|w| w.abs() <= lim.omega_max));
            assert!(c.focal_rate.abs() <= lim.v_f_max);
        }
        let (resim, _) = rollout_cost(&p, &out.drone_inputs, &out.camera_inputs);
        assert!((resim - out.predicted_cost).abs() <= 1e-9);
        assert!(out.predicted_cost <= out.zero_input_cost);
        assert!(out.predicted_cost <= out.sampled_cost);
        assert!(out.iteration_trace.windows(2).all(|w| w[1] <= w[0]));

        let again = plan(&p, &solver, None).unwrap();
        assert_eq!(out, again);

        let warm = plan(&p, &solver, Some(&out)).unwrap();
        assert!(warm.predicted_cost <= warm.zero_input_cost);
    }

    #[test]
    fn terminal_term_matches_residuals() {
        let lim = Limits::default();
        let obj = objective();
        let model = CostModel::new(CostWeights::EXPERIMENT_2, ethics(), sensor());
        let target = TargetState { velocity: Vec3::new(0.8, 0.0, 0.0), ..still_target() };
        let targets = crate::plant::forecast_target(&target, 0.2, 6);
        let mut drone = DroneState::at_rest(Vec3::new(-9.0, 2.0, 2.5), EulerAngles::from_yaw(0.2));
        drone.velocity = Vec3::new(1.5, -0.5, 0.2);
        let camera = CameraState { focal_length: 30.0 };
        let p = PlanningProblem { drone, camera, forecast: &targets, objective: &obj, model: &model, limits: &lim, dt: 0.2 };
        let x: Vec<f64> = (0..p.dimension()).map(|i| (i as f64 * 0.61).cos() * 0.3).collect();
        assert_eq!(p.objective(&x, 0.0), p.cost(&x));
        for w in [0.5, 20.0] {
            let r = p.objective_residuals(&x, w);
            let sq: f64 = r.iter().map(|v| v * v).sum();
            assert!((sq - p.objective(&x, w)).abs() <= 1e-9 * sq.max(1.0));
        }
    }

    #[test]
    fn terminal_term_brakes_relative_motion() {
        // nothing but the terminal term: the plan must end moving with the target
        let lim = Limits::default();
        let obj = objective();
        let model = CostModel::new(CostWeights::default(), ethics(), sensor());
        let target = TargetState { velocity: Vec3::new(0.8, 0.0, 0.0), ..still_target() };
        let targets = crate::plant::forecast_target(&target, 0.2, 10);
        let mut drone = DroneState::at_rest(Vec3::new(-20.0, 0.0, 3.0), EulerAngles::default());
        drone.velocity = Vec3::new(-2.0, 1.0, 0.0);
        let camera = CameraState { focal_length: 35.0 };
        let p = PlanningProblem { drone, camera, forecast: &targets, objective: &obj, model: &model, limits: &lim, dt: 0.2 };
        let solver = SolverConfig { terminal_velocity_weight: 10.0, ..small_solver() };
        let out = plan(&p, &solver, None).unwrap();
        assert!(out.predicted_cost < 1e-3 * out.zero_input_cost, "{} vs {}", out.predicted_cost, out.zero_input_cost);
        // the stage costs are all zero here, the terminal term is not
        assert!(out.breakdowns.iter().all(|b| b.total == 0.0));
    }

    #[test]
    fn shifted_repeats_last_step() {
        let d: Vec<DroneInput> = (0..3).map(|i| DroneInput { accel: Vec3::new(i as f64, 0.0, 0.0), ..Default::default() }).collect();
        let c: Vec<CameraInput> = (0..3).map(|i| CameraInput { focal_rate: i as f64 }).collect();
        let p = Plan {
            drone_inputs: d,
            camera_inputs: c,
            predicted_cost: 0.0,
            breakdowns: vec![],
            iteration_trace: vec![],
            sampled_cost: 0.0,
            zero_input_cost: 0.0,
        };
        let (d, c) = p.shifted();
        assert_eq!(d.iter().map(|x| x.accel.x).collect::<Vec<_>>(), vec![1.0, 2.0, 2.0]);
        assert_eq!(c.iter().map(|x| x.focal_rate).collect::<Vec<_>>(), vec![1.0, 2.0, 2.0]);
    }
}

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::camera::SensorSpec;
use crate::costs::{CostWeights, EthicsParams, ShotObjective};
use crate::geometry::{CameraState, DroneState, EulerAngles, TargetState, Vec3};
use crate::planner::SolverConfig;
use crate::plant::{Limits, SimConfig};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("invalid scenario field `{field}`: {message}")]
pub struct ScenarioError {
    pub field: String,
    pub message: String,
}

impl ScenarioError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        ScenarioError {
            field: field.into(),
            message: message.into(),
        }
    }
}

/// Which controller variant runs the scenario.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    #[default]
    Cinewild,
    /// Same optimizer with the proximity, visibility and smoothness terms off.
    Baseline,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mode::Cinewild => "cinewild",
            Mode::Baseline => "baseline",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Waypoint {
    pub position: Vec3,
    /// Travel speed toward this waypoint (m/s).
    pub speed: f64,
}

/// How the animal moves during a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AnimalModel {
    Stationary { initial: TargetState },
    ConstantVelocity { initial: TargetState },
    /// Walks the waypoints in order, facing the direction of travel, and
    /// stops at the last one.
    Waypoints { initial: TargetState, waypoints: Vec<Waypoint> },
}

impl AnimalModel {
    pub fn initial(&self) -> TargetState {
        match self {
            AnimalModel::Stationary { initial }
            | AnimalModel::ConstantVelocity { initial }
            | AnimalModel::Waypoints { initial, .. } => *initial,
        }
    }
}

/// Stateful playback of an [`AnimalModel`].
#[derive(Clone, Debug)]
pub struct AnimalMotion {
    model: AnimalModel,
    state: TargetState,
    next_waypoint: usize,
}

impl AnimalMotion {
    pub fn new(model: AnimalModel) -> Self {
        let mut state = model.initial();
        if let AnimalModel::Stationary { .. } = model {
            state.velocity = Vec3::zeros();
        }
        let mut motion = AnimalMotion {
            model,
            state,
            next_waypoint: 0,
        };
        motion.aim();
        motion
    }

    pub fn state(&self) -> TargetState {
        self.state
    }

    // Points velocity and heading at the current waypoint.
    fn aim(&mut self) {
        if let AnimalModel::Waypoints { waypoints, .. } = &self.model {
            match waypoints.get(self.next_waypoint) {
                Some(wp) => {
                    let delta = wp.position - self.state.position;
                    let dist = delta.norm();
                    if dist > 1e-9 {
                        self.state.velocity = delta * (wp.speed / dist);
                        self.state.heading = EulerAngles::new(0.0, 0.0, delta.y.atan2(delta.x));
                    } else {
                        self.state.velocity = Vec3::zeros();
                    }
                }
                None => self.state.velocity = Vec3::zeros(),
            }
        }
    }

    pub fn step(&mut self, dt: f64) {
        match &self.model {
            AnimalModel::Stationary { .. } => {}
            AnimalModel::ConstantVelocity { .. } => {
                self.state.position += self.state.velocity * dt;
            }
            AnimalModel::Waypoints { waypoints, .. } => {
                let waypoints = waypoints.clone();
                let mut remaining = dt;
                while remaining > 0.0 {
                    let Some(wp) = waypoints.get(self.next_waypoint) else {
                        break;
                    };
                    let delta = wp.position - self.state.position;
                    let dist = delta.norm();
                    let reach = wp.speed * remaining;
                    if wp.speed <= 0.0 {
                        break;
                    }
                    if reach >= dist {
                        self.state.position = wp.position;
                        remaining -= dist / wp.speed;
                        self.next_waypoint += 1;
                        self.aim();
                    } else {
                        self.state.position += delta * (reach / dist);
                        remaining = 0.0;
                    }
                }
                self.aim();
            }
        }
    }
}

/// Optional per-sequence replacements for the scenario's ethics thresholds.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EthicsOverrides {
    pub d_ac: Option<f64>,
    pub d_sf: Option<f64>,
    pub d_vis: Option<f64>,
    pub w_ac: Option<f64>,
    pub w_sf: Option<f64>,
}

impl EthicsOverrides {
    pub fn apply(&self, base: &EthicsParams) -> EthicsParams {
        EthicsParams {
            d_ac: self.d_ac.unwrap_or(base.d_ac),
            d_sf: self.d_sf.unwrap_or(base.d_sf),
            d_vis: self.d_vis.unwrap_or(base.d_vis),
            w_ac: self.w_ac.unwrap_or(base.w_ac),
            w_sf: self.w_sf.unwrap_or(base.w_sf),
            ..*base
        }
    }
}

/// One block of the shot list: objective and weights held for `duration`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Sequence {
    #[serde(default)]
    pub name: String,
    pub duration: f64,
    pub objective: ShotObjective,
    pub weights: CostWeights,
    #[serde(default)]
    pub ethics_overrides: Option<EthicsOverrides>,
}

impl Sequence {
    pub fn ethics(&self, base: &EthicsParams) -> EthicsParams {
        self.ethics_overrides.map_or(*base, |o| o.apply(base))
    }
}

/// A complete, self-describing experiment configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default)]
    pub sim: SimConfig,
    #[serde(default)]
    pub limits: Limits,
    #[serde(default)]
    pub solver: SolverConfig,
    pub ethics: EthicsParams,
    /// Sensor of the drone's filming camera.
    pub camera_sensor: SensorSpec,
    pub animal: AnimalModel,
    pub sequences: Vec<Sequence>,
    pub initial_drone: DroneState,
    pub initial_camera: CameraState,
    /// Standard deviation (m) of Gaussian noise on the observed animal position.
    #[serde(default)]
    pub perception_noise: f64,
}

impl Scenario {
    /// Steps per sequence, `round(duration / dt)`.
    pub fn steps_per_sequence(&self) -> Vec<usize> {
        self.sequences
            .iter()
            .map(|s| (s.duration / self.sim.dt).round() as usize)
            .collect()
    }

    pub fn total_steps(&self) -> usize {
        self.steps_per_sequence().iter().sum()
    }

    pub fn total_duration(&self) -> f64 {
        self.sequences.iter().map(|s| s.duration).sum()
    }

    /// Copy with the given mode; switching to baseline zeroes the wildlife
    /// weights.
    pub fn with_mode(&self, mode: Mode) -> Scenario {
        match mode {
            Mode::Baseline => baseline_mode(self),
            Mode::Cinewild => Scenario {
                mode,
                ..self.clone()
            },
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.sim.validate().map_err(|m| ScenarioError::new("sim", m))?;
        self.limits.validate().map_err(|m| ScenarioError::new("limits", m))?;
        self.solver
            .validate()
            .map_err(|e| ScenarioError::new("solver", e.to_string()))?;
        self.ethics.validate().map_err(|m| ScenarioError::new("ethics", m))?;
        if !self.camera_sensor.is_valid() {
            return Err(ScenarioError::new("camera_sensor", "sizes must be positive"));
        }
        if self.sequences.is_empty() {
            return Err(ScenarioError::new("sequences", "at least one sequence is required"));
        }
        for (i, s) in self.sequences.iter().enumerate() {
            let field = |f: &str| format!("sequences[{i}].{f}");
            if !(s.duration > 0.0 && s.duration.is_finite()) {
                return Err(ScenarioError::new(field("duration"), format!("must be positive, got {}", s.duration)));
            }
            if (s.duration / self.sim.dt).round() < 1.0 {
                return Err(ScenarioError::new(field("duration"), "shorter than one control step"));
            }
            s.weights.validate().map_err(|m| ScenarioError::new(field("weights"), m))?;
            s.ethics(&self.ethics)
                .validate()
                .map_err(|m| ScenarioError::new(field("ethics_overrides"), m))?;
            let im = s.objective.im_star;
            if !(0.0..=self.camera_sensor.width_px).contains(&im.u) || !(0.0..=self.camera_sensor.height_px).contains(&im.v) {
                return Err(ScenarioError::new(field("objective.im_star"), "must lie inside the filming image"));
            }
            if !s.objective.r_star.is_valid(1e-6) {
                return Err(ScenarioError::new(field("objective.r_star"), "not a rotation matrix"));
            }
            if let Some(e) = s.objective.extent {
                if !(e.length_m > 0.0 && e.desired_px > 0.0) {
                    return Err(ScenarioError::new(field("objective.extent"), "length and desired size must be positive"));
                }
            }
        }
        if let AnimalModel::Waypoints { waypoints, .. } = &self.animal {
            if waypoints.iter().any(|w| !(w.speed >= 0.0)) {
                return Err(ScenarioError::new("animal.waypoints", "speeds must be nonnegative"));
            }
        }
        let f = self.initial_camera.focal_length;
        if !(self.limits.f_min..=self.limits.f_max).contains(&f) {
            return Err(ScenarioError::new("initial_camera.focal_length", format!("{f} is outside [f_min, f_max]")));
        }
        if !(self.perception_noise >= 0.0 && self.perception_noise.is_finite()) {
            return Err(ScenarioError::new("perception_noise", "must be nonnegative"));
        }
        Ok(())
    }
}

/// The comparison controller: identical scenario with the wildlife terms
/// (proximity, visibility, smoothness) disabled.
pub fn baseline_mode(scenario: &Scenario) -> Scenario {
    let mut out = scenario.clone();
    out.mode = Mode::Baseline;
    for s in &mut out.sequences {
        s.weights = s.weights.without_wildlife_terms();
    }
    out
}

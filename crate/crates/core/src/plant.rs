//! Discrete-time drone, camera and target propagation with box limits.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::geometry::{CameraInput, CameraState, DroneInput, DroneState, TargetState, Vec3};

/// Physical limits on states and inputs.
///
/// Gimbal pitch uses the geometry convention where positive pitch looks down.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Limits {
    pub v_max: f64,
    pub a_max: f64,
    pub omega_max: f64,
    pub gimbal_pitch_min: f64,
    pub gimbal_pitch_max: f64,
    pub f_min: f64,
    pub f_max: f64,
    pub v_f_max: f64,
    pub world_z_min: f64,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            v_max: 10.0,
            a_max: 5.0,
            omega_max: 1.5,
            gimbal_pitch_min: -PI / 6.0,
            gimbal_pitch_max: PI / 2.0,
            f_min: 15.0,
            f_max: 300.0,
            v_f_max: 60.0,
            world_z_min: 0.5,
        }
    }
}

impl Limits {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [self.v_max, self.a_max, self.omega_max, self.f_min, self.v_f_max];
        if !positive.iter().all(|v| v.is_finite() && *v > 0.0) {
            return Err("v_max, a_max, omega_max, f_min and v_f_max must be positive".into());
        }
        if !(self.f_min < self.f_max) {
            return Err(format!("f_min ({}) must be below f_max ({})", self.f_min, self.f_max));
        }
        if !(self.gimbal_pitch_min < self.gimbal_pitch_max) {
            return Err("gimbal pitch range is empty".into());
        }
        if !self.world_z_min.is_finite() {
            return Err("world_z_min must be finite".into());
        }
        Ok(())
    }
}

/// Sampling time and horizon length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SimConfig {
    pub dt: f64,
    pub horizon: usize,
}

impl Default for SimConfig {
    fn default() -> Self {
        SimConfig { dt: 0.2, horizon: 10 }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(format!("dt must be positive, got {}", self.dt));
        }
        if self.horizon == 0 {
            return Err("horizon must be at least 1".into());
        }
        Ok(())
    }
}

/// Explicit Euler: position advances with the pre-update velocity.
pub fn step_drone(x: &DroneState, u: &DroneInput, dt: f64) -> DroneState {
    let g = x.gimbal;
    DroneState {
        position: x.position + x.velocity * dt,
        velocity: x.velocity + u.accel * dt,
        gimbal: crate::geometry::EulerAngles::new(
            g.roll + dt * u.gimbal_rate.x,
            g.pitch + dt * u.gimbal_rate.y,
            g.yaw + dt * u.gimbal_rate.z,
        )
        .normalized(),
    }
}

/// Zoom integration; does not clamp.
pub fn step_camera(x: &CameraState, u: &CameraInput, dt: f64) -> CameraState {
    CameraState {
        focal_length: x.focal_length + dt * u.focal_rate,
    }
}

fn clamp_norm(v: Vec3, max: f64) -> Vec3 {
    let n = v.norm();
    // the slack keeps a rescaled vector from being rescaled again by an ulp
    if n > max * (1.0 + 1e-12) {
        v * (max / n)
    } else {
        v
    }
}

pub fn clamp_drone_input(u: &DroneInput, lim: &Limits) -> DroneInput {
    let w = lim.omega_max;
    DroneInput {
        accel: clamp_norm(u.accel, lim.a_max),
        gimbal_rate: u.gimbal_rate.map(|r| r.clamp(-w, w)),
    }
}

pub fn clamp_camera_input(u: &CameraInput, lim: &Limits) -> CameraInput {
    CameraInput {
        focal_rate: u.focal_rate.clamp(-lim.v_f_max, lim.v_f_max),
    }
}

pub fn clamp_drone_state(x: &DroneState, lim: &Limits) -> DroneState {
    let mut out = *x;
    out.velocity = clamp_norm(x.velocity, lim.v_max);
    out.gimbal.pitch = x.gimbal.pitch.clamp(lim.gimbal_pitch_min, lim.gimbal_pitch_max);
    out.position.z = x.position.z.max(lim.world_z_min);
    out
}

pub fn clamp_camera_state(x: &CameraState, lim: &Limits) -> CameraState {
    CameraState {
        focal_length: x.focal_length.clamp(lim.f_min, lim.f_max),
    }
}

/// Projects states and inputs onto their feasible sets. Norm-bounded
/// quantities are scaled radially, everything else is box-clipped.
pub fn clamp_to_limits(
    x_d: &DroneState,
    x_c: &CameraState,
    u_d: &DroneInput,
    u_c: &CameraInput,
    lim: &Limits,
) -> (DroneState, CameraState, DroneInput, CameraInput) {
    (
        clamp_drone_state(x_d, lim),
        clamp_camera_state(x_c, lim),
        clamp_drone_input(u_d, lim),
        clamp_camera_input(u_c, lim),
    )
}

/// Constant-velocity forecast for steps `1..=n` after `t0`.
pub fn forecast_target(t0: &TargetState, dt: f64, n: usize) -> Vec<TargetState> {
    (1..=n)
        .map(|j| TargetState {
            position: t0.position + t0.velocity * (j as f64 * dt),
            ..*t0
        })
        .collect()
}

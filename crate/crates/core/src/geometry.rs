//! Shared domain types and the small amount of 3-D geometry everything else
//! builds on.
//!
//! Conventions:
//! - World frame is right-handed with Z up.
//! - Body frames (drone gimbal, animal head) are X forward, Y left, Z up.
//! - Euler angles compose as `Rz(yaw) * Ry(pitch) * Rx(roll)` about the world
//!   axes, so a positive pitch tilts the forward axis *down*.

use std::f64::consts::PI;

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};

/// Position, velocity or acceleration in meters (or m/s, m/s²).
pub type Vec3 = nalgebra::Vector3<f64>;

/// Wraps an angle into `(-π, π]`.
pub fn wrap_angle(a: f64) -> f64 {
    let r = a.rem_euclid(2.0 * PI);
    if r > PI {
        r - 2.0 * PI
    } else {
        r
    }
}

/// A proper rotation matrix (orthonormal, det = +1).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Rotation(Matrix3<f64>);

impl Rotation {
    pub fn identity() -> Self {
        Rotation(Matrix3::identity())
    }

    /// Wraps a matrix without checking it. Use [`Rotation::is_valid`] when the
    /// source is untrusted.
    pub fn from_matrix_unchecked(m: Matrix3<f64>) -> Self {
        Rotation(m)
    }

    /// Rotation about world Z.
    pub fn about_z(yaw: f64) -> Self {
        let (s, c) = yaw.sin_cos();
        Rotation(Matrix3::new(c, -s, 0.0, s, c, 0.0, 0.0, 0.0, 1.0))
    }

    pub fn about_y(pitch: f64) -> Self {
        let (s, c) = pitch.sin_cos();
        Rotation(Matrix3::new(c, 0.0, s, 0.0, 1.0, 0.0, -s, 0.0, c))
    }

    pub fn about_x(roll: f64) -> Self {
        let (s, c) = roll.sin_cos();
        Rotation(Matrix3::new(1.0, 0.0, 0.0, 0.0, c, -s, 0.0, s, c))
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    pub fn transpose(&self) -> Rotation {
        Rotation(self.0.transpose())
    }

    pub fn compose(&self, other: &Rotation) -> Rotation {
        Rotation(self.0 * other.0)
    }

    /// `R v`: body-frame vector expressed in the parent frame.
    pub fn apply(&self, v: &Vec3) -> Vec3 {
        self.0 * v
    }

    /// `Rᵀ v`: parent-frame vector expressed in the body frame.
    pub fn apply_inverse(&self, v: &Vec3) -> Vec3 {
        self.0.tr_mul(v)
    }

    /// Heading of the body X axis in the world XY plane.
    pub fn yaw(&self) -> f64 {
        self.0[(1, 0)].atan2(self.0[(0, 0)])
    }

    /// Recovers `(roll, pitch, yaw)` for the Z-Y-X composition.
    pub fn to_euler(&self) -> EulerAngles {
        let m = &self.0;
        let pitch = (-m[(2, 0)]).clamp(-1.0, 1.0).asin();
        let roll = m[(2, 1)].atan2(m[(2, 2)]);
        let yaw = m[(1, 0)].atan2(m[(0, 0)]);
        EulerAngles::new(roll, pitch, yaw)
    }

    pub fn is_valid(&self, tol: f64) -> bool {
        let should_be_identity = self.0.transpose() * self.0;
        (should_be_identity - Matrix3::identity()).abs().max() <= tol
            && (self.0.determinant() - 1.0).abs() <= tol
    }

    /// Frobenius norm of `self - other`.
    pub fn frobenius_distance(&self, other: &Rotation) -> f64 {
        (self.0 - other.0).norm()
    }
}

impl Default for Rotation {
    fn default() -> Self {
        Rotation::identity()
    }
}

/// Roll, pitch and yaw in radians.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EulerAngles {
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

impl EulerAngles {
    pub fn new(roll: f64, pitch: f64, yaw: f64) -> Self {
        EulerAngles { roll, pitch, yaw }
    }

    pub fn from_yaw(yaw: f64) -> Self {
        EulerAngles::new(0.0, 0.0, yaw)
    }

    /// Each component wrapped into `(-π, π]`.
    pub fn normalized(self) -> Self {
        EulerAngles::new(
            wrap_angle(self.roll),
            wrap_angle(self.pitch),
            wrap_angle(self.yaw),
        )
    }

    pub fn is_finite(&self) -> bool {
        self.roll.is_finite() && self.pitch.is_finite() && self.yaw.is_finite()
    }

    pub fn to_rotation(self) -> Rotation {
        euler_to_rotation(self)
    }
}

/// `Rz(yaw) * Ry(pitch) * Rx(roll)`, written out in closed form.
pub fn euler_to_rotation(e: EulerAngles) -> Rotation {
    let (sr, cr) = e.roll.sin_cos();
    let (sp, cp) = e.pitch.sin_cos();
    let (sy, cy) = e.yaw.sin_cos();
    Rotation(Matrix3::new(
        cy * cp,
        cy * sp * sr - sy * cr,
        cy * sp * cr + sy * sr,
        sy * cp,
        sy * sp * sr + cy * cr,
        sy * sp * cr - cy * sr,
        -sp,
        cp * sr,
        cp * cr,
    ))
}

/// Orientation of the target relative to the drone camera: `R_dᵀ R_t`.
pub fn relative_rotation(drone: &Rotation, target: &Rotation) -> Rotation {
    Rotation(drone.0.tr_mul(&target.0))
}

/// Euclidean drone-target separation.
pub fn distance(a: &Vec3, b: &Vec3) -> f64 {
    (a - b).norm()
}

/// Drone position, velocity and gimbal orientation.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DroneState {
    pub position: Vec3,
    pub velocity: Vec3,
    pub gimbal: EulerAngles,
}

impl DroneState {
    pub fn at_rest(position: Vec3, gimbal: EulerAngles) -> Self {
        DroneState {
            position,
            velocity: Vec3::zeros(),
            gimbal,
        }
    }

    pub fn gimbal_rotation(&self) -> Rotation {
        euler_to_rotation(self.gimbal)
    }
}

/// Focal length of the filming camera in millimeters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CameraState {
    pub focal_length: f64,
}

/// Animal pose and velocity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TargetState {
    pub position: Vec3,
    pub velocity: Vec3,
    pub heading: EulerAngles,
}

impl TargetState {
    pub fn heading_rotation(&self) -> Rotation {
        euler_to_rotation(self.heading)
    }
}

/// Drone acceleration (m/s²) and gimbal angle rates (rad/s, roll/pitch/yaw).
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct DroneInput {
    pub accel: Vec3,
    pub gimbal_rate: Vec3,
}

/// Zoom speed in mm/s.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CameraInput {
    pub focal_rate: f64,
}

//! Pinhole projection shared by the filming camera and the animal eye model.
//!
//! Body frames are X forward, Y left, Z up. The optical frame used for
//! projection is Z forward, X right, Y down:
//!
//! ```text
//! optical = (-body.y, -body.z, body.x)
//! u = βx f · X/Z + s · Y/Z + c_u
//! v = βy f · Y/Z + c_v
//! ```

use nalgebra::Matrix3;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geometry::{Rotation, Vec3};

/// Points with forward depth at or below this are never projected.
pub const DEPTH_EPSILON: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum CameraError {
    #[error("point has non-positive depth {depth} (needs > {DEPTH_EPSILON})")]
    NonPositiveDepth { depth: f64 },
}

/// Image size in pixels and physical sensor size in millimeters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SensorSpec {
    pub width_px: f64,
    pub height_px: f64,
    pub width_mm: f64,
    pub height_mm: f64,
}

impl SensorSpec {
    pub fn new(width_px: f64, height_px: f64, width_mm: f64, height_mm: f64) -> Self {
        SensorSpec {
            width_px,
            height_px,
            width_mm,
            height_mm,
        }
    }

    /// Same pixel grid with the millimeter dimensions exchanged.
    pub fn with_swapped_mm(self) -> Self {
        SensorSpec {
            width_mm: self.height_mm,
            height_mm: self.width_mm,
            ..self
        }
    }

    pub fn beta_x(&self) -> f64 {
        self.width_px / self.width_mm
    }

    pub fn beta_y(&self) -> f64 {
        self.height_px / self.height_mm
    }

    pub fn diagonal_px(&self) -> f64 {
        self.width_px.hypot(self.height_px)
    }

    pub fn is_valid(&self) -> bool {
        [self.width_px, self.height_px, self.width_mm, self.height_mm]
            .iter()
            .all(|v| v.is_finite() && *v > 0.0)
    }
}

/// Pinhole intrinsics. `focal_mm` is in millimeters, centers and skew in pixels.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Intrinsics {
    pub focal_mm: f64,
    pub sensor: SensorSpec,
    pub cu: f64,
    pub cv: f64,
    #[serde(default)]
    pub skew: f64,
}

impl Intrinsics {
    /// Principal point at the image center, zero skew.
    pub fn centered(focal_mm: f64, sensor: SensorSpec) -> Self {
        Intrinsics {
            focal_mm,
            sensor,
            cu: sensor.width_px / 2.0,
            cv: sensor.height_px / 2.0,
            skew: 0.0,
        }
    }

    pub fn with_focal(self, focal_mm: f64) -> Self {
        Intrinsics { focal_mm, ..self }
    }

    /// The 3×3 calibration matrix `K`.
    pub fn matrix(&self) -> Matrix3<f64> {
        Matrix3::new(
            self.sensor.beta_x() * self.focal_mm,
            self.skew,
            self.cu,
            0.0,
            self.sensor.beta_y() * self.focal_mm,
            self.cv,
            0.0,
            0.0,
            1.0,
        )
    }

    pub fn center(&self) -> PixelPoint {
        PixelPoint::new(self.cu, self.cv)
    }

    /// Distance from the optical center to the origin corner.
    pub fn max_center_distance(&self) -> f64 {
        self.cu.hypot(self.cv)
    }

    pub fn contains(&self, px: &PixelPoint) -> bool {
        (0.0..=self.sensor.width_px).contains(&px.u) && (0.0..=self.sensor.height_px).contains(&px.v)
    }

    pub fn is_valid(&self) -> bool {
        self.focal_mm.is_finite()
            && self.focal_mm > 0.0
            && self.sensor.is_valid()
            && self.cu.is_finite()
            && self.cv.is_finite()
            && self.skew.is_finite()
    }
}

/// Real-valued image coordinates; may fall outside the image.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PixelPoint {
    pub u: f64,
    pub v: f64,
}

impl PixelPoint {
    pub fn new(u: f64, v: f64) -> Self {
        PixelPoint { u, v }
    }

    pub fn distance_to(&self, other: &PixelPoint) -> f64 {
        (self.u - other.u).hypot(self.v - other.v)
    }

    pub fn squared_distance_to(&self, other: &PixelPoint) -> f64 {
        let (du, dv) = (self.u - other.u, self.v - other.v);
        du * du + dv * dv
    }
}

/// Coordinates of `point` in the frame located at `origin` with orientation `frame`.
pub fn relative_position_in_frame(frame: &Rotation, origin: &Vec3, point: &Vec3) -> Vec3 {
    frame.apply_inverse(&(point - origin))
}

/// Projects a body-frame point through the pinhole model.
pub fn project(intr: &Intrinsics, p_body: &Vec3) -> Result<PixelPoint, CameraError> {
    let depth = p_body.x;
    if depth <= DEPTH_EPSILON {
        return Err(CameraError::NonPositiveDepth { depth });
    }
    let xn = -p_body.y / depth;
    let yn = -p_body.z / depth;
    let fx = intr.sensor.beta_x() * intr.focal_mm;
    let fy = intr.sensor.beta_y() * intr.focal_mm;
    Ok(PixelPoint::new(
        fx * xn + intr.skew * yn + intr.cu,
        fy * yn + intr.cv,
    ))
}

/// Unit body-frame direction of the ray through `px`.
pub fn back_project(intr: &Intrinsics, px: &PixelPoint) -> Vec3 {
    let fx = intr.sensor.beta_x() * intr.focal_mm;
    let fy = intr.sensor.beta_y() * intr.focal_mm;
    let yn = (px.v - intr.cv) / fy;
    let xn = (px.u - intr.cu - intr.skew * yn) / fx;
    Vec3::new(1.0, -xn, -yn).normalize()
}

/// Horizontal and vertical field of view in radians, from the metric sensor size.
pub fn field_of_view(intr: &Intrinsics) -> (f64, f64) {
    let fov_x = 2.0 * (intr.sensor.width_mm / (2.0 * intr.focal_mm)).atan();
    let fov_y = 2.0 * (intr.sensor.height_mm / (2.0 * intr.focal_mm)).atan();
    (fov_x, fov_y)
}

/// True when a point in the eye frame is in front, lands inside the image,
/// and is strictly closer than `d_vis`.
pub fn visibility(intr: &Intrinsics, p_td: &Vec3, d_dt: f64, d_vis: f64) -> bool {
    if d_dt >= d_vis {
        return false;
    }
    match project(intr, p_td) {
        Ok(px) => intr.contains(&px),
        Err(_) => false,
    }
}

/// Named eye models for animals with different visual systems.
///
/// Only [`SpeciesPreset::Tiger`] comes from a measured setup; the other three
/// are illustrative defaults on a shared 960×540 grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpeciesPreset {
    ForwardFacing,
    Lateral,
    Stereoscopic,
    Tiger,
}

impl SpeciesPreset {
    pub fn eye(self) -> Intrinsics {
        let grid = SensorSpec::new(960.0, 540.0, 36.0, 20.25);
        match self {
            SpeciesPreset::ForwardFacing => Intrinsics::centered(20.0, grid),
            SpeciesPreset::Lateral => Intrinsics::centered(6.0, grid),
            SpeciesPreset::Stereoscopic => Intrinsics::centered(35.0, grid),
            SpeciesPreset::Tiger => {
                Intrinsics::centered(35.0, SensorSpec::new(960.0, 540.0, 13.365, 23.76))
            }
        }
    }
}

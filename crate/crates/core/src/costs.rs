//! Stage cost terms: proximity, animal visibility, smoothness, framing and
//! filming perspective.

use serde::{Deserialize, Serialize};

use crate::camera::{self, Intrinsics, PixelPoint, SensorSpec};
use crate::geometry::{distance, relative_rotation, DroneState, CameraState, Rotation, TargetState, Vec3};

/// Framing penalty per unit `w_im` when the subject is behind the filming camera.
pub const BEHIND_CAMERA_PENALTY_SCALE: f64 = 1e6;

/// Disturbance thresholds and the animal eye model.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EthicsParams {
    /// Acoustic distance: outer edge of the caution zone (m).
    pub d_ac: f64,
    /// Safe distance: edge of the no-fly zone (m).
    pub d_sf: f64,
    /// Beyond this range the drone is assumed unnoticed even in view (m).
    pub d_vis: f64,
    #[serde(default = "default_w_ac")]
    pub w_ac: f64,
    #[serde(default = "default_w_sf")]
    pub w_sf: f64,
    pub eye: Intrinsics,
    /// Exchange the eye sensor's millimeter width and height before use.
    #[serde(default)]
    pub swap_eye_sensor_mm: bool,
}

fn default_w_ac() -> f64 {
    0.1
}

fn default_w_sf() -> f64 {
    1.0
}

impl EthicsParams {
    pub fn new(d_ac: f64, d_sf: f64, d_vis: f64, eye: Intrinsics) -> Self {
        EthicsParams {
            d_ac,
            d_sf,
            d_vis,
            w_ac: default_w_ac(),
            w_sf: default_w_sf(),
            eye,
            swap_eye_sensor_mm: false,
        }
    }

    /// The eye intrinsics actually used for projection.
    pub fn effective_eye(&self) -> Intrinsics {
        if self.swap_eye_sensor_mm {
            Intrinsics {
                sensor: self.eye.sensor.with_swapped_mm(),
                ..self.eye
            }
        } else {
            self.eye
        }
    }

    /// Constant joining the caution and no-fly branches of the proximity cost.
    pub fn continuity_offset(&self) -> f64 {
        self.w_ac * (self.d_sf - self.d_ac).powi(2) + 1.0
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.d_sf > 0.0 && self.d_sf < self.d_ac && self.d_ac.is_finite()) {
            return Err(format!("need 0 < d_sf < d_ac, got d_sf={} d_ac={}", self.d_sf, self.d_ac));
        }
        if !(self.d_vis > 0.0 && self.d_vis.is_finite()) {
            return Err(format!("d_vis must be positive, got {}", self.d_vis));
        }
        if !(self.w_ac >= 0.0 && self.w_sf >= 0.0 && self.w_ac.is_finite() && self.w_sf.is_finite()) {
            return Err("w_ac and w_sf must be finite and nonnegative".into());
        }
        if !self.effective_eye().is_valid() {
            return Err("eye intrinsics must have positive focal length and sensor sizes".into());
        }
        Ok(())
    }
}

/// Weights of the five stage cost terms.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostWeights {
    pub w_prox: f64,
    pub w_fov: f64,
    pub w_soft: f64,
    pub w_im: f64,
    pub w_d: f64,
    pub w_r: f64,
}

impl CostWeights {
    /// Proximity-aware giraffe experiment.
    pub const EXPERIMENT_1: CostWeights = CostWeights {
        w_prox: 15.0,
        w_fov: 0.0,
        w_soft: 10.0,
        w_im: 1.0,
        w_d: 0.0,
        w_r: 250.0,
    };

    /// Visibility-aware tiger experiment.
    pub const EXPERIMENT_2: CostWeights = CostWeights {
        w_prox: 0.0,
        w_fov: 1.0,
        w_soft: 0.0,
        w_im: 0.5,
        w_d: 10.0,
        w_r: 100.0,
    };

    /// Zeroes the wildlife terms, keeping framing and perspective.
    pub fn without_wildlife_terms(self) -> Self {
        CostWeights {
            w_prox: 0.0,
            w_fov: 0.0,
            w_soft: 0.0,
            ..self
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        let all = [self.w_prox, self.w_fov, self.w_soft, self.w_im, self.w_d, self.w_r];
        if all.iter().all(|w| w.is_finite() && *w >= 0.0) {
            Ok(())
        } else {
            Err("cost weights must be finite and nonnegative".into())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExtentAxis {
    /// Animal body Z (feet to head).
    Vertical,
    /// Animal body Y (flank to flank).
    Lateral,
}

/// Desired on-screen size of the subject, measured between two keypoints
/// placed symmetrically about the target position along `axis`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SubjectExtent {
    pub axis: ExtentAxis,
    pub length_m: f64,
    pub desired_px: f64,
}

impl SubjectExtent {
    pub fn keypoints(&self, target: &TargetState) -> (Vec3, Vec3) {
        let axis_body = match self.axis {
            ExtentAxis::Vertical => Vec3::z(),
            ExtentAxis::Lateral => Vec3::y(),
        };
        let half = target.heading_rotation().apply(&axis_body) * (self.length_m / 2.0);
        (target.position + half, target.position - half)
    }
}

/// What the shot should look like.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShotObjective {
    /// Desired pixel position of the target in the filming camera.
    pub im_star: PixelPoint,
    /// Desired drone-target distance (m).
    pub d_star: f64,
    /// Desired value of `R_dtᵀ`, i.e. the camera orientation expressed in the
    /// animal's body frame.
    pub r_star: Rotation,
    pub use_d: bool,
    pub use_r: bool,
    #[serde(default)]
    pub extent: Option<SubjectExtent>,
}

/// Per-term values of one stage; `total` is their sum.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct CostBreakdown {
    pub j_prox: f64,
    pub j_fov: f64,
    pub j_soft: f64,
    pub j_im: f64,
    pub j_p: f64,
    pub total: f64,
}

impl CostBreakdown {
    pub fn from_terms(j_prox: f64, j_fov: f64, j_soft: f64, j_im: f64, j_p: f64) -> Self {
        CostBreakdown {
            j_prox,
            j_fov,
            j_soft,
            j_im,
            j_p,
            total: j_prox + j_fov + j_soft + j_im + j_p,
        }
    }
}

/// Piecewise proximity cost: exponential decay in the respectful zone,
/// quadratic in the caution and no-fly zones, continuous at both thresholds.
pub fn j_prox(d_dt: f64, e: &EthicsParams, w_prox: f64) -> f64 {
    if w_prox == 0.0 {
        return 0.0;
    }
    let inner = if d_dt >= e.d_ac {
        (-0.5 * (d_dt - e.d_ac)).exp()
    } else if d_dt >= e.d_sf {
        e.w_ac * (d_dt - e.d_ac).powi(2) + 1.0
    } else {
        e.w_sf * (d_dt - e.d_sf).powi(2) + e.continuity_offset()
    };
    w_prox * inner
}

/// Visibility cost of the drone in the animal's eye.
pub fn j_fov(drone: &DroneState, target: &TargetState, e: &EthicsParams, w_fov: f64) -> f64 {
    if w_fov == 0.0 {
        return 0.0;
    }
    let d = distance(&drone.position, &target.position);
    if d >= e.d_vis {
        return 0.0;
    }
    let eye = e.effective_eye();
    let p_td = camera::relative_position_in_frame(&target.heading_rotation(), &target.position, &drone.position);
    if camera::visibility(&eye, &p_td, d, e.d_vis) {
        // in view and close: strongest near the center of gaze
        let px = camera::project(&eye, &p_td).expect("visible points have positive depth");
        let d_hat = px.distance_to(&eye.center()) / eye.max_center_distance();
        return w_fov * (-d_hat * d_hat).exp();
    }
    match camera::project(&eye, &p_td) {
        Ok(px) => {
            let (w, h) = (eye.sensor.width_px, eye.sensor.height_px);
            let over = |x: f64| x.max(0.0).powi(2);
            w_fov * (over(px.u - w) + over(-px.u) + over(px.v - h) + over(-px.v))
        }
        // behind the animal's head
        Err(_) => 0.0,
    }
}

pub fn j_soft(accel: &Vec3, w_soft: f64) -> f64 {
    w_soft * accel.norm_squared()
}

/// Squared pixel error of the target against the objective. `None` means the
/// target is behind the filming camera.
pub fn j_im(im_t: Option<PixelPoint>, obj: &ShotObjective, w_im: f64) -> f64 {
    if w_im == 0.0 {
        return 0.0;
    }
    match im_t {
        Some(px) => w_im * px.squared_distance_to(&obj.im_star),
        None => BEHIND_CAMERA_PENALTY_SCALE * w_im,
    }
}

/// Perspective cost: distance error plus Frobenius orientation error.
pub fn j_p(d_dt: f64, r_dt: &Rotation, obj: &ShotObjective, w_d: f64, w_r: f64) -> f64 {
    let mut cost = 0.0;
    if obj.use_d {
        cost += w_d * (d_dt - obj.d_star).powi(2);
    }
    if obj.use_r && w_r != 0.0 {
        cost += w_r * r_dt.transpose().frobenius_distance(&obj.r_star);
    }
    cost
}

/// Everything needed to score a stage.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CostModel {
    pub weights: CostWeights,
    pub ethics: EthicsParams,
    /// Sensor of the filming camera.
    pub sensor: SensorSpec,
}

impl CostModel {
    pub fn new(weights: CostWeights, ethics: EthicsParams, sensor: SensorSpec) -> Self {
        CostModel { weights, ethics, sensor }
    }

    pub fn filming_intrinsics(&self, camera: &CameraState) -> Intrinsics {
        Intrinsics::centered(camera.focal_length, self.sensor)
    }

    /// Where a world point lands in the filming camera.
    pub fn pixel_of(&self, drone: &DroneState, camera: &CameraState, point: &Vec3) -> Option<PixelPoint> {
        let body = camera::relative_position_in_frame(&drone.gimbal_rotation(), &drone.position, point);
        camera::project(&self.filming_intrinsics(camera), &body).ok()
    }

    /// Full framing term: target keypoint plus the subject-extent keypoints.
    pub fn framing_cost(&self, drone: &DroneState, camera: &CameraState, target: &TargetState, obj: &ShotObjective) -> f64 {
        let w_im = self.weights.w_im;
        if w_im == 0.0 {
            return 0.0;
        }
        let mut cost = j_im(self.pixel_of(drone, camera, &target.position), obj, w_im);
        if let Some(extent) = obj.extent {
            let (a, b) = extent.keypoints(target);
            cost += match (self.pixel_of(drone, camera, &a), self.pixel_of(drone, camera, &b)) {
                (Some(pa), Some(pb)) => w_im * (pa.distance_to(&pb) - extent.desired_px).powi(2),
                _ => BEHIND_CAMERA_PENALTY_SCALE * w_im,
            };
        }
        cost
    }

    pub fn stage_cost(
        &self,
        drone: &DroneState,
        camera: &CameraState,
        target: &TargetState,
        accel: &Vec3,
        obj: &ShotObjective,
    ) -> CostBreakdown {
        let w = &self.weights;
        let d = distance(&drone.position, &target.position);
        let prox = j_prox(d, &self.ethics, w.w_prox);
        let fov = j_fov(drone, target, &self.ethics, w.w_fov);
        let soft = j_soft(accel, w.w_soft);
        let im = self.framing_cost(drone, camera, target, obj);
        let p = if (obj.use_d && w.w_d != 0.0) || (obj.use_r && w.w_r != 0.0) {
            let r_dt = relative_rotation(&drone.gimbal_rotation(), &target.heading_rotation());
            j_p(d, &r_dt, obj, w.w_d, w.w_r)
        } else {
            0.0
        };
        CostBreakdown::from_terms(prox, fov, soft, im, p)
    }
}

/// Residuals per stage in [`CostModel::stage_residuals`].
pub const RESIDUALS_PER_STAGE: usize = 10;

impl CostModel {
    /// Writes residuals whose squares sum to `stage_cost(..).total`.
    ///
    /// Quadratic terms appear as signed errors (pixel offsets, extent error,
    /// acceleration components, distance error); the rest as the square root
    /// of their value. Disabled terms contribute zeros so the layout is fixed.
    pub fn stage_residuals(
        &self,
        drone: &DroneState,
        camera: &CameraState,
        target: &TargetState,
        accel: &Vec3,
        obj: &ShotObjective,
        out: &mut [f64],
    ) {
        debug_assert_eq!(out.len(), RESIDUALS_PER_STAGE);
        let w = &self.weights;
        let d = distance(&drone.position, &target.position);
        out[0] = j_prox(d, &self.ethics, w.w_prox).sqrt();
        out[1] = j_fov(drone, target, &self.ethics, w.w_fov).sqrt();
        let sw = w.w_soft.sqrt();
        out[2] = sw * accel.x;
        out[3] = sw * accel.y;
        out[4] = sw * accel.z;
        out[5..8].fill(0.0);
        if w.w_im != 0.0 {
            let si = w.w_im.sqrt();
            let behind = (BEHIND_CAMERA_PENALTY_SCALE * w.w_im).sqrt();
            match self.pixel_of(drone, camera, &target.position) {
                Some(px) => {
                    out[5] = si * (px.u - obj.im_star.u);
                    out[6] = si * (px.v - obj.im_star.v);
                }
                None => out[5] = behind,
            }
            if let Some(extent) = obj.extent {
                let (a, b) = extent.keypoints(target);
                out[7] = match (self.pixel_of(drone, camera, &a), self.pixel_of(drone, camera, &b)) {
                    (Some(pa), Some(pb)) => si * (pa.distance_to(&pb) - extent.desired_px),
                    _ => behind,
                };
            }
        }
        out[8] = if obj.use_d { w.w_d.sqrt() * (d - obj.d_star) } else { 0.0 };
        out[9] = if obj.use_r && w.w_r != 0.0 {
            let r_dt = relative_rotation(&drone.gimbal_rotation(), &target.heading_rotation());
            (w.w_r * r_dt.transpose().frobenius_distance(&obj.r_star)).sqrt()
        } else {
            0.0
        };
    }
}

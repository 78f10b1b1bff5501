//! Wildlife-aware model predictive control for autonomous drone
//! cinematography.
//!
//! The controller jointly plans drone acceleration, gimbal rates and zoom
//! speed over a short horizon, trading classic framing and perspective goals
//! against three wildlife terms: distance-based acoustic disturbance,
//! visibility in the animal's field of view, and motion smoothness.
//!
//! Modules, bottom up:
//! - [`geometry`]: shared state types, rotations, frame conventions.
//! - [`camera`]: pinhole projection for the filming camera and the animal eye.
//! - [`costs`]: the five stage cost terms.
//! - [`plant`]: discrete-time kinematics and limits.
//! - [`planner`]: sampling plus gradient-refined receding-horizon solver.
//! - [`harness`]: scenarios, presets, closed-loop runs and metrics.
//! - [`cli`]: the `cinewild` command line and SVG plots.
//!
//! See `examples/` for one runnable program per capability.

pub mod camera;
pub mod cli;
pub mod costs;
pub mod geometry;
pub mod harness;
pub mod planner;
pub mod plant;

pub use camera::{Intrinsics, PixelPoint, SensorSpec, SpeciesPreset};
pub use costs::{CostBreakdown, CostModel, CostWeights, EthicsParams, ShotObjective, SubjectExtent};
pub use geometry::{CameraInput, CameraState, DroneInput, DroneState, EulerAngles, Rotation, TargetState, Vec3};
pub use harness::{Mode, Scenario};
pub use planner::{plan, Plan, PlanningProblem, SolverConfig};
pub use plant::{Limits, SimConfig};

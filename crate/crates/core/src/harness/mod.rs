//! Scenarios, presets, closed-loop simulation, metrics and file formats.

pub mod io;
pub mod metrics;
pub mod presets;
pub mod scenario;
pub mod sim;

pub use metrics::{summarize, EmptyRun, MetricMeans, RunSummary};
pub use presets::{experiment1_preset, experiment2_preset};
pub use scenario::{baseline_mode, AnimalModel, AnimalMotion, EthicsOverrides, Mode, Scenario, ScenarioError, Sequence, Waypoint};
pub use sim::{run, run_mode, HarnessError, RunOutput, StepRecord};

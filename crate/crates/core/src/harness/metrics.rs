use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::sim::StepRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("cannot summarize an empty run")]
pub struct EmptyRun;

/// Arithmetic means over a set of steps. A field is `None` when no step in
/// the set carries that value (for instance framing errors while the
/// subject is behind the camera, or FoV share with no close steps).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct MetricMeans {
    pub steps: usize,
    pub d_dt: Option<f64>,
    pub f: Option<f64>,
    pub abs_e_im_x: Option<f64>,
    pub abs_e_im_y: Option<f64>,
    pub a_norm: Option<f64>,
    pub v_norm: Option<f64>,
    pub j_prox: Option<f64>,
    pub e_yaw: Option<f64>,
    pub abs_e_yaw: Option<f64>,
    pub im_d_x_cent: Option<f64>,
    /// Percent of steps inside the animal's view among steps with `d_dt < d_vis`.
    pub pct_inside_fov: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub overall: MetricMeans,
    pub per_sequence: Vec<MetricMeans>,
    /// Only steps with `d_dt < d_vis`.
    pub near: MetricMeans,
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn means<'a>(records: impl IntoIterator<Item = &'a StepRecord>) -> MetricMeans {
    let rs: Vec<&StepRecord> = records.into_iter().collect();
    let over = |f: &dyn Fn(&StepRecord) -> Option<f64>| mean(rs.iter().filter_map(|r| f(r)));
    let near: Vec<&&StepRecord> = rs.iter().filter(|r| r.d_dt < r.d_vis).collect();
    let pct = (!near.is_empty())
        .then(|| 100.0 * near.iter().filter(|r| r.inside_fov).count() as f64 / near.len() as f64);
    MetricMeans {
        steps: rs.len(),
        d_dt: over(&|r| Some(r.d_dt)),
        f: over(&|r| Some(r.f)),
        abs_e_im_x: over(&|r| r.e_im_x.map(f64::abs)),
        abs_e_im_y: over(&|r| r.e_im_y.map(f64::abs)),
        a_norm: over(&|r| Some(r.a_norm)),
        v_norm: over(&|r| Some(r.v_norm)),
        j_prox: over(&|r| Some(r.j_prox)),
        e_yaw: over(&|r| Some(r.e_yaw)),
        abs_e_yaw: over(&|r| Some(r.e_yaw.abs())),
        im_d_x_cent: over(&|r| Some(r.im_d_x_cent)),
        pct_inside_fov: pct,
    }
}

pub fn summarize(records: &[StepRecord]) -> Result<RunSummary, EmptyRun> {
    if records.is_empty() {
        return Err(EmptyRun);
    }
    let n_seq = records.iter().map(|r| r.sequence).max().unwrap_or(0) + 1;
    Ok(RunSummary {
        overall: means(records),
        per_sequence: (0..n_seq)
            .map(|i| means(records.iter().filter(|r| r.sequence == i)))
            .collect(),
        near: means(records.iter().filter(|r| r.d_dt < r.d_vis)),
    })
}

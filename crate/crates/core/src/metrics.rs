//! Sparsity and recovery metrics plus the per-epoch run trace.

use std::collections::BTreeMap;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::groups::{GroupPartition, GroupSupport};
use crate::regularizer::Parameters;
use crate::scalar::{norm, Real};
use crate::solvers::Stage;

/// Fraction of groups of `x` that are exactly zero.
pub fn group_sparsity_ratio<F: Real>(x: &Parameters<F>, partition: &GroupPartition) -> f64 {
    let zeros = (0..partition.num_groups()).filter(|&g| partition.group_is_zero(&x.x, g)).count();
    zeros as f64 / partition.num_groups() as f64
}

/// Intersection over union of the zero-group sets. Two empty sets agree
/// perfectly and score 1.
pub fn iou_zero_groups(estimate: &GroupSupport, truth: &GroupSupport) -> Result<f64> {
    if estimate.num_groups() != truth.num_groups() {
        return Err(invalid(format!(
            "supports over different group universes ({} vs {})",
            estimate.num_groups(),
            truth.num_groups()
        )));
    }
    let inter = estimate.zero_groups.intersection(&truth.zero_groups).count();
    let union = estimate.zero_groups.union(&truth.zero_groups).count();
    if union == 0 {
        return Ok(1.0);
    }
    Ok(inter as f64 / union as f64)
}

/// Zeroes every group whose norm is strictly below `threshold`.
pub fn truncate_by_magnitude<F: Real>(
    x: &Parameters<F>,
    partition: &GroupPartition,
    threshold: F,
) -> Result<Parameters<F>> {
    partition.check_dim(x.dim())?;
    if !(threshold >= F::zero()) {
        return Err(invalid(format!("truncation threshold must be nonnegative, got {threshold}")));
    }
    let mut out = x.clone();
    for r in partition.ranges() {
        if norm(&out.x[r.clone()]) < threshold {
            out.x[r].iter_mut().for_each(|v| *v = F::zero());
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: u64,
    pub stage: Stage,
    pub psi: f64,
    pub f: f64,
    pub omega: f64,
    pub group_sparsity: f64,
    pub grad_map_norm: f64,
    pub wall_seconds: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct TraceMetadata {
    pub solver_kind: String,
    pub dataset: String,
    pub seed: u64,
    pub lambda: f64,
    /// Resolved solver configuration.
    pub config: serde_json::Value,
    /// Global step at which the group-sparsity stage began, if it did.
    pub switch_step: Option<u64>,
    /// Half-space steps after which a previously zero group was nonzero.
    /// Always 0 for a correct implementation.
    pub support_violations: u64,
    /// Free-form run annotations (sampling scheme, solver variants, ...).
    pub notes: BTreeMap<String, String>,
}

/// Per-epoch history of one solver run. Epoch 0 is the initial point.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub metadata: TraceMetadata,
    pub records: Vec<EpochRecord>,
}

pub const CSV_COLUMNS: [&str; 7] = ["epoch", "stage", "psi", "f", "group_sparsity", "grad_map_norm", "wall_seconds"];

impl RunTrace {
    pub fn last(&self) -> Option<&EpochRecord> {
        self.records.last()
    }

    /// Writes one row per epoch in the fixed column order of
    /// [`CSV_COLUMNS`]. With `include_wall_time` false the `wall_seconds`
    /// column is left empty so the file depends only on the inputs and seed.
    pub fn write_csv(&self, w: impl Write, include_wall_time: bool) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(CSV_COLUMNS)?;
        for r in &self.records {
            let wall = if include_wall_time { r.wall_seconds.to_string() } else { String::new() };
            out.write_record([
                r.epoch.to_string(),
                r.stage.as_str().to_string(),
                r.psi.to_string(),
                r.f.to_string(),
                r.group_sparsity.to_string(),
                r.grad_map_norm.to_string(),
                wall,
            ])?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self, include_wall_time: bool) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf, include_wall_time)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    pub fn write_json(&self, w: impl Write) -> Result<()> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }
}

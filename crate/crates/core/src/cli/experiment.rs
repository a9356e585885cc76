//! Shared plumbing for the experiment subcommands: default hyperparameters,
//! running a list of solver configurations, and writing artifacts.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::Result;
use crate::groups::GroupPartition;
use crate::metrics::RunTrace;
use crate::problems::Problem;
use crate::regularizer::Parameters;
use crate::solvers::{run, SolverConfig, SolverKind};

/// RDA is tuned over `gamma = 10^-3, ..., 10^3`.
pub const GAMMA_GRID: [f64; 7] = [1e-3, 1e-2, 1e-1, 1.0, 1e1, 1e2, 1e3];

/// Default hyperparameters for a problem with `num_instances` instances.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Defaults {
    pub lambda: f64,
    pub batch_size: usize,
    pub alpha: f64,
    pub epochs: usize,
    pub switch_epochs: usize,
}

impl Defaults {
    /// Logistic regression: `lambda = 100/N`, `|B| = min(256, ceil(N/100))`,
    /// `alpha = 1/L` (or `fallback_alpha` when `L = 0`), 60 epochs, switch
    /// after 30.
    pub fn logistic(num_instances: usize, lipschitz: f64, fallback_alpha: f64) -> Self {
        Self {
            lambda: 100.0 / num_instances as f64,
            batch_size: 256.min(num_instances.div_ceil(100)).max(1),
            alpha: crate::solvers::step_from_lipschitz(lipschitz, fallback_alpha),
            epochs: 60,
            switch_epochs: 30,
        }
    }

    /// Synthetic regression: `lambda = 100/N`, `|B| = 64`, `alpha = 0.1`,
    /// 60 epochs, switch after 30.
    pub fn synthetic(num_instances: usize) -> Self {
        Self { lambda: 100.0 / num_instances as f64, batch_size: 64, alpha: 0.1, epochs: 60, switch_epochs: 30 }
    }

    /// Global step count of `switch_epochs` full epochs.
    pub fn switch_step(&self, num_instances: usize) -> u64 {
        let per_epoch = num_instances.div_ceil(self.batch_size.min(num_instances).max(1));
        (self.switch_epochs * per_epoch) as u64
    }
}

/// A labelled solver configuration.
#[derive(Debug, Clone, Serialize)]
pub struct RunSpec {
    pub label: String,
    pub config: SolverConfig,
}

#[derive(Debug, Clone)]
pub struct RunResult {
    pub label: String,
    pub config: SolverConfig,
    pub x: Parameters<f64>,
    pub trace: RunTrace,
}

pub fn execute<P: Problem<f64> + ?Sized>(
    spec: &RunSpec,
    problem: &P,
    partition: &GroupPartition,
    dataset: &str,
) -> Result<RunResult> {
    let x0 = problem.zero_parameters();
    let (x, mut trace) = run(&spec.config, problem, partition, &x0)?;
    trace.metadata.dataset = dataset.to_string();
    Ok(RunResult { label: spec.label.clone(), config: spec.config.clone(), x, trace })
}

/// Runs RDA once per `gamma` and keeps the run with the lowest final
/// objective. Returns the winner and `(gamma, final psi)` for every candidate.
pub fn tune_gamma<P: Problem<f64> + ?Sized>(
    base: &SolverConfig,
    grid: &[f64],
    problem: &P,
    partition: &GroupPartition,
    dataset: &str,
) -> Result<(RunResult, Vec<(f64, f64)>)> {
    let mut best: Option<RunResult> = None;
    let mut scores = Vec::with_capacity(grid.len());
    for &gamma in grid {
        let config = SolverConfig { gamma: Some(gamma), ..base.clone() };
        let spec = RunSpec { label: "rda".into(), config };
        let result = execute(&spec, problem, partition, dataset)?;
        let psi = final_psi(&result);
        scores.push((gamma, psi));
        let better = match &best {
            Some(b) => psi < final_psi(b),
            None => true,
        };
        if better {
            best = Some(result);
        }
    }
    let mut best = best.expect("gamma grid is not empty");
    best.trace.metadata.notes.insert("gamma_search".into(), serde_json::to_string(&scores)?);
    Ok((best, scores))
}

/// Final objective, with diverged runs ranked last.
fn final_psi(r: &RunResult) -> f64 {
    match r.trace.last() {
        Some(rec) if rec.psi.is_finite() => rec.psi,
        _ => f64::INFINITY,
    }
}

/// Label used for artifacts: the solver name, plus the fixed epsilon for
/// HSPG runs that do not tune it.
pub fn label_for(config: &SolverConfig) -> String {
    match (config.kind, config.epsilon_tuning, config.epsilon) {
        (SolverKind::Hspg, None, Some(eps)) => format!("hspg_eps{eps}"),
        (kind, _, _) => kind.as_str().to_string(),
    }
}

/// Writes `manifest.json` and `traces/<label>.{csv,json}` under `out`.
pub fn write_artifacts(
    out: &Path,
    manifest: &serde_json::Value,
    results: &[RunResult],
    include_wall_time: bool,
) -> Result<()> {
    let traces = out.join("traces");
    fs::create_dir_all(&traces)?;
    let mut m = BufWriter::new(File::create(out.join("manifest.json"))?);
    serde_json::to_writer_pretty(&mut m, manifest)?;
    writeln!(m)?;
    m.flush()?;
    for r in results {
        let csv = BufWriter::new(File::create(traces.join(format!("{}.csv", r.label)))?);
        r.trace.write_csv(csv, include_wall_time)?;
        let mut json = BufWriter::new(File::create(traces.join(format!("{}.json", r.label)))?);
        r.trace.write_json(&mut json)?;
        writeln!(json)?;
        json.flush()?;
    }
    Ok(())
}

/// Writes rows as CSV with the given header.
pub fn write_summary(path: &Path, header: &[&str], rows: &[Vec<String>]) -> Result<()> {
    let mut w = csv::Writer::from_path(path)?;
    w.write_record(header)?;
    for row in rows {
        w.write_record(row)?;
    }
    w.flush()?;
    Ok(())
}

/// Renders an aligned plain-text table.
pub fn render_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.len());
        }
    }
    let line = |cells: Vec<&str>| {
        cells.iter().zip(&widths).map(|(c, w)| format!("{c:>w$}")).collect::<Vec<_>>().join("  ")
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn logistic_defaults() {
        let d = Defaults::logistic(32_561, 14.0 / 4.0, 0.1);
        assert!((d.lambda - 100.0 / 32_561.0).abs() < 1e-18);
        assert_eq!(d.batch_size, 256);
        assert!((d.alpha - 4.0 / 14.0).abs() < 1e-15);
        assert_eq!(Defaults::logistic(1000, 0.0, 0.1).batch_size, 10);
        assert_eq!(Defaults::logistic(1000, 0.0, 0.1).alpha, 0.1);
        assert_eq!(Defaults::logistic(50, 1.0, 0.1).batch_size, 1);
    }

    #[test]
    fn switch_step_counts_whole_epochs() {
        let d = Defaults::synthetic(10_000);
        assert_eq!(d.switch_step(10_000), 30 * 157);
        assert_eq!(d.lambda, 0.01);
    }

    #[test]
    fn table_alignment() {
        let t = render_table(&["a", "bb"], &[vec!["123".into(), "x".into()]]);
        assert_eq!(t, "  a  bb\n123   x\n");
    }
}

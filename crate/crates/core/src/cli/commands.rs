use std::fs::{self, File};
use std::io::BufWriter;
use std::path::Path;

use rayon::prelude::*;
use serde_json::json;

use super::experiment::{
    execute, label_for, render_table, tune_gamma, write_artifacts, write_summary, Defaults, RunResult, RunSpec,
    GAMMA_GRID,
};
use super::{LogregArgs, RunArgs, SweepArgs, SwitchMode, SynthArgs, VerifyArgs, EXIT_OK, EXIT_VERIFY};
use crate::data::{gen_synthetic, read_libsvm_file, write_dump, LibsvmOptions};
use crate::error::{Error, Result};
use crate::groups::{support_of, GroupPartition};
use crate::metrics::iou_zero_groups;
use crate::problems::Problem;
use crate::solvers::{EpsilonSearch, SolverConfig, SolverKind, SwitchRule};
use crate::verify::{run_suite, VerifyOptions, SUITES};

/// Slim and fat settings of the synthetic recovery table.
pub const RECOVERY_TABLE: [(usize, usize, f64); 24] = [
    (10_000, 1000, 0.1),
    (10_000, 1000, 0.3),
    (10_000, 1000, 0.5),
    (10_000, 1000, 0.7),
    (10_000, 1000, 0.9),
    (10_000, 2000, 0.1),
    (10_000, 2000, 0.3),
    (10_000, 2000, 0.5),
    (10_000, 2000, 0.7),
    (10_000, 2000, 0.9),
    (10_000, 3000, 0.1),
    (10_000, 3000, 0.3),
    (10_000, 3000, 0.5),
    (10_000, 3000, 0.7),
    (10_000, 3000, 0.9),
    (10_000, 4000, 0.1),
    (10_000, 4000, 0.3),
    (10_000, 4000, 0.5),
    (10_000, 4000, 0.7),
    (10_000, 4000, 0.9),
    (200, 1000, 0.9),
    (300, 1000, 0.8),
    (400, 1000, 0.7),
    (500, 1000, 0.6),
];

const SYNTH_HEADER: [&str; 9] = ["N", "n", "ratio", "solver", "psi", "f", "group_sparsity", "iou", "epsilon"];
const LOGREG_HEADER: [&str; 5] = ["solver", "psi", "f", "group_sparsity", "epsilon"];

/// How the experiment subcommands fill in unset options.
struct Presets<'a> {
    solvers: &'a [SolverKind],
    epsilons: &'a [f64],
    tune_epsilon: bool,
    eps_cap: f64,
}

const SYNTH_PRESETS: Presets<'static> =
    Presets { solvers: &[SolverKind::Hspg], epsilons: &[], tune_epsilon: true, eps_cap: 0.99 };

const LOGREG_PRESETS: Presets<'static> = Presets {
    solvers: &[SolverKind::ProxSg, SolverKind::Rda, SolverKind::ProxSvrg, SolverKind::Hspg],
    epsilons: &[0.0, 0.05],
    tune_epsilon: false,
    eps_cap: 0.2,
};

/// Resolves the solver configurations for one problem.
fn build_specs(args: &RunArgs, defaults: Defaults, num_instances: usize, presets: &Presets) -> Result<Vec<RunSpec>> {
    let d = Defaults {
        lambda: args.lambda.unwrap_or(defaults.lambda),
        batch_size: args.batch.unwrap_or(defaults.batch_size),
        alpha: args.alpha.unwrap_or(defaults.alpha),
        epochs: args.epochs.unwrap_or(defaults.epochs),
        switch_epochs: args.switch_epochs.unwrap_or(defaults.switch_epochs),
    };
    let switch = match args.switch {
        SwitchMode::Fixed => SwitchRule::AtStep(d.switch_step(num_instances)),
        SwitchMode::Stationarity => SwitchRule::Stationarity { window: args.window, rtol: args.rtol },
        SwitchMode::Never => SwitchRule::Never,
    };
    let kinds = if args.solvers.is_empty() { presets.solvers.to_vec() } else { args.solvers.clone() };
    let epsilons = if args.epsilon.is_empty() { presets.epsilons.to_vec() } else { args.epsilon.clone() };
    let tune = args.tune_epsilon || (args.epsilon.is_empty() && presets.tune_epsilon);
    let search = EpsilonSearch { rho: args.rho, cap: args.eps_cap.unwrap_or(presets.eps_cap) };

    let mut configs = Vec::new();
    for kind in kinds {
        match kind {
            SolverKind::Hspg => {
                let base = |eps: f64| SolverConfig {
                    theoretical_stage2: args.theoretical_stage2,
                    ..SolverConfig::hspg(d.lambda, d.alpha, d.batch_size, d.epochs, switch, eps)
                };
                configs.extend(epsilons.iter().map(|&e| base(e)));
                if tune {
                    configs.push(SolverConfig { epsilon_tuning: Some(search), ..base(0.0) });
                }
            }
            SolverKind::ProxSg => configs.push(SolverConfig::prox_sg(d.lambda, d.alpha, d.batch_size, d.epochs)),
            SolverKind::Rda => {
                configs.push(SolverConfig::rda(d.lambda, args.gamma.unwrap_or(1.0), d.batch_size, d.epochs))
            }
            SolverKind::ProxSvrg => configs.push(SolverConfig {
                inner_loop_length: args.inner_loop,
                ..SolverConfig::prox_svrg(d.lambda, d.alpha, d.batch_size, d.epochs)
            }),
        }
    }
    configs
        .into_iter()
        .map(|c| {
            let config = c.with_seed(args.seed);
            config.validate()?;
            Ok(RunSpec { label: label_for(&config), config })
        })
        .collect()
}

fn run_specs<P: Problem<f64> + ?Sized>(
    specs: &[RunSpec],
    args: &RunArgs,
    problem: &P,
    partition: &GroupPartition,
    dataset: &str,
) -> Result<Vec<RunResult>> {
    specs
        .iter()
        .map(|spec| {
            if spec.config.kind == SolverKind::Rda && args.gamma.is_none() {
                tune_gamma(&spec.config, &GAMMA_GRID, problem, partition, dataset).map(|(best, _)| best)
            } else {
                execute(spec, problem, partition, dataset)
            }
        })
        .collect()
}

fn epsilon_of(r: &RunResult) -> String {
    match (r.config.kind, r.trace.metadata.notes.get("epsilon_tuned")) {
        (SolverKind::Hspg, Some(e)) => e.clone(),
        (SolverKind::Hspg, None) => r.config.epsilon_or_zero().to_string(),
        _ => String::new(),
    }
}

fn manifest(command: &str, dataset: serde_json::Value, defaults: Defaults, results: &[RunResult]) -> serde_json::Value {
    let runs: Vec<_> = results
        .iter()
        .map(|r| {
            json!({
                "label": r.label,
                "config": r.config,
                "notes": r.trace.metadata.notes,
                "switch_step": r.trace.metadata.switch_step,
            })
        })
        .collect();
    json!({
        "command": command,
        "version": env!("CARGO_PKG_VERSION"),
        "dataset": dataset,
        "defaults": defaults,
        "runs": runs,
    })
}

/// One synthetic setting: generate, solve, write artifacts under `out`.
fn synth_cell(
    big_n: usize,
    n: usize,
    groups: usize,
    ratio: f64,
    args: &RunArgs,
    out: &Path,
    dump: Option<&Path>,
) -> Result<Vec<Vec<String>>> {
    let inst = gen_synthetic::<f64>(big_n, n, groups, ratio, args.seed)?;
    if let Some(path) = dump {
        write_dump(&inst, BufWriter::new(File::create(path)?))?;
    }
    let defaults = Defaults::synthetic(big_n);
    let specs = build_specs(args, defaults, big_n, &SYNTH_PRESETS)?;
    let dataset = format!("synthetic N={big_n} n={n} groups={groups} ratio={ratio} seed={}", args.seed);
    let results = run_specs(&specs, args, &inst.problem, &inst.partition, &dataset)?;
    let truth = inst.truth_support();
    let mut rows = Vec::new();
    for r in &results {
        let iou = iou_zero_groups(&support_of(&r.x, &inst.partition)?, &truth)?;
        let last = r.trace.last().expect("trace has the initial record");
        rows.push(vec![
            big_n.to_string(),
            n.to_string(),
            ratio.to_string(),
            r.label.clone(),
            format!("{:.6}", last.psi),
            format!("{:.6}", last.f),
            format!("{:.2}", last.group_sparsity),
            format!("{iou:.4}"),
            epsilon_of(r),
        ]);
    }
    let data = json!({
        "kind": "synthetic",
        "N": big_n,
        "n": n,
        "groups": groups,
        "ratio": ratio,
        "seed": args.seed,
        "true_zero_groups": inst.true_zero_groups,
    });
    fs::create_dir_all(out)?;
    write_artifacts(out, &manifest("synth-recovery", data, defaults, &results), &results, args.record_wall_time)?;
    write_summary(&out.join("summary.csv"), &SYNTH_HEADER, &rows)?;
    Ok(rows)
}

pub fn synth_recovery(a: &SynthArgs) -> Result<i32> {
    let rows = synth_cell(a.num_instances, a.dim, a.groups, a.ratio, &a.run, &a.run.out, a.dump.as_deref())?;
    print!("{}", render_table(&SYNTH_HEADER, &rows));
    Ok(EXIT_OK)
}

pub fn sweep(a: &SweepArgs) -> Result<i32> {
    let settings = if a.settings.is_empty() { RECOVERY_TABLE.to_vec() } else { a.settings.clone() };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(a.jobs)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let cells: Vec<Result<Vec<Vec<String>>>> = pool.install(|| {
        settings
            .par_iter()
            .map(|&(big_n, n, ratio)| {
                let dir = a.run.out.join(format!("N{big_n}_n{n}_r{ratio}"));
                synth_cell(big_n, n, a.groups, ratio, &a.run, &dir, None)
            })
            .collect()
    });
    let mut rows = Vec::new();
    for cell in cells {
        rows.extend(cell?);
    }
    fs::create_dir_all(&a.run.out)?;
    write_summary(&a.run.out.join("summary.csv"), &SYNTH_HEADER, &rows)?;
    print!("{}", render_table(&SYNTH_HEADER, &rows));
    Ok(EXIT_OK)
}

pub fn logreg(a: &LogregArgs) -> Result<i32> {
    let opts = LibsvmOptions { min_dim: a.min_dim, bias: !a.no_bias };
    let problem = read_libsvm_file::<f64>(&a.data, opts)?;
    let n_inst = problem.num_instances();
    let partition = GroupPartition::equal(problem.dim(), a.groups)?;
    let lipschitz = problem.lipschitz()?;
    let defaults = Defaults::logistic(n_inst, lipschitz, a.alpha_fallback);
    let specs = build_specs(&a.run, defaults, n_inst, &LOGREG_PRESETS)?;
    let dataset = a.data.display().to_string();
    let results = run_specs(&specs, &a.run, &problem, &partition, &dataset)?;

    let rows: Vec<Vec<String>> = results
        .iter()
        .map(|r| {
            let last = r.trace.last().expect("trace has the initial record");
            vec![
                r.label.clone(),
                format!("{:.6}", last.psi),
                format!("{:.6}", last.f),
                format!("{:.2}", last.group_sparsity),
                epsilon_of(r),
            ]
        })
        .collect();
    let data = json!({
        "kind": "libsvm",
        "path": dataset,
        "instances": n_inst,
        "features": problem.dim(),
        "nnz": problem.nnz(),
        "bias": problem.has_bias(),
        "groups": a.groups,
        "lipschitz": lipschitz,
    });
    let out = &a.run.out;
    fs::create_dir_all(out)?;
    write_artifacts(out, &manifest("logreg", data, defaults, &results), &results, a.run.record_wall_time)?;
    write_summary(&out.join("summary.csv"), &LOGREG_HEADER, &rows)?;
    print!("{}", render_table(&LOGREG_HEADER, &rows));
    Ok(EXIT_OK)
}

pub fn verify(a: &VerifyArgs) -> Result<i32> {
    let logistic = match &a.data {
        Some(path) => Some(read_libsvm_file::<f64>(path, LibsvmOptions::default())?),
        None => None,
    };
    let opts = VerifyOptions { seed: a.seed, logistic };
    let names: Vec<String> =
        if a.suites.is_empty() { SUITES.iter().map(|s| s.to_string()).collect() } else { a.suites.clone() };
    let mut all_passed = true;
    for name in &names {
        let report = run_suite(name, &opts)?;
        let status = if report.passed() { "PASS" } else { "FAIL" };
        all_passed &= report.passed();
        println!("{status} {:<13} trials={:<6} failures={:<4} {}", report.name, report.trials, report.failures, report.detail);
    }
    Ok(if all_passed { EXIT_OK } else { EXIT_VERIFY })
}

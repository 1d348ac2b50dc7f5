//! Runs law suites over seeded ensembles, sweeps one-parameter laws, and
//! reproduces single trials.

pub mod config;
mod report;

use std::collections::BTreeMap;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::value::RawValue;
use serde_json::Value;
use thiserror::Error;

use crate::ensembles::child_seed;
use crate::laws::instance::two_sided_grid;
use crate::laws::sweep::domain;
use crate::laws::{sweep_law, CheckResult, Curve, Instance, Law, LawId, TrialSpec};
use crate::linalg::io;

pub use config::{ConfigFile, RunConfig};
pub use report::{FailureEntry, LawReport, Report, ReproKey, Worst};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] crate::Error),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl HarnessError {
    pub fn exit_code(&self) -> u8 {
        ExitStatus::Usage.code()
    }
}

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success,
    LawViolation,
    Usage,
}

impl ExitStatus {
    pub fn code(self) -> u8 {
        match self {
            ExitStatus::Success => 0,
            ExitStatus::LawViolation => 1,
            ExitStatus::Usage => 2,
        }
    }
}

/// Deterministic plan of trial `index` for a law.
pub fn trial_spec(law: &dyn Law, config: &RunConfig, index: usize) -> TrialSpec {
    let n_cap = if law.is_tensor() {
        config::TENSOR_MAX_N
    } else {
        config::MAX_N
    };
    let n = match config.n {
        Some(n) if law.is_tensor() => n.min(n_cap),
        Some(n) => n,
        None => index % n_cap + 1,
    };
    let m = config.m.unwrap_or(index % law.max_m().max(1) + 1);
    TrialSpec {
        seed: child_seed(config.seed, index as u64),
        n,
        m,
        field: config.field,
        kappa_max: config.kappa_max,
        boundary: (index < law.boundary_count()).then_some(index),
    }
}

/// Draws and checks one trial.
pub fn run_trial(
    law: &dyn Law,
    config: &RunConfig,
    trial: &TrialSpec,
) -> crate::Result<CheckResult> {
    let instance = law.sample(trial)?;
    law.check(&instance, &config.tolerances)
}

/// Runs every trial of one law.
pub fn run_law(law: &dyn Law, config: &RunConfig) -> LawReport {
    let outcomes: Vec<(TrialSpec, crate::Result<CheckResult>)> = (0..config.trials)
        .into_par_iter()
        .map(|k| {
            let trial = trial_spec(law, config, k);
            (trial, run_trial(law, config, &trial))
        })
        .collect();
    LawReport::from_outcomes(law.law_name(), &outcomes)
}

/// Runs a suite. Exit status is `LawViolation` iff any trial failed.
pub fn verify(config: &RunConfig, laws: &[&dyn Law]) -> Report {
    let start = Instant::now();
    let reports: Vec<LawReport> = laws.iter().map(|law| run_law(*law, config)).collect();
    let failed = reports.iter().any(|r| r.fails > 0);
    Report {
        tool: "meanscope".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        config: config.clone(),
        laws: reports,
        wall_clock_seconds: start.elapsed().as_secs_f64(),
        exit_status: if failed {
            ExitStatus::LawViolation
        } else {
            ExitStatus::Success
        }
        .code(),
    }
}

/// Runs the laws named in the config.
pub fn verify_config(config: &RunConfig) -> Report {
    let ids = config.law_ids();
    let laws: Vec<&dyn Law> = ids.iter().map(|l| l as &dyn Law).collect();
    verify(config, &laws)
}

/// Re-runs a single trial and returns it with its instance.
pub fn reproduce(
    law: &dyn Law,
    config: &RunConfig,
    key: &ReproKey,
) -> crate::Result<(Instance, CheckResult)> {
    let trial = key.trial_spec(config);
    let instance = law.sample(&trial)?;
    let result = law.check(&instance, &config.tolerances)?;
    Ok((instance, result))
}

#[derive(Serialize)]
struct ReproDump<'a> {
    law: &'a str,
    key: &'a ReproKey,
    params: BTreeMap<String, Value>,
    matrices: BTreeMap<String, Box<RawValue>>,
    result: &'a CheckResult,
}

/// JSON dump of a reproduced trial; matrices use the matrix file format.
pub fn repro_dump(key: &ReproKey, instance: &Instance, result: &CheckResult) -> String {
    let matrices = instance
        .matrices()
        .into_iter()
        .map(|(name, m)| {
            (
                name,
                RawValue::from_string(io::to_json(m)).expect("matrix writer emits valid JSON"),
            )
        })
        .collect();
    let dump = ReproDump {
        law: &result.law,
        key,
        params: instance.params(),
        matrices,
        result,
    };
    serde_json::to_string_pretty(&dump).expect("serializable dump")
}

/// Finds the worst-margin key of `law` in a report.
pub fn worst_key(report: &Report, law: &str) -> Result<ReproKey, HarnessError> {
    let block = report
        .laws
        .iter()
        .find(|l| l.law == law)
        .ok_or_else(|| HarnessError::Usage(format!("law {law:?} is not in the report")))?;
    block
        .failures
        .first()
        .map(|f| f.key.clone())
        .or_else(|| block.worst_margin.as_ref().map(|w| w.key.clone()))
        .or_else(|| block.worst_residual.as_ref().map(|w| w.key.clone()))
        .ok_or_else(|| HarnessError::Usage(format!("law {law:?} has no recorded trials")))
}

/// Grid for a sweep: the configured one or the default two-sided grid.
pub fn sweep_grid(law: LawId, config: &RunConfig) -> crate::Result<Vec<f64>> {
    let (lo, center, hi) = domain(law)?;
    Ok(match &config.grid {
        Some(g) => g.clone(),
        None => two_sided_grid(lo, center, hi, config.points_per_side),
    })
}

/// Sweeps a law on the instance of trial 0, or on a supplied instance.
pub fn sweep(
    law: LawId,
    config: &RunConfig,
    instance: Option<Instance>,
) -> Result<Curve, HarnessError> {
    if !law.is_sweepable() {
        return Err(HarnessError::Usage(format!("{law} is not sweepable")));
    }
    let instance = match instance {
        Some(i) => i,
        None => law.sample(&trial_spec(&law, config, law.boundary_count()))?,
    };
    let grid = sweep_grid(law, config)?;
    sweep_law(law, &instance, &grid, config.tolerances.loewner).map_err(|e| match e {
        crate::Error::Precondition(msg) => HarnessError::Usage(msg),
        e => HarnessError::Core(e),
    })
}

/// One-line human summary per law.
pub fn summary_lines(report: &Report) -> Vec<String> {
    report
        .laws
        .iter()
        .map(|l| {
            let worst = l
                .worst_margin
                .as_ref()
                .map(|w| format!(" worst margin {:.3e} (seed {})", w.value, w.key.seed))
                .unwrap_or_default();
            let verdict = if l.fails == 0 { "PASS" } else { "FAIL" };
            format!(
                "{verdict} {:<24} trials {:>5}  pass {:>5}  fail {:>3}  skip {:>3}{worst}",
                l.law, l.trials, l.passes, l.fails, l.skips
            )
        })
        .collect()
}

/// Builds a sweep instance from explicit matrices (`m = 1`).
pub fn instance_from_matrices(
    law: LawId,
    a: crate::linalg::PDMatrix,
    b: crate::linalg::PDMatrix,
) -> Result<Instance, HarnessError> {
    use crate::laws::InstanceData as D;
    if a.n() != b.n() {
        return Err(HarnessError::Usage(format!(
            "A is {0}x{0} but B is {1}x{1}",
            a.n(),
            b.n()
        )));
    }
    let data = match law {
        LawId::TensorF => D::TensorF { a, b, grid: vec![] },
        LawId::TensorG => D::TensorG { a, b, grid: vec![] },
        LawId::MatrixCallebaut => D::MatrixCallebaut {
            a: vec![a],
            b: vec![b],
            s: 0.5,
            t: 0.5,
        },
        other => {
            return Err(HarnessError::Usage(format!(
                "{other} cannot be swept from matrix files"
            )))
        }
    };
    Ok(Instance { law, seed: 0, data })
}

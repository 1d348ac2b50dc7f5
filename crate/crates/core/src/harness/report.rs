use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use crate::laws::{CheckResult, Status, TrialSpec};

/// Identifies one trial for reproduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReproKey {
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub m: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub boundary: Option<usize>,
}

impl ReproKey {
    pub fn from_trial(index: usize, t: &TrialSpec) -> Self {
        Self {
            trial: index,
            seed: t.seed,
            n: t.n,
            m: t.m,
            boundary: t.boundary,
        }
    }

    pub fn trial_spec(&self, config: &RunConfig) -> TrialSpec {
        TrialSpec {
            seed: self.seed,
            n: self.n,
            m: self.m,
            field: config.field,
            kappa_max: config.kappa_max,
            boundary: self.boundary,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Worst {
    pub value: f64,
    pub key: ReproKey,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureEntry {
    pub key: ReproKey,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub worst_margin: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub trials: usize,
    pub passes: usize,
    pub fails: usize,
    pub skips: usize,
    /// Smallest normalized Loewner margin over all links and trials.
    pub worst_margin: Option<Worst>,
    /// Largest equality residual over all links and trials.
    pub worst_residual: Option<Worst>,
    pub failures: Vec<FailureEntry>,
}

impl LawReport {
    pub fn from_outcomes(
        law: String,
        outcomes: &[(TrialSpec, crate::Result<CheckResult>)],
    ) -> Self {
        let mut report = LawReport {
            law,
            trials: outcomes.len(),
            passes: 0,
            fails: 0,
            skips: 0,
            worst_margin: None,
            worst_residual: None,
            failures: vec![],
        };
        for (index, (trial, outcome)) in outcomes.iter().enumerate() {
            let key = ReproKey::from_trial(index, trial);
            match outcome {
                Err(e) => {
                    report.fails += 1;
                    report.failures.push(FailureEntry {
                        key,
                        worst_margin: None,
                        error: Some(e.to_string()),
                    });
                }
                Ok(result) => {
                    match result.status {
                        Status::Pass => report.passes += 1,
                        Status::Skipped => report.skips += 1,
                        Status::Fail => {
                            report.fails += 1;
                            report.failures.push(FailureEntry {
                                key: key.clone(),
                                worst_margin: result.worst_margin(),
                                error: None,
                            });
                        }
                    }
                    if let Some(m) = result.worst_margin() {
                        if report.worst_margin.as_ref().is_none_or(|w| m < w.value) {
                            report.worst_margin = Some(Worst {
                                value: m,
                                key: key.clone(),
                            });
                        }
                    }
                    if let Some(r) = result.worst_residual() {
                        if report.worst_residual.as_ref().is_none_or(|w| r > w.value) {
                            report.worst_residual = Some(Worst { value: r, key });
                        }
                    }
                }
            }
        }
        report
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub tool: String,
    pub version: String,
    pub config: RunConfig,
    pub laws: Vec<LawReport>,
    pub wall_clock_seconds: f64,
    pub exit_status: u8,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is serializable")
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

use std::path::Path;

use serde::{Deserialize, Serialize};

use super::HarnessError;
use crate::ensembles::FieldKind;
use crate::laws::{LawId, Tolerances};

pub const DEFAULT_TRIALS: usize = 200;
pub const DEFAULT_KAPPA_MAX: f64 = 1e4;
pub const MAX_N: usize = 6;
pub const TENSOR_MAX_N: usize = 3;
pub const SEED_ENV: &str = "MEANSCOPE_SEED";

/// Config file contents; every field optional, flags override.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub laws: Option<LawList>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub field: Option<FieldKind>,
    pub kappa_max: Option<f64>,
    pub tol: Option<f64>,
    pub equality_tol: Option<f64>,
    pub grid: Option<Vec<f64>>,
    pub points_per_side: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum LawList {
    One(String),
    Many(Vec<String>),
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            HarnessError::Usage(format!("cannot read config {}: {e}", path.display()))
        })?;
        serde_json::from_str(&text)
            .map_err(|e| HarnessError::Usage(format!("bad config {}: {e}", path.display())))
    }

    /// Fields of `over` replace those of `self`.
    pub fn merge(self, over: ConfigFile) -> ConfigFile {
        ConfigFile {
            laws: over.laws.or(self.laws),
            trials: over.trials.or(self.trials),
            seed: over.seed.or(self.seed),
            n: over.n.or(self.n),
            m: over.m.or(self.m),
            field: over.field.or(self.field),
            kappa_max: over.kappa_max.or(self.kappa_max),
            tol: over.tol.or(self.tol),
            equality_tol: over.equality_tol.or(self.equality_tol),
            grid: over.grid.or(self.grid),
            points_per_side: over.points_per_side.or(self.points_per_side),
        }
    }
}

/// Resolved run configuration, echoed into reports.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub laws: Vec<String>,
    pub trials: usize,
    pub seed: u64,
    pub n: Option<usize>,
    pub m: Option<usize>,
    pub field: FieldKind,
    pub kappa_max: f64,
    pub tolerances: Tolerances,
    pub grid: Option<Vec<f64>>,
    pub points_per_side: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            laws: LawId::ALL.iter().map(|l| l.name().to_string()).collect(),
            trials: DEFAULT_TRIALS,
            seed: 0,
            n: None,
            m: None,
            field: FieldKind::Complex,
            kappa_max: DEFAULT_KAPPA_MAX,
            tolerances: Tolerances::default(),
            grid: None,
            points_per_side: crate::laws::instance::DEFAULT_POINTS_PER_SIDE,
        }
    }
}

pub fn parse_law_list(spec: &str) -> Vec<String> {
    spec.split(',')
        .map(|s| s.trim().to_string())
        .filter(|s| !s.is_empty())
        .collect()
}

impl RunConfig {
    /// Resolves a merged config; the seed falls back to `MEANSCOPE_SEED`.
    pub fn resolve(file: ConfigFile) -> Result<Self, HarnessError> {
        let env_seed = match std::env::var(SEED_ENV) {
            Ok(v) => Some(
                v.trim()
                    .parse::<u64>()
                    .map_err(|_| HarnessError::Usage(format!("{SEED_ENV}={v:?} is not a u64")))?,
            ),
            Err(_) => None,
        };
        let d = RunConfig::default();
        let laws = match file.laws {
            None => d.laws,
            Some(LawList::One(s)) => parse_law_list(&s),
            Some(LawList::Many(v)) => v,
        };
        let laws = if laws.len() == 1 && laws[0] == "all" {
            RunConfig::default().laws
        } else {
            laws
        };
        let mut tolerances = d.tolerances;
        if let Some(t) = file.tol {
            tolerances.loewner = t;
        }
        if let Some(t) = file.equality_tol {
            tolerances.equality = t;
        }
        let cfg = RunConfig {
            laws,
            trials: file.trials.unwrap_or(d.trials),
            seed: file.seed.or(env_seed).unwrap_or(d.seed),
            n: file.n,
            m: file.m,
            field: file.field.unwrap_or(d.field),
            kappa_max: file.kappa_max.unwrap_or(d.kappa_max),
            tolerances,
            grid: file.grid,
            points_per_side: file.points_per_side.unwrap_or(d.points_per_side),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        for name in &self.laws {
            name.parse::<LawId>()
                .map_err(|_| HarnessError::Usage(format!("unknown law {name:?}")))?;
        }
        if self.n == Some(0) || self.m == Some(0) {
            return Err(HarnessError::Usage("n and m must be positive".into()));
        }
        if !(self.kappa_max >= 1.0 && self.kappa_max <= crate::linalg::MAX_CONDITION) {
            return Err(HarnessError::Usage(format!(
                "kappa_max={} outside [1, 1e12]",
                self.kappa_max
            )));
        }
        let t = &self.tolerances;
        if !(t.loewner >= 0.0 && t.equality >= 0.0) {
            return Err(HarnessError::Usage(
                "tolerances must be non-negative".into(),
            ));
        }
        if self.points_per_side < 2 {
            return Err(HarnessError::Usage(
                "points_per_side must be at least 2".into(),
            ));
        }
        Ok(())
    }

    pub fn law_ids(&self) -> Vec<LawId> {
        self.laws.iter().filter_map(|n| n.parse().ok()).collect()
    }
}

/// Parses `a:b:step` into an inclusive grid.
pub fn parse_grid(spec: &str) -> Result<Vec<f64>, HarnessError> {
    let bad = || HarnessError::Usage(format!("grid {spec:?} is not a:b:step"));
    let parts: Vec<f64> = spec
        .split(':')
        .map(|p| p.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_, _>>()?;
    let [lo, hi, step] = parts[..] else {
        return Err(bad());
    };
    if !(step > 0.0) || !(hi >= lo) || !lo.is_finite() || !hi.is_finite() {
        return Err(bad());
    }
    let count = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    if count > 100_000 {
        return Err(HarnessError::Usage(format!(
            "grid {spec:?} has too many points"
        )));
    }
    let mut grid: Vec<f64> = (0..count).map(|i| lo + step * i as f64).collect();
    if let Some(last) = grid.last_mut() {
        if (*last - hi).abs() <= 1e-9 * step {
            *last = hi;
        }
    }
    Ok(grid)
}

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use meanscope::ensembles::FieldKind;
use meanscope::harness::config::{parse_grid, ConfigFile, LawList};
use meanscope::harness::{self, ExitStatus, HarnessError, Report, ReproKey, RunConfig};
use meanscope::laws::LawId;
use meanscope::linalg::{io, PDMatrix};

#[derive(Parser)]
#[command(
    name = "meanscope",
    version,
    about = "Numerical checks of matrix-mean inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run law suites over random ensembles.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated law names, or "all".
        #[arg(long)]
        laws: Option<String>,
    },
    /// Sample a one-parameter law on a grid and write a CSV curve.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        law: String,
        /// Matrix file for A; requires --b.
        #[arg(long, requires = "b")]
        a: Option<PathBuf>,
        /// Matrix file for B; requires --a.
        #[arg(long, requires = "a")]
        b: Option<PathBuf>,
    },
    /// Re-run one trial and dump its instance and links.
    Repro {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        law: String,
        /// Report to take the worst or first failing trial from.
        #[arg(long, conflicts_with = "trial_seed")]
        report: Option<PathBuf>,
        /// Trial seed as listed in a report.
        #[arg(long, requires = "n")]
        trial_seed: Option<u64>,
        #[arg(long)]
        boundary: Option<usize>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    field: Option<FieldKind>,
    #[arg(long)]
    kappa_max: Option<f64>,
    #[arg(long)]
    tol: Option<f64>,
    /// Inclusive grid `a:b:step`.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

impl Common {
    fn config(&self, laws: Option<&str>) -> Result<RunConfig, HarnessError> {
        let base = match &self.config {
            Some(path) => ConfigFile::load(path)?,
            None => ConfigFile::default(),
        };
        let flags = ConfigFile {
            laws: laws.map(|l| LawList::One(l.to_string())),
            trials: self.trials,
            seed: self.seed,
            n: self.n,
            m: self.m,
            field: self.field,
            kappa_max: self.kappa_max,
            tol: self.tol,
            grid: self.grid.as_deref().map(parse_grid).transpose()?,
            ..Default::default()
        };
        RunConfig::resolve(base.merge(flags))
    }
}

fn parse_law(name: &str) -> Result<LawId, HarnessError> {
    name.parse()
        .map_err(|_| HarnessError::Usage(format!("unknown law {name:?}")))
}

fn write_or_print(out: Option<&Path>, text: &str) -> Result<(), HarnessError> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn load_pd(path: &Path) -> Result<PDMatrix, HarnessError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| HarnessError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let h = io::hermitian_from_json(&text)
        .map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))?;
    PDMatrix::new(h).map_err(|e| HarnessError::Usage(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<ExitStatus, HarnessError> {
    match cli.command {
        Command::Verify { common, laws } => {
            let config = common.config(laws.as_deref())?;
            let report = harness::verify_config(&config);
            if let Some(path) = &common.out {
                std::fs::write(path, report.to_json())?;
            }
            for line in harness::summary_lines(&report) {
                println!("{line}");
            }
            for law in report.laws.iter().filter(|l| l.fails > 0) {
                let seeds: Vec<String> = law
                    .failures
                    .iter()
                    .map(|f| f.key.seed.to_string())
                    .collect();
                println!("failing seeds for {}: {}", law.law, seeds.join(" "));
            }
            Ok(if report.exit_status == 0 {
                ExitStatus::Success
            } else {
                ExitStatus::LawViolation
            })
        }
        Command::Sweep { common, law, a, b } => {
            let config = common.config(None)?;
            let law = parse_law(&law)?;
            let instance = match (a, b) {
                (Some(a), Some(b)) => Some(harness::instance_from_matrices(
                    law,
                    load_pd(&a)?,
                    load_pd(&b)?,
                )?),
                _ => None,
            };
            let curve = harness::sweep(law, &config, instance)?;
            write_or_print(common.out.as_deref(), &curve.to_csv())?;
            Ok(if curve.all_hold() {
                ExitStatus::Success
            } else {
                ExitStatus::LawViolation
            })
        }
        Command::Repro {
            common,
            law,
            report,
            trial_seed,
            boundary,
        } => {
            let law = parse_law(&law)?;
            let (config, key) = match (report, trial_seed) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path)?;
                    let report = Report::from_json(&text).map_err(|e| {
                        HarnessError::Usage(format!("bad report {}: {e}", path.display()))
                    })?;
                    let key = harness::worst_key(&report, law.name())?;
                    (report.config, key)
                }
                (None, Some(seed)) => {
                    let config = common.config(None)?;
                    let n = config
                        .n
                        .ok_or_else(|| HarnessError::Usage("--trial-seed needs --n".into()))?;
                    let key = ReproKey {
                        trial: 0,
                        seed,
                        n,
                        m: config.m.unwrap_or(1),
                        boundary,
                    };
                    (config, key)
                }
                (None, None) => {
                    return Err(HarnessError::Usage(
                        "repro needs --report or --trial-seed".into(),
                    ))
                }
            };
            if key.m > law.max_m() && law.max_m() == 1 {
                return Err(HarnessError::Usage(format!(
                    "{law} takes single pairs, got m={}",
                    key.m
                )));
            }
            let (instance, result) = harness::reproduce(&law, &config, &key)?;
            write_or_print(
                common.out.as_deref(),
                &(harness::repro_dump(&key, &instance, &result) + "\n"),
            )?;
            Ok(if result.status == meanscope::laws::Status::Fail {
                ExitStatus::LawViolation
            } else {
                ExitStatus::Success
            })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                ExitStatus::Usage.code()
            } else {
                0
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(status) => ExitCode::from(status.code()),
        Err(e) => {
            eprintln!("meanscope: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

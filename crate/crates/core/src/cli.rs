//! Command-line front end.
//!
//! [`main_with_args`] parses arguments into a [`RunSpec`], [`run`] executes
//! it, and [`Report::render`] formats the result as JSON, CSV, or text.
//! Reports are plain data: floats are rounded to 12 significant digits when
//! a report is built, so emitted JSON parses back to identical values and
//! reruns with the same seed are byte-identical.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::Error;
use crate::likelihood::log_likelihood;
use crate::lsq::{self, LsqConfig, LsqMode};
use crate::mle::{self, MleConfig, MleMode};
use crate::model::{
    cell_matrix_from_free_vars, reduced_form, CellMatrix, Diagnostics, EstimateResult, GroupCounts,
    Probability, TypeCounts,
};
use crate::resampling::{self, Replicate, REPLICATE_CSV_HEADER};
use crate::{PROWESS_GROUPS, PROWESS_PUBLISHED_FREE_VARS};

/// Environment variable that overrides the default seed.
pub const SEED_ENV: &str = "OUTCOME_TYPES_SEED";

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_ITERATIONS: u64 = 1000;

/// Published Monte Carlo summary for the PROWESS-calibrated population:
/// per-type mean bias and RMSE, in participants.
pub const PUBLISHED_MC_BIAS: f64 = 42.0;
pub const PUBLISHED_MC_RMSE: f64 = 124.0;

/// Exit status for each failure class.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Parse { path: String, message: String },
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("solver failure: {0}")]
    Solver(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Validation(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Io(_) => 2,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::EnumerationCap { .. } => CliError::Solver(e.to_string()),
            other => CliError::Validation(other.to_string()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    /// Least-squares estimate of the type counts.
    Estimate,
    /// Log-likelihood of group counts `g` under type counts `t`.
    Likelihood,
    /// Maximum likelihood estimate of the type counts.
    Mle,
    /// Bootstrap standard errors of the least-squares estimate.
    Bootstrap,
    /// Monte Carlo bias and RMSE of the least-squares estimator for known `t`.
    Montecarlo,
    /// Difference in mortality between the arms.
    ReducedForm,
    /// Full analysis of the PROWESS trial counts.
    Prowess,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
    Text,
}

/// Raw command-line arguments.
#[derive(Debug, Parser)]
#[command(
    name = "outcome-types",
    version,
    about = "Estimate live-regardless, saved, killed, and die-regardless counts"
)]
pub struct Args {
    #[command(subcommand)]
    pub command: Command,
    /// JSON input file: {"g":[..4],"t":[..4],"p":..,"seed":..,"iterations":..,"restarts":..,"mode":..}
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,
    /// Group counts: dead/alive in intervention, dead/alive in control.
    #[arg(long, global = true, value_delimiter = ',')]
    pub g: Option<Vec<u64>>,
    /// Type counts: live regardless, saved, killed, die regardless.
    #[arg(long, global = true, value_delimiter = ',')]
    pub t: Option<Vec<u64>>,
    /// Probability of assignment to the intervention arm [default: 0.5]
    #[arg(long, global = true)]
    pub p: Option<f64>,
    #[arg(long, global = true, env = SEED_ENV)]
    pub seed: Option<u64>,
    /// Bootstrap iterations or Monte Carlo simulations [default: 1000]
    #[arg(long, global = true)]
    pub iterations: Option<u64>,
    #[arg(long, global = true)]
    pub restarts: Option<u32>,
    /// exact | heuristic (mle); exact | relax_and_search | branch_and_bound (least squares)
    #[arg(long, global = true)]
    pub mode: Option<String>,
    /// Largest transfer per hill-climbing move in heuristic MLE.
    #[arg(long, global = true)]
    pub radius: Option<u32>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

/// Optional fields of a JSON input file. Command-line flags take precedence.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputFile {
    pub g: Option<[u64; 4]>,
    pub t: Option<[u64; 4]>,
    pub p: Option<f64>,
    pub seed: Option<u64>,
    pub iterations: Option<u64>,
    pub restarts: Option<u32>,
    pub mode: Option<String>,
    pub radius: Option<u32>,
}

impl InputFile {
    pub fn parse(text: &str, path: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse {
            path: path.to_string(),
            message: e.to_string(),
        })
    }
}

/// A fully resolved command.
#[derive(Debug, Clone, PartialEq)]
pub struct RunSpec {
    pub command: Command,
    pub g: Option<GroupCounts>,
    pub t: Option<TypeCounts>,
    pub p: f64,
    pub seed: u64,
    pub iterations: u64,
    pub restarts: Option<u32>,
    pub mode: Option<String>,
    pub radius: Option<u32>,
    pub format: Format,
}

impl RunSpec {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            g: None,
            t: None,
            p: 0.5,
            seed: DEFAULT_SEED,
            iterations: DEFAULT_ITERATIONS,
            restarts: None,
            mode: None,
            radius: None,
            format: Format::Json,
        }
    }

    pub fn with_g(mut self, g: [u64; 4]) -> Self {
        self.g = Some(GroupCounts::new(g));
        self
    }

    pub fn with_t(mut self, t: [u64; 4]) -> Self {
        self.t = Some(TypeCounts::new(t));
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_iterations(mut self, iterations: u64) -> Self {
        self.iterations = iterations;
        self
    }

    pub fn with_mode(mut self, mode: &str) -> Self {
        self.mode = Some(mode.to_string());
        self
    }

    /// Merges parsed arguments over an optional input file.
    pub fn from_args(args: &Args) -> Result<Self, CliError> {
        let file = match &args.input {
            Some(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| CliError::Parse {
                    path: path.display().to_string(),
                    message: e.to_string(),
                })?;
                InputFile::parse(&text, &path.display().to_string())?
            }
            None => InputFile::default(),
        };
        let four = |v: &Vec<u64>, name: &str| -> Result<[u64; 4], CliError> {
            <[u64; 4]>::try_from(v.as_slice()).map_err(|_| {
                CliError::Validation(format!("--{name} needs exactly 4 counts, got {}", v.len()))
            })
        };
        let g = match &args.g {
            Some(v) => Some(four(v, "g")?),
            None => file.g,
        };
        let t = match &args.t {
            Some(v) => Some(four(v, "t")?),
            None => file.t,
        };
        Ok(Self {
            command: args.command,
            g: g.map(GroupCounts::new),
            t: t.map(TypeCounts::new),
            p: args.p.or(file.p).unwrap_or(0.5),
            seed: args.seed.or(file.seed).unwrap_or(DEFAULT_SEED),
            iterations: args
                .iterations
                .or(file.iterations)
                .unwrap_or(DEFAULT_ITERATIONS),
            restarts: args.restarts.or(file.restarts),
            mode: args.mode.clone().or(file.mode),
            radius: args.radius.or(file.radius),
            format: args.format,
        })
    }

    fn probability(&self) -> Result<Probability, CliError> {
        Ok(Probability::new(self.p)?)
    }

    fn groups(&self) -> Result<GroupCounts, CliError> {
        self.g.ok_or_else(|| {
            CliError::Validation(format!(
                "`{}` needs group counts g (pass --g or an input file with \"g\")",
                self.command_name()
            ))
        })
    }

    fn types(&self) -> Result<TypeCounts, CliError> {
        self.t.ok_or_else(|| {
            CliError::Validation(format!(
                "`{}` needs type counts t (pass --t or an input file with \"t\")",
                self.command_name()
            ))
        })
    }

    fn command_name(&self) -> &'static str {
        match self.command {
            Command::Estimate => "estimate",
            Command::Likelihood => "likelihood",
            Command::Mle => "mle",
            Command::Bootstrap => "bootstrap",
            Command::Montecarlo => "montecarlo",
            Command::ReducedForm => "reduced-form",
            Command::Prowess => "prowess",
        }
    }

    fn lsq_config(&self) -> Result<LsqConfig, CliError> {
        let mut cfg = LsqConfig {
            seed: self.seed,
            ..LsqConfig::default()
        };
        if let Some(mode) = &self.mode {
            cfg.mode = mode.parse::<LsqMode>()?;
        }
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    fn mle_config(&self) -> Result<MleConfig, CliError> {
        let mut cfg = MleConfig {
            seed: self.seed,
            ..MleConfig::default()
        };
        if let Some(mode) = &self.mode {
            cfg.mode = mode.parse::<MleMode>()?;
        }
        if let Some(r) = self.restarts {
            cfg.restarts = r;
        }
        if let Some(r) = self.radius {
            cfg.neighborhood_radius = r;
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Rounds to 12 significant digits; non-finite values pass through.
pub fn sig12(v: f64) -> f64 {
    if !v.is_finite() || v == 0.0 {
        return v;
    }
    format!("{v:.11e}").parse().expect("formatted float parses")
}

fn sig12_arr<const N: usize>(v: [f64; N]) -> [f64; N] {
    v.map(sig12)
}

/// Least-squares or likelihood estimate as reported.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateSummary {
    pub mode: String,
    pub t_hat: TypeCounts,
    pub n_hat: CellMatrix,
    /// Free coordinates `(n(1,2), n(2,3), n(3,1), n(1,4))` of `n_hat`.
    pub free_vars: [u64; 4],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub objective: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub log_likelihood: Option<f64>,
    pub ties: u64,
    pub diagnostics: Diagnostics,
}

impl EstimateSummary {
    fn new(mode: impl ToString, est: &EstimateResult) -> Self {
        let (objective, log_likelihood) = match est.score {
            crate::model::Score::Objective(v) => (Some(sig12(v)), None),
            crate::model::Score::LogLikelihood(v) => (None, Some(sig12(v))),
        };
        Self {
            mode: mode.to_string(),
            t_hat: est.t_hat,
            n_hat: est.n_hat,
            free_vars: est.n_hat.free_vars(),
            objective,
            log_likelihood,
            ties: est.ties,
            diagnostics: est.diagnostics,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateReport {
    pub p: f64,
    pub g: GroupCounts,
    pub estimate: EstimateSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodReport {
    pub p: f64,
    pub t: TypeCounts,
    pub g: GroupCounts,
    /// `null` when the data are impossible under `t`.
    pub log_likelihood: Option<f64>,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReducedFormReport {
    pub g: GroupCounts,
    pub intervention_mortality: f64,
    pub control_mortality: f64,
    pub reduced_form: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub p: f64,
    pub g: GroupCounts,
    pub mode: String,
    pub seed: u64,
    pub iterations: u64,
    pub successes: u64,
    pub failures: u64,
    pub se: [f64; 4],
    pub se_cells: [[f64; 4]; 4],
    /// Largest over smallest type-count standard error.
    pub se_ratio: f64,
    #[serde(skip)]
    pub replicates: Vec<Replicate>,
}

/// Published values printed next to ours when the simulated population is
/// the PROWESS-calibrated one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedMonteCarlo {
    pub mean_bias: f64,
    pub rmse: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloSummary {
    pub p: f64,
    pub true_t: TypeCounts,
    pub mode: String,
    pub seed: u64,
    pub m: u64,
    pub successes: u64,
    pub failures: u64,
    pub mean_bias: [f64; 4],
    pub rmse: [f64; 4],
    pub mean_abs_error: [f64; 4],
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub published: Option<PublishedMonteCarlo>,
    #[serde(skip)]
    pub replicates: Vec<Replicate>,
}

/// Comparison with the published PROWESS matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PublishedComparison {
    pub t: TypeCounts,
    pub n_31: u64,
    pub objective: f64,
    /// Our estimate reproduces the published rows and `n(3,1)`.
    pub matches: bool,
    /// Set when the estimate differs from the published one.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProwessReport {
    pub p: f64,
    pub g: GroupCounts,
    pub reduced_form: f64,
    pub estimate: EstimateSummary,
    /// Estimated shares of the sample, by type.
    pub shares: [f64; 4],
    /// Killed participants per saved participant, `t(3) / t(2)`.
    pub killed_per_saved: f64,
    /// `t(3):t(2)` as counts.
    pub killed_to_saved: String,
    /// Killed participants actually assigned to the intervention, `n(3,1)`.
    pub killed_in_trial: u64,
    pub published: PublishedComparison,
    pub bootstrap: BootstrapSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Estimate(EstimateReport),
    Likelihood(LikelihoodReport),
    Mle(EstimateReport),
    Bootstrap(BootstrapSummary),
    Montecarlo(MonteCarloSummary),
    ReducedForm(ReducedFormReport),
    Prowess(ProwessReport),
}

/// Executes a resolved command.
pub fn run(spec: &RunSpec) -> Result<Report, CliError> {
    match spec.command {
        Command::Estimate => {
            let g = spec.groups()?;
            let p = spec.probability()?;
            let cfg = spec.lsq_config()?;
            let est = lsq::solve(&g, p, &cfg)?;
            Ok(Report::Estimate(EstimateReport {
                p: p.get(),
                g,
                estimate: EstimateSummary::new(cfg.mode, &est),
            }))
        }
        Command::Likelihood => {
            let g = spec.groups()?;
            let t = spec.types()?;
            let p = spec.probability()?;
            let ll = log_likelihood(&t, &g, p);
            Ok(Report::Likelihood(LikelihoodReport {
                p: p.get(),
                t,
                g,
                log_likelihood: (!ll.is_impossible()).then(|| sig12(ll.value())),
                probability: sig12(ll.prob()),
            }))
        }
        Command::Mle => {
            let g = spec.groups()?;
            let p = spec.probability()?;
            let cfg = spec.mle_config()?;
            let est = mle::estimate(&g, p, &cfg)?;
            Ok(Report::Mle(EstimateReport {
                p: p.get(),
                g,
                estimate: EstimateSummary::new(cfg.mode, &est),
            }))
        }
        Command::Bootstrap => {
            let g = spec.groups()?;
            let p = spec.probability()?;
            Ok(Report::Bootstrap(run_bootstrap(&g, p, spec)?))
        }
        Command::Montecarlo => {
            let t = spec.types()?;
            let p = spec.probability()?;
            let cfg = spec.lsq_config()?;
            let r = resampling::monte_carlo(&t, p, spec.iterations, spec.seed, &cfg)?;
            let calibrated = t == TypeCounts::new([964, 308, 205, 213]) && p == Probability::HALF;
            Ok(Report::Montecarlo(MonteCarloSummary {
                p: p.get(),
                true_t: t,
                mode: cfg.mode.to_string(),
                seed: spec.seed,
                m: r.m,
                successes: r.replicates.len() as u64,
                failures: r.failures.len() as u64,
                mean_bias: sig12_arr(r.mean_bias),
                rmse: sig12_arr(r.rmse),
                mean_abs_error: sig12_arr(r.mean_abs_error),
                published: calibrated.then_some(PublishedMonteCarlo {
                    mean_bias: PUBLISHED_MC_BIAS,
                    rmse: PUBLISHED_MC_RMSE,
                }),
                replicates: rounded(r.replicates),
            }))
        }
        Command::ReducedForm => {
            let g = spec.groups()?;
            Ok(Report::ReducedForm(reduced_form_report(&g)?))
        }
        Command::Prowess => run_prowess(spec),
    }
}

fn rounded(mut replicates: Vec<Replicate>) -> Vec<Replicate> {
    for r in &mut replicates {
        r.objective = sig12(r.objective);
    }
    replicates
}

fn reduced_form_report(g: &GroupCounts) -> Result<ReducedFormReport, CliError> {
    let rf = reduced_form(g)?;
    Ok(ReducedFormReport {
        g: *g,
        intervention_mortality: sig12(g[0] as f64 / g.intervention_arm() as f64),
        control_mortality: sig12(g[2] as f64 / g.control_arm() as f64),
        reduced_form: sig12(rf),
    })
}

fn run_bootstrap(
    g: &GroupCounts,
    p: Probability,
    spec: &RunSpec,
) -> Result<BootstrapSummary, CliError> {
    let cfg = spec.lsq_config()?;
    let r = resampling::bootstrap(g, p, spec.iterations, spec.seed, &cfg)?;
    Ok(BootstrapSummary {
        p: p.get(),
        g: *g,
        mode: cfg.mode.to_string(),
        seed: spec.seed,
        iterations: r.iterations,
        successes: r.replicates.len() as u64,
        failures: r.failures.len() as u64,
        se: sig12_arr(r.se),
        se_cells: r.se_cells.map(sig12_arr),
        se_ratio: sig12(r.se_ratio()),
        replicates: rounded(r.replicates),
    })
}

fn run_prowess(spec: &RunSpec) -> Result<Report, CliError> {
    let g = PROWESS_GROUPS;
    let p = Probability::HALF;
    let cfg = spec.lsq_config()?;
    let est = lsq::solve(&g, p, &cfg)?;
    let published = cell_matrix_from_free_vars(PROWESS_PUBLISHED_FREE_VARS, &g)?;
    let published_objective = lsq::objective(&published, p);
    let ours = est.score.value();
    let matches =
        est.t_hat == published.type_counts() && est.n_hat.get(2, 0) == published.get(2, 0);
    let note = if matches {
        None
    } else if ours < published_objective - lsq::tie_tol(published_objective) {
        Some(format!(
            "estimate dominates the published matrix: objective {} < {}",
            sig12(ours),
            sig12(published_objective)
        ))
    } else if ours <= published_objective + lsq::tie_tol(published_objective) {
        Some(format!(
            "estimate ties the published matrix at objective {}",
            sig12(ours)
        ))
    } else {
        Some(format!(
            "published matrix scores lower: {} < {}; try --mode branch_and_bound",
            sig12(published_objective),
            sig12(ours)
        ))
    };
    let n = g.total() as f64;
    let t = est.t_hat;
    Ok(Report::Prowess(ProwessReport {
        p: p.get(),
        g,
        reduced_form: sig12(reduced_form(&g)?),
        estimate: EstimateSummary::new(cfg.mode, &est),
        shares: sig12_arr(t.0.map(|v| v as f64 / n)),
        killed_per_saved: sig12(t[2] as f64 / t[1] as f64),
        killed_to_saved: format!("{}:{}", t[2], t[1]),
        killed_in_trial: est.n_hat.get(2, 0),
        published: PublishedComparison {
            t: published.type_counts(),
            n_31: published.get(2, 0),
            objective: sig12(published_objective),
            matches,
            note,
        },
        bootstrap: run_bootstrap(&g, p, spec)?,
    }))
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => self.to_json(),
            Format::Csv => self.to_csv(),
            Format::Text => self.to_text(),
        }
    }

    /// One header row and one data row; bootstrap and Monte Carlo reports
    /// emit the replicate stream instead.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let join = |v: &[String]| v.join(",");
        match self {
            Report::Estimate(r) | Report::Mle(r) => {
                let e = &r.estimate;
                let mut head = vec!["p".to_string(), "g1,g2,g3,g4".into(), "t1,t2,t3,t4".into()];
                let mut row = vec![r.p.to_string(), join_u(&r.g.0), join_u(&e.t_hat.0)];
                for i in 1..=4 {
                    for j in 1..=4 {
                        head.push(format!("n{i}{j}"));
                    }
                }
                row.extend(e.n_hat.rows().iter().flatten().map(u64::to_string));
                head.push("score".into());
                row.push(
                    e.objective
                        .or(e.log_likelihood)
                        .map(|v| v.to_string())
                        .unwrap_or_default(),
                );
                head.push("ties".into());
                row.push(e.ties.to_string());
                let _ = writeln!(out, "{}\n{}", join(&head), join(&row));
            }
            Report::Likelihood(r) => {
                let _ = writeln!(out, "p,g1,g2,g3,g4,t1,t2,t3,t4,log_likelihood,probability");
                let ll = r
                    .log_likelihood
                    .map(|v| v.to_string())
                    .unwrap_or_else(|| "-inf".into());
                let _ = writeln!(
                    out,
                    "{},{},{},{},{}",
                    r.p,
                    join_u(&r.g.0),
                    join_u(&r.t.0),
                    ll,
                    r.probability
                );
            }
            Report::ReducedForm(r) => {
                let _ = writeln!(
                    out,
                    "g1,g2,g3,g4,intervention_mortality,control_mortality,reduced_form"
                );
                let _ = writeln!(
                    out,
                    "{},{},{},{}",
                    join_u(&r.g.0),
                    r.intervention_mortality,
                    r.control_mortality,
                    r.reduced_form
                );
            }
            Report::Bootstrap(BootstrapSummary { replicates, .. })
            | Report::Montecarlo(MonteCarloSummary { replicates, .. })
            | Report::Prowess(ProwessReport {
                bootstrap: BootstrapSummary { replicates, .. },
                ..
            }) => {
                let _ = writeln!(out, "{REPLICATE_CSV_HEADER}");
                for r in replicates {
                    let _ = writeln!(out, "{}", r.csv_row(|v| v.to_string()));
                }
            }
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        match self {
            Report::Estimate(r) | Report::Mle(r) => {
                let _ = writeln!(out, "data g = {:?}, p = {}", r.g.0, r.p);
                text_estimate(&mut out, &r.estimate);
            }
            Report::Likelihood(r) => {
                let _ = writeln!(out, "t = {:?}, g = {:?}, p = {}", r.t.0, r.g.0, r.p);
                match r.log_likelihood {
                    Some(ll) => {
                        let _ = writeln!(
                            out,
                            "log P(G = g | t, p) = {ll}  (probability {})",
                            r.probability
                        );
                    }
                    None => {
                        let _ = writeln!(out, "P(G = g | t, p) = 0: t cannot produce g");
                    }
                }
            }
            Report::ReducedForm(r) => {
                let _ = writeln!(
                    out,
                    "mortality, intervention arm: {}",
                    r.intervention_mortality
                );
                let _ = writeln!(out, "mortality, control arm:      {}", r.control_mortality);
                let _ = writeln!(out, "reduced form:                {:.4}", r.reduced_form);
            }
            Report::Bootstrap(b) => text_bootstrap(&mut out, b),
            Report::Montecarlo(m) => {
                let _ = writeln!(
                    out,
                    "{} simulated experiments from t = {:?}, p = {} ({} failed)",
                    m.m, m.true_t.0, m.p, m.failures
                );
                let _ = writeln!(
                    out,
                    "{:<18}{:>12}{:>12}{:>12}",
                    "type", "mean bias", "rmse", "mean |err|"
                );
                for (i, name) in TYPE_NAMES.iter().enumerate() {
                    let _ = writeln!(
                        out,
                        "{:<18}{:>12.2}{:>12.2}{:>12.2}",
                        name, m.mean_bias[i], m.rmse[i], m.mean_abs_error[i]
                    );
                }
                if let Some(pubd) = &m.published {
                    let _ = writeln!(
                        out,
                        "published (each type): mean bias ~{}, rmse ~{}",
                        pubd.mean_bias, pubd.rmse
                    );
                    let _ = writeln!(
                        out,
                        "ours (type average): |mean bias| {:.1}, rmse {:.1}",
                        m.mean_bias.iter().map(|v| v.abs()).sum::<f64>() / 4.0,
                        m.rmse.iter().sum::<f64>() / 4.0
                    );
                }
            }
            Report::Prowess(r) => {
                let _ = writeln!(out, "PROWESS: g = {:?}, p = {}", r.g.0, r.p);
                let _ = writeln!(out, "reduced form: {:.4}", r.reduced_form);
                text_estimate(&mut out, &r.estimate);
                let _ = writeln!(
                    out,
                    "killed:saved = {} ({:.3}); n(3,1) = {} killed in the intervention arm",
                    r.killed_to_saved, r.killed_per_saved, r.killed_in_trial
                );
                let _ = writeln!(
                    out,
                    "published t = {:?}, n(3,1) = {}, objective {}: {}",
                    r.published.t.0,
                    r.published.n_31,
                    r.published.objective,
                    if r.published.matches {
                        "reproduced"
                    } else {
                        "not reproduced"
                    }
                );
                if let Some(note) = &r.published.note {
                    let _ = writeln!(out, "note: {note}");
                }
                text_bootstrap(&mut out, &r.bootstrap);
            }
        }
        out
    }
}

const TYPE_NAMES: [&str; 4] = ["live regardless", "saved", "killed", "die regardless"];

fn join_u(v: &[u64]) -> String {
    v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")
}

fn text_estimate(out: &mut String, e: &EstimateSummary) {
    let _ = writeln!(out, "{:<18}{:>8}   n(i, 1..4)", "type", "t_hat");
    for (i, name) in TYPE_NAMES.iter().enumerate() {
        let _ = writeln!(
            out,
            "{:<18}{:>8}   {:?}",
            name,
            e.t_hat[i],
            e.n_hat.rows()[i]
        );
    }
    if let Some(v) = e.objective {
        let _ = writeln!(
            out,
            "objective {v} ({} mode, {} tied optima)",
            e.mode, e.ties
        );
    }
    if let Some(v) = e.log_likelihood {
        let _ = writeln!(
            out,
            "log-likelihood {v} ({} mode, {} tied optima)",
            e.mode, e.ties
        );
    }
}

fn text_bootstrap(out: &mut String, b: &BootstrapSummary) {
    let _ = writeln!(
        out,
        "bootstrap: {} iterations, seed {}, {} failed",
        b.iterations, b.seed, b.failures
    );
    for (i, name) in TYPE_NAMES.iter().enumerate() {
        let _ = writeln!(out, "  se {:<18}{:>10.2}", name, b.se[i]);
    }
    let _ = writeln!(out, "  max/min se ratio {:.3}", b.se_ratio);
}

/// Entry point for the binary; returns the process exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args = match Args::try_parse_from(args) {
        Ok(a) => a,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(&args) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn execute(args: &Args) -> Result<(), CliError> {
    let spec = RunSpec::from_args(args)?;
    let report = run(&spec)?;
    let text = report.render(spec.format);
    match &args.output {
        Some(path) => std::fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig12_rounds() {
        assert_eq!(sig12(0.1234567890123456), 0.123456789012);
        assert_eq!(sig12(-1234567.8901234567), -1234567.89012);
        assert_eq!(sig12(0.0), 0.0);
        assert!(sig12(f64::NEG_INFINITY).is_infinite());
    }

    #[test]
    fn input_file_errors_carry_position() {
        let err =
            InputFile::parse("{\n  \"g\": [1, 2, 3],\n  \"p\": 0.5\n}", "in.json").unwrap_err();
        let msg = err.to_string();
        assert!(msg.starts_with("in.json:"), "{msg}");
        assert!(msg.contains("line 2 column"), "{msg}");
        let err = InputFile::parse("{\"q\": 1}", "x.json").unwrap_err();
        assert!(err.to_string().contains("unknown field `q`"), "{err}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn degenerate_estimate() {
        let r = run(&RunSpec::new(Command::Estimate).with_g([0, 5, 0, 5])).unwrap();
        let Report::Estimate(r) = r else { panic!() };
        assert_eq!(r.estimate.t_hat, TypeCounts::new([10, 0, 0, 0]));
    }

    #[test]
    fn validation_errors() {
        let err = run(&RunSpec::new(Command::Estimate)).unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("needs group counts"));
        let err = run(&RunSpec::new(Command::Estimate)
            .with_g([1, 1, 1, 1])
            .with_p(1.0))
        .unwrap_err();
        assert!(
            err.to_string().contains("strictly between 0 and 1"),
            "{err}"
        );
        let err = run(&RunSpec::new(Command::ReducedForm).with_g([0, 0, 4, 4])).unwrap_err();
        assert!(
            err.to_string().contains("intervention arm is empty"),
            "{err}"
        );
        let err = run(&RunSpec::new(Command::Estimate)
            .with_g([1, 1, 1, 1])
            .with_mode("nope"))
        .unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let err = run(&RunSpec::new(Command::Mle).with_g([100, 100, 100, 100])).unwrap_err();
        assert_eq!(err.exit_code(), 3);
    }
}

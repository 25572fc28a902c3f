//! Command-line front end.
//!
//! Every subcommand renders its output to bytes first ([`execute`]); only
//! [`run`] touches the file system or standard streams. CSV files start with
//! `#` comment lines carrying the version, seed and configuration; JSON
//! files wrap the result as `{config, report, provenance}`.

use std::f64::consts::PI;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::acceptance::{self, AcceptanceOptions};
use crate::diagnostics::{hypothesis_traces, HypothesisTrace};
use crate::distributions::{sample_sym_beta, sample_theta, sym_beta_moments, theta_moments};
use crate::ensembles::{sample_points, CoefficientLaw, EnsembleKind, EnsembleSpec};
use crate::error::Error;
use crate::rng::{run_trials, stream};
use crate::statistics::{
    run_fluctuation_experiment, summarize, windows_for, ExperimentReport, FluctuationSample, Normalization, Window,
};

/// Version string baked in at build time: `git describe` output when the
/// source tree is a tagged checkout, otherwise the package version with the
/// abbreviated commit appended when available.
pub const VERSION: &str = env!("BETA_ENSEMBLE_VERSION");

#[derive(Debug, Parser)]
#[command(name = "beta-ensemble", version = VERSION, about = "Circular and Jacobi β-ensembles via Prüfer phases")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Draw point configurations.
    Sample(RunArgs),
    /// Count points in arcs (circular) or caps `[2 cos θ, 2]` (Jacobi).
    Count(RunArgs),
    /// Normalized count fluctuations and their summary.
    Fluctuations(RunArgs),
    /// Trial-averaged martingale hypothesis statistics over a grid of term
    /// counts up to `--n`.
    Diagnostics(RunArgs),
    /// Closed-form coefficient moments against Monte Carlo (`--trials` draws
    /// per coefficient).
    Moments(RunArgs),
    /// Run the acceptance suite.
    Verify(VerifyArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Sample(_) => "sample",
            Command::Count(_) => "count",
            Command::Fluctuations(_) => "fluctuations",
            Command::Diagnostics(_) => "diagnostics",
            Command::Moments(_) => "moments",
            Command::Verify(_) => "verify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    #[arg(long, value_enum, default_value_t = EnsembleKind::Circular)]
    pub ensemble: EnsembleKind,
    /// Number of points (for `diagnostics`: the largest number of terms).
    #[arg(long, default_value_t = 64)]
    pub n: usize,
    #[arg(long, default_value_t = 2.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    #[arg(long, default_value_t = 1.0)]
    pub b: f64,
    /// Comma-separated, sorted angles. Circular: arc endpoints in (-π, π).
    /// Jacobi: cap angles in (0, π).
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub thetas: Vec<f64>,
    #[arg(long, default_value_t = 1000)]
    pub trials: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[arg(long, value_enum, default_value_t = Normalization::Theorem)]
    pub normalization: Normalization,
    /// Worker threads; overridden by BETA_ENSEMBLE_THREADS.
    #[arg(long)]
    pub parallel: Option<usize>,
    /// Also write a gnuplot script `<out>.gp` (fluctuations, CSV only).
    #[arg(long)]
    pub emit_plot_script: bool,
}

impl Default for RunArgs {
    fn default() -> Self {
        RunArgs {
            ensemble: EnsembleKind::Circular,
            n: 64,
            beta: 2.0,
            a: 1.0,
            b: 1.0,
            thetas: Vec::new(),
            trials: 1000,
            seed: 0,
            out: None,
            format: Format::Csv,
            normalization: Normalization::Theorem,
            parallel: None,
            emit_plot_script: false,
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Skip the long Monte Carlo criteria (7 to 10).
    #[arg(long)]
    pub quick: bool,
    #[arg(long, default_value_t = acceptance::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub parallel: Option<usize>,
}

/// The parameters that determine an output, as recorded in it. Worker count
/// and file names are deliberately absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub ensemble: EnsembleKind,
    pub n: usize,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    pub thetas: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub format: Format,
    pub normalization: Normalization,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    pub seed: u64,
    pub version: String,
    /// Seconds since the Unix epoch; `SOURCE_DATE_EPOCH` when set.
    pub timestamp: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Envelope<T> {
    pub config: RunConfig,
    pub report: T,
    pub provenance: Provenance,
}

/// Failure of a CLI invocation, mapped to the process exit code.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CliError {
    #[error("invalid configuration: {0}")]
    Validation(String),
    #[error("{0}")]
    Runtime(String),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
            CliError::Verification(_) => 3,
        }
    }
}

fn validation(e: Error) -> CliError {
    CliError::Validation(e.to_string())
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

/// Rendered output of one command.
#[derive(Debug, Clone, Default)]
pub struct Rendered {
    pub primary: Vec<u8>,
    /// Summary JSON written next to a CSV file as `<out>.report.json`.
    pub report: Option<Vec<u8>>,
    pub plot_script: Option<String>,
    /// Extra text for standard error.
    pub note: Option<String>,
    /// Set when `verify` found a failing criterion.
    pub failed: Option<String>,
}

fn default_thetas(cmd: &str, kind: EnsembleKind) -> Vec<f64> {
    match (cmd, kind) {
        (_, EnsembleKind::Circular) => vec![0.0, PI / 2.0],
        ("diagnostics", EnsembleKind::Jacobi) => vec![PI / 3.0, 2.0 * PI / 3.0],
        (_, EnsembleKind::Jacobi) => vec![PI / 2.0],
    }
}

/// A validated subcommand with its resolved angles.
struct Job<'a> {
    name: &'static str,
    args: &'a RunArgs,
    spec: EnsembleSpec,
    thetas: Vec<f64>,
}

impl Job<'_> {
    fn config(&self) -> RunConfig {
        RunConfig {
            subcommand: self.name.to_string(),
            ensemble: self.args.ensemble,
            n: self.args.n,
            beta: self.args.beta,
            a: self.args.a,
            b: self.args.b,
            thetas: self.thetas.clone(),
            trials: self.args.trials,
            seed: self.args.seed,
            format: self.args.format,
            normalization: self.args.normalization,
        }
    }
}

fn validate<'a>(name: &'static str, args: &'a RunArgs) -> Result<Job<'a>, CliError> {
    let spec = EnsembleSpec::new(args.ensemble, args.n, args.beta, args.a, args.b).map_err(validation)?;
    if args.trials == 0 {
        return Err(CliError::Validation("--trials must be at least 1".into()));
    }
    if args.parallel == Some(0) {
        return Err(CliError::Validation("--parallel must be at least 1".into()));
    }
    let thetas = if args.thetas.is_empty() {
        default_thetas(name, args.ensemble)
    } else {
        args.thetas.clone()
    };
    match name {
        "sample" | "moments" => {}
        "diagnostics" => {
            if thetas.len() != 2 {
                return Err(CliError::Validation("diagnostics takes exactly two angles".into()));
            }
            windows_for(args.ensemble, &thetas).map_err(validation)?;
        }
        _ => {
            windows_for(args.ensemble, &thetas).map_err(validation)?;
        }
    }
    if matches!(name, "count" | "fluctuations" | "diagnostics") && args.n < 2 {
        return Err(CliError::Validation(format!("{name} needs --n ≥ 2")));
    }
    if args.emit_plot_script && !(name == "fluctuations" && args.format == Format::Csv && args.out.is_some()) {
        return Err(CliError::Validation(
            "--emit-plot-script needs `fluctuations --format csv --out <file>`".into(),
        ));
    }
    Ok(Job {
        name,
        args,
        spec,
        thetas,
    })
}

/// Floats in CSV: 17 significant digits, enough to round-trip exactly.
pub fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn provenance(seed: u64) -> Provenance {
    let timestamp = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or_else(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        });
    Provenance {
        seed,
        version: VERSION.to_string(),
        timestamp,
    }
}

fn to_json<T: Serialize>(job: &Job<'_>, report: T) -> Result<Vec<u8>, CliError> {
    let env = Envelope {
        config: job.config(),
        report,
        provenance: provenance(job.args.seed),
    };
    let mut out = serde_json::to_vec_pretty(&env).map_err(runtime)?;
    out.push(b'\n');
    Ok(out)
}

/// CSV with the provenance comment block, header and rows.
fn to_csv(job: &Job<'_>, header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Result<Vec<u8>, CliError> {
    let mut buf = String::new();
    let config = serde_json::to_string(&job.config()).map_err(runtime)?;
    let _ = writeln!(buf, "# beta-ensemble {VERSION}");
    let _ = writeln!(buf, "# seed={}", job.args.seed);
    let _ = writeln!(buf, "# config={config}");
    let mut w = csv::Writer::from_writer(buf.into_bytes());
    w.write_record(header).map_err(runtime)?;
    for row in rows {
        w.write_record(&row).map_err(runtime)?;
    }
    w.into_inner().map_err(runtime)
}

fn window_fields(w: &Window) -> Vec<String> {
    match *w {
        Window::Arc { theta_lo, theta_hi } => vec![fmt_float(theta_lo), fmt_float(theta_hi)],
        Window::Cap { theta } => vec![fmt_float(theta)],
    }
}

fn window_header(kind: EnsembleKind) -> Vec<&'static str> {
    match kind {
        EnsembleKind::Circular => vec!["trial", "theta_lo", "theta_hi"],
        EnsembleKind::Jacobi => vec!["trial", "theta"],
    }
}

fn render_sample(job: &Job<'_>) -> Result<Rendered, CliError> {
    let workers = job.args.parallel;
    let samples = run_trials(job.args.seed, job.args.trials, workers, |_, rng| {
        sample_points(&job.spec, rng).map(|s| s.points)
    })
    .map_err(runtime)?;
    let primary = match job.args.format {
        Format::Json => to_json(job, &samples)?,
        Format::Csv => to_csv(
            job,
            &["trial", "index", "point"],
            samples.iter().enumerate().flat_map(|(t, pts)| {
                pts.iter()
                    .enumerate()
                    .map(move |(i, &p)| vec![t.to_string(), i.to_string(), fmt_float(p)])
            }),
        )?,
    };
    Ok(Rendered {
        primary,
        ..Rendered::default()
    })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct CountReport {
    windows: Vec<Window>,
    counts: Vec<Vec<usize>>,
}

fn render_count(job: &Job<'_>) -> Result<Rendered, CliError> {
    let a = job.args;
    let sample = run_fluctuation_experiment(&job.spec, &job.thetas, a.trials, a.seed, a.normalization, a.parallel)
        .map_err(runtime)?;
    let windows = sample.windows.clone();
    let counts: Vec<Vec<usize>> = sample.counts.chunks(windows.len()).map(<[usize]>::to_vec).collect();
    let primary = match job.args.format {
        Format::Json => to_json(job, CountReport { windows, counts })?,
        Format::Csv => {
            let mut header = window_header(job.spec.kind);
            header.push("count");
            to_csv(
                job,
                &header,
                counts.iter().enumerate().flat_map(|(t, row)| {
                    row.iter().zip(&windows).map(move |(c, w)| {
                        let mut r = vec![t.to_string()];
                        r.extend(window_fields(w));
                        r.push(c.to_string());
                        r
                    })
                }),
            )?
        }
    };
    Ok(Rendered {
        primary,
        ..Rendered::default()
    })
}

/// JSON report of `fluctuations`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FluctuationReport {
    pub summary: Option<ExperimentReport>,
    pub sample: FluctuationSample,
}

fn fluctuation_csv(job: &Job<'_>, sample: &FluctuationSample) -> Result<Vec<u8>, CliError> {
    let mut header = window_header(job.spec.kind);
    header.extend(["count", "normalized"]);
    let j = sample.columns();
    to_csv(
        job,
        &header,
        (0..sample.trials).flat_map(|t| {
            sample.windows.iter().enumerate().map(move |(c, w)| {
                let mut r = vec![t.to_string()];
                r.extend(window_fields(w));
                r.push(sample.counts[t * j + c].to_string());
                r.push(fmt_float(sample.values[t * j + c]));
                r
            })
        }),
    )
}

fn plot_script(csv_path: &Path, sample: &FluctuationSample) -> String {
    let name = csv_path.display().to_string().replace('\'', "''");
    let var = sample.limit_variance();
    let col_key = match sample.spec.kind {
        EnsembleKind::Circular => "column(2) == lo && column(3) == hi",
        EnsembleKind::Jacobi => "column(2) == th",
    };
    let value_col = match sample.spec.kind {
        EnsembleKind::Circular => 5,
        EnsembleKind::Jacobi => 4,
    };
    let mut s = String::new();
    let _ = writeln!(s, "# histograms of normalized statistics against N(0, {var})");
    let _ = writeln!(s, "set datafile separator ','");
    let _ = writeln!(s, "set datafile commentschars '#'");
    let _ = writeln!(s, "set key autotitle columnhead");
    let _ = writeln!(s, "binwidth = 0.25");
    let _ = writeln!(s, "bin(x) = binwidth * floor(x / binwidth) + binwidth / 2.0");
    let _ = writeln!(s, "trials = {}", sample.trials);
    let _ = writeln!(s, "normal(x) = trials * binwidth * exp(-x*x / (2.0*{var})) / sqrt(2.0*pi*{var})");
    let _ = writeln!(s, "set style fill solid 0.5");
    for w in &sample.windows {
        let (setup, title) = match *w {
            Window::Arc { theta_lo, theta_hi } => (
                format!("lo = {}; hi = {}", fmt_float(theta_lo), fmt_float(theta_hi)),
                format!("arc ({theta_lo:.4}, {theta_hi:.4}]"),
            ),
            Window::Cap { theta } => (format!("th = {}", fmt_float(theta)), format!("theta = {theta:.4}")),
        };
        let _ = writeln!(s, "{setup}");
        let _ = writeln!(s, "set title '{title}'");
        let _ = writeln!(
            s,
            "plot '{name}' using (({col_key}) ? bin(column({value_col})) : NaN):(1.0) smooth frequency with boxes notitle, normal(x) with lines lw 2 title 'normal'"
        );
        let _ = writeln!(s, "pause -1");
    }
    s
}

fn render_fluctuations(job: &Job<'_>) -> Result<Rendered, CliError> {
    let a = job.args;
    let sample = run_fluctuation_experiment(&job.spec, &job.thetas, a.trials, a.seed, a.normalization, a.parallel)
        .map_err(runtime)?;
    let (summary, note) = match summarize(&sample) {
        Ok(r) => (Some(r), None),
        Err(e) => (None, Some(format!("no summary: {e}"))),
    };
    let mut rendered = Rendered {
        note,
        ..Rendered::default()
    };
    match a.format {
        Format::Json => {
            rendered.primary = to_json(job, FluctuationReport { summary, sample })?;
        }
        Format::Csv => {
            rendered.primary = fluctuation_csv(job, &sample)?;
            if let Some(path) = &a.out {
                if a.emit_plot_script {
                    rendered.plot_script = Some(plot_script(path, &sample));
                }
            }
            if let Some(summary) = summary {
                rendered.report = Some(to_json(job, summary)?);
            }
        }
    }
    Ok(rendered)
}

fn term_grid(max: usize) -> Vec<usize> {
    let mut grid: Vec<usize> = std::iter::successors(Some(16usize), |m| m.checked_mul(4))
        .take_while(|&m| m < max)
        .collect();
    grid.push(max);
    grid
}

fn render_diagnostics(job: &Job<'_>) -> Result<Rendered, CliError> {
    let a = job.args;
    let law = job.spec.law();
    let grid = term_grid(a.n);
    let traces = hypothesis_traces(&law, &grid, job.thetas[0], job.thetas[1], a.trials, a.seed, a.parallel)
        .map_err(runtime)?;
    let primary = match a.format {
        Format::Json => to_json(job, &traces)?,
        Format::Csv => to_csv(
            job,
            &["label", "n", "statistic", "target"],
            traces.iter().flat_map(|t: &HypothesisTrace| {
                t.n_values.iter().zip(&t.statistic_values).map(move |(n, v)| {
                    vec![
                        t.label.as_str().to_string(),
                        n.to_string(),
                        fmt_float(*v),
                        fmt_float(t.target),
                    ]
                })
            }),
        )?,
    };
    Ok(Rendered {
        primary,
        ..Rendered::default()
    })
}

/// One row of the `moments` table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentRow {
    pub k: usize,
    pub moment: String,
    pub closed_form: f64,
    pub monte_carlo: f64,
    pub standard_error: f64,
}

/// Closed-form moments of each coefficient of the ensemble's path against
/// `draws` Monte Carlo samples per coefficient (stream `k` of `seed`).
pub fn moment_table(spec: &EnsembleSpec, draws: usize, seed: u64) -> Vec<MomentRow> {
    let law = spec.law();
    let mut rows = Vec::new();
    for k in 0..spec.path_len() {
        let mut rng = stream(seed, k as u64);
        let (names, closed, powers): (&[&str], Vec<f64>, Vec<Vec<f64>>) = match law {
            CoefficientLaw::Circular { beta } => {
                let p = CoefficientLaw::theta_param(beta, k);
                let m = theta_moments(p);
                let xs: Vec<f64> = (0..draws).map(|_| sample_theta(p, &mut rng).value().norm_sqr()).collect();
                (
                    &["m2", "m4"],
                    vec![m.m2, m.m4],
                    vec![xs.clone(), xs.iter().map(|x| x * x).collect()],
                )
            }
            CoefficientLaw::Jacobi { beta, a, b } => {
                let p = CoefficientLaw::jacobi_param(beta, a, b, k);
                let m = sym_beta_moments(p);
                let xs: Vec<f64> = (0..draws).map(|_| sample_sym_beta(p, &mut rng)).collect();
                (
                    &["m1", "m2", "m3", "m4"],
                    vec![m.m1, m.m2, m.m3, m.m4],
                    (1..=4).map(|e| xs.iter().map(|x| x.powi(e)).collect()).collect(),
                )
            }
        };
        for ((name, c), vals) in names.iter().zip(closed).zip(powers) {
            let est = crate::diagnostics::Estimate::from_values(vals);
            rows.push(MomentRow {
                k,
                moment: name.to_string(),
                closed_form: c,
                monte_carlo: est.mean,
                standard_error: est.se,
            });
        }
    }
    rows
}

fn render_moments(job: &Job<'_>) -> Result<Rendered, CliError> {
    if job.args.trials < 2 {
        return Err(CliError::Validation("moments needs --trials ≥ 2".into()));
    }
    let rows = moment_table(&job.spec, job.args.trials, job.args.seed);
    let primary = match job.args.format {
        Format::Json => to_json(job, &rows)?,
        Format::Csv => to_csv(
            job,
            &["k", "moment", "closed_form", "monte_carlo", "standard_error"],
            rows.iter().map(|r| {
                vec![
                    r.k.to_string(),
                    r.moment.clone(),
                    fmt_float(r.closed_form),
                    fmt_float(r.monte_carlo),
                    fmt_float(r.standard_error),
                ]
            }),
        )?,
    };
    Ok(Rendered {
        primary,
        ..Rendered::default()
    })
}

fn render_verify(args: &VerifyArgs) -> Result<Rendered, CliError> {
    if args.parallel == Some(0) {
        return Err(CliError::Validation("--parallel must be at least 1".into()));
    }
    let opts = AcceptanceOptions {
        quick: args.quick,
        seed: args.seed,
        workers: args.parallel,
    };
    let outcomes = acceptance::run_all(&opts);
    let mut text = String::new();
    for o in &outcomes {
        let _ = writeln!(text, "{o}");
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| o.status == acceptance::Status::Fail)
        .map(|o| o.id.to_string())
        .collect();
    Ok(Rendered {
        primary: text.into_bytes(),
        failed: (!failed.is_empty()).then(|| format!("criteria {}", failed.join(", "))),
        ..Rendered::default()
    })
}

/// Validates and runs a command without touching the file system.
pub fn execute(command: &Command) -> Result<Rendered, CliError> {
    let name = command.name();
    match command {
        Command::Verify(v) => render_verify(v),
        Command::Sample(a) => render_sample(&validate(name, a)?),
        Command::Count(a) => render_count(&validate(name, a)?),
        Command::Fluctuations(a) => render_fluctuations(&validate(name, a)?),
        Command::Diagnostics(a) => render_diagnostics(&validate(name, a)?),
        Command::Moments(a) => render_moments(&validate(name, a)?),
    }
}

fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let mut s = path.as_os_str().to_owned();
    s.push(suffix);
    PathBuf::from(s)
}

/// Runs a command and writes its outputs.
pub fn run(cli: &Cli) -> Result<(), CliError> {
    let rendered = execute(&cli.command)?;
    let out = match &cli.command {
        Command::Verify(_) => None,
        Command::Sample(a)
        | Command::Count(a)
        | Command::Fluctuations(a)
        | Command::Diagnostics(a)
        | Command::Moments(a) => a.out.as_deref(),
    };
    match out {
        Some(path) => {
            std::fs::write(path, &rendered.primary).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
            if let Some(report) = &rendered.report {
                let p = sibling(path, ".report.json");
                std::fs::write(&p, report).map_err(|e| runtime(format!("{}: {e}", p.display())))?;
            }
            if let Some(script) = &rendered.plot_script {
                let p = sibling(path, ".gp");
                std::fs::write(&p, script).map_err(|e| runtime(format!("{}: {e}", p.display())))?;
            }
        }
        None => {
            use std::io::Write;
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(&rendered.primary).map_err(runtime)?;
            stdout.flush().map_err(runtime)?;
        }
    }
    if let Some(note) = &rendered.note {
        eprintln!("{note}");
    }
    match rendered.failed {
        Some(which) => Err(CliError::Verification(which)),
        None => Ok(()),
    }
}

/// Parses `args` and runs; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

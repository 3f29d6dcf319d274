//! Thin command-line front end over the library: parse a system spec,
//! dispatch one operation, write CSV artifacts plus a reproducibility
//! manifest.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 spec validation failure,
//! 3 numeric failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use relimp::artifacts::{
    self, Manifest, RunParameters, SpecInfo, ToolInfo,
};
use relimp::conditional::{EvalError, SystemModel};
use relimp::copulas::derive_seed;
use relimp::importance::{self, ImportanceError, ImportanceReport};
use relimp::ordering::{self, CrossingReport, OrderingError};
use relimp::specfile::{self, ParsedSystem, SpecError};

#[derive(Parser)]
#[command(
    name = "relimp",
    version,
    about = "Variance-based component importance for coherent systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// System spec file (TOML).
    spec: PathBuf,
    /// Directory for CSV artifacts and the run manifest.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// Cap worker threads (results do not depend on this).
    #[arg(long)]
    threads: Option<usize>,
    /// Absolute quadrature tolerance (default 1e-9).
    #[arg(long)]
    tolerance: Option<f64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Exact,
    Mc,
}

#[derive(Subcommand)]
enum Command {
    /// Check a spec file and report all violations.
    Validate {
        /// System spec file (TOML).
        spec: PathBuf,
    },
    /// Tabulate the system reliability function and lifetime moments.
    Reliability {
        #[command(flatten)]
        common: CommonArgs,
        /// Number of tabulation points.
        #[arg(long, default_value_t = 512)]
        grid: usize,
    },
    /// Importance index of every component (or one), exact or Monte Carlo.
    Importance {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, value_enum, default_value_t = MethodArg::Exact)]
        method: MethodArg,
        /// Monte Carlo sample size.
        #[arg(long, default_value_t = 5000)]
        n: usize,
        /// Monte Carlo seed.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Average this many independent Monte Carlo estimates.
        #[arg(long, default_value_t = 1)]
        reps: usize,
        /// Restrict the report to one component (1-based id).
        #[arg(long)]
        component: Option<usize>,
        /// Tabulation points for the Monte Carlo regression curves.
        #[arg(long, default_value_t = 512)]
        grid: usize,
    },
    /// Tabulate the regression and error curves of one component.
    Curve {
        #[command(flatten)]
        common: CommonArgs,
        /// Conditioning component (1-based id).
        #[arg(long)]
        component: usize,
        /// Number of tabulation points.
        #[arg(long, default_value_t = 512)]
        grid: usize,
    },
    /// Pairwise component ranking by the quantile-crossing criterion.
    Compare {
        #[command(flatten)]
        common: CommonArgs,
        /// Probability grid size.
        #[arg(long, default_value_t = 200)]
        grid: usize,
    },
    /// Bivariate signature matrix of one component.
    Signature {
        #[command(flatten)]
        common: CommonArgs,
        /// Conditioning component (1-based id).
        #[arg(long)]
        component: usize,
    },
    /// Dispersion of the Monte Carlo estimator around the exact index.
    ErrorStudy {
        #[command(flatten)]
        common: CommonArgs,
        /// Studied component (1-based id).
        #[arg(long)]
        component: usize,
        /// Monte Carlo sample size per repetition.
        #[arg(long, default_value_t = 5000)]
        n: usize,
        /// Number of repetitions.
        #[arg(long, default_value_t = 100)]
        reps: usize,
        /// Master seed; repetition r uses a derived stream.
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

enum CliError {
    Io(String),
    Validation(String),
    Numeric(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Io(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Io(m) | CliError::Validation(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<SpecError> for CliError {
    fn from(e: SpecError) -> Self {
        CliError::Validation(e.to_string())
    }
}

impl From<EvalError> for CliError {
    fn from(e: EvalError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<ImportanceError> for CliError {
    fn from(e: ImportanceError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<OrderingError> for CliError {
    fn from(e: OrderingError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}

fn run(command: Command) -> Result<(), CliError> {
    match command {
        Command::Validate { spec } => validate(&spec),
        Command::Reliability { common, grid } => {
            let ctx = Context::open(&common, "reliability")?;
            ctx.install(|| reliability(&ctx, grid))
        }
        Command::Importance { common, method, n, seed, reps, component, grid } => {
            let ctx = Context::open(&common, "importance")?;
            ctx.install(|| importance(&ctx, method, n, seed, reps, component, grid))
        }
        Command::Curve { common, component, grid } => {
            let ctx = Context::open(&common, "curve")?;
            ctx.install(|| curve(&ctx, component, grid))
        }
        Command::Compare { common, grid } => {
            let ctx = Context::open(&common, "compare")?;
            ctx.install(|| compare(&ctx, grid))
        }
        Command::Signature { common, component } => {
            let ctx = Context::open(&common, "signature")?;
            ctx.install(|| signature(&ctx, component))
        }
        Command::ErrorStudy { common, component, n, reps, seed } => {
            let ctx = Context::open(&common, "error-study")?;
            ctx.install(|| error_study(&ctx, component, n, reps, seed))
        }
    }
}

fn validate(spec: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(spec)?;
    let parsed = specfile::parse_spec(&text)?;
    println!(
        "ok: {} ({} components, {} minimal path sets, {} copula)",
        parsed.name,
        parsed.model.component_count(),
        parsed.model.structure().path_sets().len(),
        parsed.model.copula().family_name(),
    );
    Ok(())
}

/// Shared per-run state: the parsed model, output directory and the
/// manifest under construction.
struct Context {
    command: &'static str,
    name: String,
    model: SystemModel,
    out_dir: PathBuf,
    threads: Option<usize>,
    spec_info: SpecInfo,
    argv: Vec<String>,
}

impl Context {
    fn open(common: &CommonArgs, command: &'static str) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(&common.spec)?;
        let ParsedSystem { name, mut model } = specfile::parse_spec(&text)?;
        if let Some(tol) = common.tolerance {
            if !(tol > 0.0) || !tol.is_finite() {
                return Err(CliError::Validation(format!(
                    "tolerance {tol} must be a positive number"
                )));
            }
            let mut policy = *model.policy();
            policy.abs_tol = tol;
            model.set_policy(policy);
        }
        let spec_info = SpecInfo {
            path: common.spec.display().to_string(),
            sha256: artifacts::sha256_hex(&text),
            content: text,
        };
        Ok(Context {
            command,
            name,
            model,
            out_dir: common.out.clone(),
            threads: common.threads,
            spec_info,
            argv: std::env::args().skip(1).collect(),
        })
    }

    fn install<T>(&self, f: impl FnOnce() -> T + Send) -> T
    where
        T: Send,
    {
        match self.threads {
            None => f(),
            Some(t) => rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build()
                .expect("thread pool builds")
                .install(f),
        }
    }

    /// 1-based id from the CLI to a 0-based model index.
    fn component_index(&self, id: usize) -> Result<usize, CliError> {
        let n = self.model.component_count();
        if id < 1 || id > n {
            return Err(CliError::Validation(format!(
                "component {id} outside 1..={n}"
            )));
        }
        Ok(id - 1)
    }

    fn finish(
        &self,
        parameters: RunParameters,
        files: Vec<(&'static str, String)>,
    ) -> Result<(), CliError> {
        std::fs::create_dir_all(&self.out_dir)?;
        let mut outputs = Vec::new();
        for (file_name, content) in &files {
            std::fs::write(self.out_dir.join(file_name), content)?;
            outputs.push((*file_name).to_string());
        }
        let manifest = Manifest {
            tool: ToolInfo { name: "relimp", version: env!("CARGO_PKG_VERSION") },
            command: self.command.to_string(),
            argv: self.argv.clone(),
            spec: self.spec_info.clone(),
            parameters,
            policy: *self.model.policy(),
            outputs,
        };
        std::fs::write(
            self.out_dir.join("manifest.json"),
            artifacts::manifest_json(&manifest),
        )?;
        Ok(())
    }
}

fn reliability(ctx: &Context, grid: usize) -> Result<(), CliError> {
    let model = &ctx.model;
    let hi = model
        .marginals()
        .iter()
        .map(|m| m.upper_time(model.policy().grid_tail))
        .fold(0.0, f64::max);
    let steps = grid.max(2) - 1;
    let times: Vec<f64> = (0..=steps).map(|i| hi * i as f64 / steps as f64).collect();
    let survival: Vec<f64> = times
        .iter()
        .map(|&t| model.reliability(t).clamp(0.0, 1.0))
        .collect();
    let (mean, variance) = importance::system_moments(model)?;
    println!("{}: E(T) = {:.6}, Var(T) = {:.6}", ctx.name, mean, variance);
    ctx.finish(
        RunParameters { grid: Some(grid), threads: ctx.threads, ..Default::default() },
        vec![("reliability.csv", artifacts::reliability_csv(&times, &survival))],
    )
}

fn importance(
    ctx: &Context,
    method: MethodArg,
    n: usize,
    seed: u64,
    reps: usize,
    component: Option<usize>,
    grid: usize,
) -> Result<(), CliError> {
    let model = &ctx.model;
    let index = component.map(|id| ctx.component_index(id)).transpose()?;
    let mut report = match method {
        MethodArg::Exact => importance::importance_exact(model)?,
        MethodArg::Mc => {
            let mut policy = *model.policy();
            policy.grid_points = grid;
            let mut tuned = model.clone();
            tuned.set_policy(policy);
            mc_with_reps(&tuned, n, seed, reps.max(1))?
        }
    };
    if let Some(k) = index {
        report.rows.retain(|row| row.component == k);
    }
    print!("{}", artifacts::ranked_table(&report));
    ctx.finish(
        RunParameters {
            method: Some(match method {
                MethodArg::Exact => "exact".into(),
                MethodArg::Mc => "mc".into(),
            }),
            n: matches!(method, MethodArg::Mc).then_some(n),
            seed: matches!(method, MethodArg::Mc).then_some(seed),
            repetitions: matches!(method, MethodArg::Mc).then_some(reps),
            component,
            grid: Some(grid),
            threads: ctx.threads,
        },
        vec![("importance.csv", artifacts::importance_csv(&report))],
    )
}

/// Average `reps` independent Monte Carlo reports (derived seed per rep).
fn mc_with_reps(
    model: &SystemModel,
    n: usize,
    seed: u64,
    reps: usize,
) -> Result<ImportanceReport, ImportanceError> {
    if reps == 1 {
        return importance::importance_mc(model, n, seed);
    }
    let mut acc: Option<ImportanceReport> = None;
    for r in 0..reps {
        let rep = importance::importance_mc(model, n, derive_seed(seed, r as u64))?;
        acc = Some(match acc {
            None => rep,
            Some(mut sum) => {
                sum.mean_lifetime += rep.mean_lifetime;
                sum.variance += rep.variance;
                for (a, b) in sum.rows.iter_mut().zip(&rep.rows) {
                    a.r_squared += b.r_squared;
                    a.explained += b.explained;
                    a.residual += b.residual;
                }
                sum
            }
        });
    }
    let mut report = acc.expect("at least one repetition");
    let scale = 1.0 / reps as f64;
    report.mean_lifetime *= scale;
    report.variance *= scale;
    for row in &mut report.rows {
        row.r_squared *= scale;
        row.explained *= scale;
        row.residual *= scale;
    }
    report.seed = Some(seed);
    report.repetitions = Some(reps);
    Ok(report)
}

fn curve(ctx: &Context, component: usize, grid: usize) -> Result<(), CliError> {
    let k = ctx.component_index(component)?;
    let (regression, error) = ctx.model.curves_with(k, grid)?;
    println!(
        "{}: m_{} tabulated on [{:.6}, {:.6}], range [{:.6}, {:.6}]",
        ctx.name,
        component,
        regression.grid().first().unwrap(),
        regression.grid().last().unwrap(),
        regression.values().iter().cloned().fold(f64::INFINITY, f64::min),
        regression.values().iter().cloned().fold(f64::NEG_INFINITY, f64::max),
    );
    ctx.finish(
        RunParameters {
            component: Some(component),
            grid: Some(grid),
            threads: ctx.threads,
            ..Default::default()
        },
        vec![("curve.csv", artifacts::curve_csv(&regression, &error))],
    )
}

fn compare(ctx: &Context, grid: usize) -> Result<(), CliError> {
    let n = ctx.model.component_count();
    let mut reports: Vec<CrossingReport> = Vec::new();
    for i in 0..n {
        for j in (i + 1)..n {
            reports.push(ordering::quantile_crossing(&ctx.model, i, j, grid)?);
        }
    }
    let csv = artifacts::crossing_csv(&reports);
    print!("{csv}");
    ctx.finish(
        RunParameters { grid: Some(grid), threads: ctx.threads, ..Default::default() },
        vec![("compare.csv", csv)],
    )
}

fn signature(ctx: &Context, component: usize) -> Result<(), CliError> {
    let k = ctx.component_index(component)?;
    let sig = ctx
        .model
        .structure()
        .bivariate_signature(k)
        .map_err(|e| CliError::Numeric(e.to_string()))?;
    let n = sig.order();
    println!("bivariate signature of component {component} (rows: system order statistic):");
    for i in 0..n {
        let row: Vec<String> = (0..n).map(|j| format!("{:.6}", sig.mass(i, j))).collect();
        println!("  {}", row.join("  "));
    }
    ctx.finish(
        RunParameters { component: Some(component), threads: ctx.threads, ..Default::default() },
        vec![("signature.csv", artifacts::signature_csv(&sig))],
    )
}

fn error_study(
    ctx: &Context,
    component: usize,
    n: usize,
    reps: usize,
    seed: u64,
) -> Result<(), CliError> {
    let k = ctx.component_index(component)?;
    let study = importance::error_study(&ctx.model, k, n, reps, seed)?;
    println!(
        "component {component}: exact R^2 = {:.6}; error over {} runs of n = {}: mean {:.6}, sd {:.6}, quartiles [{:.6}, {:.6}, {:.6}]",
        study.exact,
        study.repetitions,
        study.n,
        study.mean,
        study.sd,
        study.quartiles[0],
        study.quartiles[1],
        study.quartiles[2],
    );
    ctx.finish(
        RunParameters {
            n: Some(n),
            seed: Some(seed),
            repetitions: Some(reps),
            component: Some(component),
            threads: ctx.threads,
            ..Default::default()
        },
        vec![
            ("error_study.csv", artifacts::error_study_csv(&study)),
            ("error_study_samples.csv", artifacts::error_samples_csv(&study)),
        ],
    )
}

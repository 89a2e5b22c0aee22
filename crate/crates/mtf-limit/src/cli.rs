//! Command-line surface.
//!
//! Exit codes: 0 success, 1 failed validation or i/o trouble, 2 invalid
//! arguments, 3 numerical non-convergence, 4 dominance violation found in
//! sweep mode.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::cache_analysis;
use crate::error::{Error, Result};
use crate::limit_law::LimitLaw;
use crate::mtf_sim::{self, RequestProbabilities, SampleMethod};
use crate::rng::{derive_seed, stream_rng, DEFAULT_SEED};
use crate::stochastic_order::{dominance_report, DominanceReport};
use crate::weights::{FamilyDescriptor, WeightFamily};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;
pub const EXIT_VIOLATION: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "mtf-limit",
    version,
    about = "Limiting search-cost law of the move-to-front rule under random \
             request probabilities, with LRU miss-ratio analysis",
    after_help = "Identical flags and seed produce byte-identical output."
)]
struct Cli {
    /// Worker threads for sampling commands [default: all available cores]
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Tabulate the limiting density and CDF on a uniform grid over [0, 1]
    Density(GridEvalArgs),
    /// Tabulate the limiting CDF and density on a uniform grid over [0, 1]
    Cdf(GridEvalArgs),
    /// Moments E[S^q] of the limiting search cost
    Moments(MomentsArgs),
    /// Laplace transform E[exp(-s S)] of the limiting search cost
    Laplace(LaplaceArgs),
    /// Draw stationary search costs for a catalog sampled from the family
    Simulate(SimulateArgs),
    /// Kolmogorov-Smirnov distance to the limit law across catalog sizes
    Converge(ConvergeArgs),
    /// Asymptotic LRU miss probability over a grid of cache fractions
    MissCurve(MissCurveArgs),
    /// Smallest cache fraction meeting a miss-probability budget
    SizeCache(SizeCacheArgs),
    /// Dominance report against the uniform law; sweep mode hunts for
    /// counterexamples over random gamma mixtures (exit 4 on a violation)
    Conjecture(ConjectureArgs),
    /// Check a family's transform invariants (exit 1 on a failed report)
    Validate(ValidateArgs),
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum FamilyChoice {
    Dirac,
    Gamma,
    Geometric,
    Poisson,
    Custom,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum MethodChoice {
    /// Backward request replay until coverage; exact, coupon-collector cost
    Chain,
    /// Exponential-clock indicator sum; exact, linear cost per sample
    Bernoulli,
}

impl From<MethodChoice> for SampleMethod {
    fn from(m: MethodChoice) -> Self {
        match m {
            MethodChoice::Chain => SampleMethod::Chain,
            MethodChoice::Bernoulli => SampleMethod::Bernoulli,
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args, Debug, Clone)]
struct FamilyArgs {
    /// Weight family
    #[arg(long, value_enum)]
    family: Option<FamilyChoice>,

    /// Gamma shape parameter, alpha > 0 (with --family gamma)
    #[arg(long, value_name = "SHAPE", allow_hyphen_values = true)]
    alpha: Option<f64>,

    /// Geometric success probability, p in (0, 1) (with --family geometric)
    #[arg(long, value_name = "PROB", allow_hyphen_values = true)]
    p: Option<f64>,

    /// Poisson rate, lambda > 0 (with --family poisson)
    #[arg(long, value_name = "RATE", allow_hyphen_values = true)]
    lambda: Option<f64>,

    /// Path to a JSON family descriptor (with --family custom)
    #[arg(long, value_name = "PATH")]
    custom_spec: Option<PathBuf>,
}

impl FamilyArgs {
    fn build_required(&self) -> Result<WeightFamily> {
        match self.family {
            Some(choice) => self.build_choice(choice),
            None => Err(Error::InvalidParameter("--family is required".into())),
        }
    }

    fn build_choice(&self, choice: FamilyChoice) -> Result<WeightFamily> {
        self.reject_foreign_params(choice)?;
        match choice {
            FamilyChoice::Dirac => Ok(WeightFamily::dirac()),
            FamilyChoice::Gamma => {
                let alpha = self.alpha.ok_or_else(|| {
                    Error::InvalidParameter("--family gamma requires --alpha".into())
                })?;
                WeightFamily::gamma(alpha)
            }
            FamilyChoice::Geometric => {
                let p = self.p.ok_or_else(|| {
                    Error::InvalidParameter("--family geometric requires --p".into())
                })?;
                WeightFamily::geometric(p)
            }
            FamilyChoice::Poisson => {
                let lambda = self.lambda.ok_or_else(|| {
                    Error::InvalidParameter("--family poisson requires --lambda".into())
                })?;
                WeightFamily::poisson(lambda)
            }
            FamilyChoice::Custom => {
                let path = self.custom_spec.as_ref().ok_or_else(|| {
                    Error::InvalidParameter("--family custom requires --custom-spec".into())
                })?;
                let text = std::fs::read_to_string(path).map_err(|e| {
                    Error::InvalidParameter(format!(
                        "cannot read custom spec {}: {e}",
                        path.display()
                    ))
                })?;
                WeightFamily::from_json(&text)
            }
        }
    }

    fn reject_foreign_params(&self, choice: FamilyChoice) -> Result<()> {
        let mut foreign = Vec::new();
        if self.alpha.is_some() && choice != FamilyChoice::Gamma {
            foreign.push("--alpha");
        }
        if self.p.is_some() && choice != FamilyChoice::Geometric {
            foreign.push("--p");
        }
        if self.lambda.is_some() && choice != FamilyChoice::Poisson {
            foreign.push("--lambda");
        }
        if self.custom_spec.is_some() && choice != FamilyChoice::Custom {
            foreign.push("--custom-spec");
        }
        if foreign.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "{} not valid for --family {choice:?}",
                foreign.join(", ")
            )))
        }
    }
}

#[derive(Args, Debug, Clone)]
struct OutputArgs {
    /// Output file [default: stdout]
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Output format
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    format: OutputFormat,
}

#[derive(Args, Debug, Clone)]
struct SeedArg {
    /// RNG seed; the environment variable applies only when the flag is absent
    #[arg(long, env = "MTF_LIMIT_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
struct GridEvalArgs {
    #[command(flatten)]
    family: FamilyArgs,

    /// Number of evaluation points on [0, 1], endpoints included
    #[arg(long, default_value_t = 1001)]
    grid: usize,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct MomentsArgs {
    #[command(flatten)]
    family: FamilyArgs,

    /// Moment orders q > -1, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "1,2"
    )]
    q: Vec<f64>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct LaplaceArgs {
    #[command(flatten)]
    family: FamilyArgs,

    /// Transform arguments s >= 0, comma separated
    #[arg(
        long,
        value_delimiter = ',',
        allow_hyphen_values = true,
        default_value = "0.5,1,5"
    )]
    s: Vec<f64>,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    #[command(flatten)]
    family: FamilyArgs,

    /// Catalog size (number of files)
    #[arg(long, default_value_t = 100)]
    n: usize,

    /// Number of independent stationary samples
    #[arg(long, default_value_t = 10_000)]
    samples: usize,

    /// Sampling method
    #[arg(long, value_enum, default_value_t = MethodChoice::Bernoulli)]
    method: MethodChoice,

    #[command(flatten)]
    seed: SeedArg,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ConvergeArgs {
    #[command(flatten)]
    family: FamilyArgs,

    /// Catalog sizes, comma separated
    #[arg(long, value_delimiter = ',', default_value = "10,100,1000")]
    n: Vec<usize>,

    /// Stationary samples per catalog size
    #[arg(long, default_value_t = 100_000)]
    samples: usize,

    /// Sampling method
    #[arg(long, value_enum, default_value_t = MethodChoice::Bernoulli)]
    method: MethodChoice,

    #[command(flatten)]
    seed: SeedArg,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct MissCurveArgs {
    #[command(flatten)]
    family: FamilyArgs,

    /// Number of cache fractions on [0, 1], endpoints included
    #[arg(long, default_value_t = 1001)]
    grid: usize,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct SizeCacheArgs {
    #[command(flatten)]
    family: FamilyArgs,

    /// Miss-probability budget in (0, 1]
    #[arg(long, value_name = "PI", allow_hyphen_values = true)]
    pi_target: f64,

    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct ConjectureArgs {
    #[command(flatten)]
    family: FamilyArgs,

    /// Evaluation points on [0, 1]
    #[arg(long, default_value_t = 10_001)]
    grid: usize,

    /// Largest tolerated value of x - F(x)
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,

    /// Instead of one family, scan COUNT random gamma mixtures
    #[arg(long, value_name = "COUNT")]
    sweep: Option<usize>,

    /// Mixture components per random family in sweep mode
    #[arg(long, default_value_t = 4)]
    max_components: usize,

    #[command(flatten)]
    seed: SeedArg,

    /// Output file [default: stdout]; reports are always JSON
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct ValidateArgs {
    #[command(flatten)]
    family: FamilyArgs,

    /// Check tolerance
    #[arg(long, default_value_t = 1e-4)]
    tol: f64,

    /// Output file [default: stdout]; reports are always JSON
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

/// Parse arguments and run; returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let _ = err.print();
            return code;
        }
    };
    if let Some(threads) = cli.threads {
        // Ignored if a global pool already exists (e.g. in tests).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global();
    }
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    }
}

fn exit_code_for(err: &Error) -> i32 {
    match err {
        Error::NonConvergence(_) => EXIT_NUMERIC,
        Error::Io(_) => EXIT_FAILURE,
        _ => EXIT_USAGE,
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Density(args) | Command::Cdf(args) => run_grid_eval(args),
        Command::Moments(args) => run_moments(args),
        Command::Laplace(args) => run_laplace(args),
        Command::Simulate(args) => run_simulate(args),
        Command::Converge(args) => run_converge(args),
        Command::MissCurve(args) => run_miss_curve(args),
        Command::SizeCache(args) => run_size_cache(args),
        Command::Conjecture(args) => run_conjecture(args),
        Command::Validate(args) => run_validate(args),
    }
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => std::io::stdout().write_all(content.as_bytes())?,
    }
    Ok(())
}

#[derive(Serialize)]
struct GridRow {
    x: f64,
    f: f64,
    #[serde(rename = "F")]
    cdf: f64,
}

fn run_grid_eval(args: GridEvalArgs) -> Result<i32> {
    if args.grid < 2 {
        return Err(Error::InvalidParameter(format!(
            "--grid needs at least 2 points, got {}",
            args.grid
        )));
    }
    let law = LimitLaw::new(args.family.build_required()?);
    let rows: Vec<GridRow> = (0..args.grid)
        .map(|i| {
            let x = i as f64 / (args.grid - 1) as f64;
            GridRow {
                x,
                f: law.density(x),
                cdf: law.cdf(x),
            }
        })
        .collect();
    let content = match args.output.format {
        OutputFormat::Csv => {
            let mut text = String::from("x,f,F\n");
            for row in &rows {
                text.push_str(&format!("{},{},{}\n", row.x, row.f, row.cdf));
            }
            text
        }
        OutputFormat::Json => format!("{}\n", serde_json::to_string(&rows)?),
    };
    write_output(&args.output.out, &content)?;
    Ok(EXIT_OK)
}

fn run_moments(args: MomentsArgs) -> Result<i32> {
    let law = LimitLaw::new(args.family.build_required()?);
    let mut rows = Vec::new();
    for &q in &args.q {
        rows.push((q, law.moment(q)?));
    }
    let content = match args.output.format {
        OutputFormat::Csv => {
            let mut text = String::from("q,value\n");
            for &(q, value) in &rows {
                text.push_str(&format!("{q},{value}\n"));
            }
            text
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                q: f64,
                value: f64,
            }
            let rows: Vec<Row> = rows.iter().map(|&(q, value)| Row { q, value }).collect();
            format!("{}\n", serde_json::to_string(&rows)?)
        }
    };
    write_output(&args.output.out, &content)?;
    Ok(EXIT_OK)
}

fn run_laplace(args: LaplaceArgs) -> Result<i32> {
    let law = LimitLaw::new(args.family.build_required()?);
    let mut rows = Vec::new();
    for &s in &args.s {
        rows.push((s, law.laplace(s)?));
    }
    let content = match args.output.format {
        OutputFormat::Csv => {
            let mut text = String::from("s,value\n");
            for &(s, value) in &rows {
                text.push_str(&format!("{s},{value}\n"));
            }
            text
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                s: f64,
                value: f64,
            }
            let rows: Vec<Row> = rows.iter().map(|&(s, value)| Row { s, value }).collect();
            format!("{}\n", serde_json::to_string(&rows)?)
        }
    };
    write_output(&args.output.out, &content)?;
    Ok(EXIT_OK)
}

fn sampled_catalog(family: &WeightFamily, n: usize, seed: u64) -> Result<RequestProbabilities> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "catalog size --n must be at least 1".into(),
        ));
    }
    let weights = family.sample_weights(n, derive_seed(seed, 0));
    RequestProbabilities::from_weights(&weights)
}

fn run_simulate(args: SimulateArgs) -> Result<i32> {
    let family = args.family.build_required()?;
    let p = sampled_catalog(&family, args.n, args.seed.seed)?;
    let samples = mtf_sim::sample_search_costs(
        &p,
        args.samples,
        derive_seed(args.seed.seed, 1),
        args.method.into(),
    )?;
    let content = match args.output.format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            samples.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("ascii csv")
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                n: usize,
                seed: u64,
                method: SampleMethod,
                costs: &'a [u32],
            }
            format!(
                "{}\n",
                serde_json::to_string(&Out {
                    n: samples.n,
                    seed: args.seed.seed,
                    method: samples.method,
                    costs: &samples.costs,
                })?
            )
        }
    };
    write_output(&args.output.out, &content)?;
    Ok(EXIT_OK)
}

fn run_converge(args: ConvergeArgs) -> Result<i32> {
    let family = args.family.build_required()?;
    let law = LimitLaw::new(family.clone());
    let mut rows = Vec::new();
    for &n in &args.n {
        if n == 0 {
            return Err(Error::InvalidParameter(
                "catalog sizes must be at least 1".into(),
            ));
        }
        let weights = family.sample_weights(n, derive_seed(args.seed.seed, 2 * n as u64));
        let p = RequestProbabilities::from_weights(&weights)?;
        let samples = mtf_sim::sample_search_costs(
            &p,
            args.samples,
            derive_seed(args.seed.seed, 2 * n as u64 + 1),
            args.method.into(),
        )?;
        rows.push((n, mtf_sim::ks_statistic(&samples, &law)?));
    }
    let content = match args.output.format {
        OutputFormat::Csv => {
            let mut text = String::from("n,ks\n");
            for &(n, ks) in &rows {
                text.push_str(&format!("{n},{ks}\n"));
            }
            text
        }
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Row {
                n: usize,
                ks: f64,
            }
            let rows: Vec<Row> = rows.iter().map(|&(n, ks)| Row { n, ks }).collect();
            format!("{}\n", serde_json::to_string(&rows)?)
        }
    };
    write_output(&args.output.out, &content)?;
    Ok(EXIT_OK)
}

fn run_miss_curve(args: MissCurveArgs) -> Result<i32> {
    let law = LimitLaw::new(args.family.build_required()?);
    let curve = cache_analysis::miss_curve(&law, args.grid)?;
    let content = match args.output.format {
        OutputFormat::Csv => {
            let mut buf = Vec::new();
            curve.write_csv(&mut buf)?;
            String::from_utf8(buf).expect("ascii csv")
        }
        OutputFormat::Json => format!("{}\n", curve.to_json()),
    };
    write_output(&args.output.out, &content)?;
    Ok(EXIT_OK)
}

fn run_size_cache(args: SizeCacheArgs) -> Result<i32> {
    let law = LimitLaw::new(args.family.build_required()?);
    let alpha = cache_analysis::cache_size_for_target(&law, args.pi_target)?;
    let content = match args.output.format {
        OutputFormat::Csv => format!("pi_target,alpha\n{},{alpha}\n", args.pi_target),
        OutputFormat::Json => {
            #[derive(Serialize)]
            struct Out {
                pi_target: f64,
                alpha: f64,
            }
            format!(
                "{}\n",
                serde_json::to_string(&Out {
                    pi_target: args.pi_target,
                    alpha,
                })?
            )
        }
    };
    write_output(&args.output.out, &content)?;
    Ok(EXIT_OK)
}

fn run_conjecture(args: ConjectureArgs) -> Result<i32> {
    match args.sweep {
        None => {
            let family = args.family.build_required()?;
            let law = LimitLaw::new(family);
            let report = dominance_report(&law, args.grid, args.tol)?;
            let code = if report.pass { EXIT_OK } else { EXIT_VIOLATION };
            write_output(
                &args.out,
                &format!("{}\n", serde_json::to_string_pretty(&report)?),
            )?;
            Ok(code)
        }
        Some(count) => {
            if args.family.family.is_some() {
                return Err(Error::InvalidParameter(
                    "--sweep scans random mixtures; --family does not apply".into(),
                ));
            }
            let mut rng = stream_rng(args.seed.seed, 0);
            let mut reports: Vec<DominanceReport> = Vec::with_capacity(count);
            for _ in 0..count {
                let descriptor =
                    FamilyDescriptor::random_gamma_mixture(&mut rng, args.max_components);
                let law = LimitLaw::new(descriptor.build()?);
                reports.push(dominance_report(&law, args.grid, args.tol)?);
            }
            let any_violation = reports.iter().any(|r| !r.pass);
            write_output(
                &args.out,
                &format!("{}\n", serde_json::to_string_pretty(&reports)?),
            )?;
            Ok(if any_violation {
                EXIT_VIOLATION
            } else {
                EXIT_OK
            })
        }
    }
}

fn run_validate(args: ValidateArgs) -> Result<i32> {
    let family = args.family.build_required()?;
    let report = family.validate(args.tol)?;
    write_output(
        &args.out,
        &format!("{}\n", serde_json::to_string_pretty(&report)?),
    )?;
    Ok(if report.passed { EXIT_OK } else { EXIT_FAILURE })
}

//! Command-line front end.
//!
//! Subcommands: `eval` runs the string-diagram DSL, `conjugate`,
//! `gauss-compose` and `condition` are direct entry points into the library,
//! `check` drives the named property suites, and `fig1` emits the
//! normal-sum curve data (density convolution next to logdensity
//! sup-convolution, with a Laplacian control where the two stop agreeing).
//!
//! Exit codes are a stable contract: 0 success, 1 usage or parse error,
//! 2 improper-composite diagnostic from evaluation. `check` uses 3 for
//! "suites ran, some property failed" so it cannot be confused with either.

use std::fs;
use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::checks::{self, SUITES};
use crate::dsl::{self, DslError, EvalContext, GaussInterp};
use crate::error::Error;
use crate::extreal::ExtReal;
use crate::gauss::condition_logpdf;
use crate::numeric::Vector;
use crate::oracle::{GridSpec, SampledFunction};
use crate::serial;
use crate::bifunction::Polarity;
use crate::DEFAULT_TOL;

/// Everything a subcommand needs besides its own inputs: the rank/feasibility
/// tolerance, the evaluation grid for sampled curves, and where output goes
/// (`None` means stdout).
#[derive(Debug, Clone)]
pub struct CliConfig {
    pub tolerance: f64,
    pub grid: GridSpec,
    pub out: Option<PathBuf>,
}

impl Default for CliConfig {
    fn default() -> Self {
        CliConfig {
            tolerance: DEFAULT_TOL,
            grid: GridSpec::line(-10.0, 10.0, 2001).expect("default grid is valid"),
            out: None,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "fenchel",
    version,
    about = "Exact calculus for quadratic convex functions, bifunctions, and Gauss maps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a diagram term and print the resulting bifunction as JSON.
    ///
    /// Terms are built from generators id[n], copy[n], comp[n], discard[n],
    /// unit[n], add[n], coadd[n], zero[n], cozero[n] and file atoms
    /// lin(@A.json), relspan(@R.json), gauss(@f.json), state(@s.json),
    /// combined with ';' (pipeline), '*' (side by side), adj(..), dagger(..)
    /// and inv(..). '@' paths resolve against the working directory.
    Eval(EvalArgs),
    /// Legendre-Fenchel conjugate of a serialized quadratic function.
    Conjugate(ConjugateArgs),
    /// Compose two Gauss maps given in pipeline order.
    GaussCompose(GaussComposeArgs),
    /// Condition a joint Gaussian state on its trailing coordinates.
    Condition(ConditionArgs),
    /// Run named property suites (all of them by default).
    Check(CheckArgs),
    /// Emit normal-sum curves: density convolution vs logdensity
    /// sup-convolution, with closed-form references and a residual summary.
    Fig1(Fig1Args),
}

#[derive(Args)]
struct EvalArgs {
    /// Diagram term, e.g. "(state(@f.json) * state(@g.json)) ; add[1]"
    term: String,
    /// Reading of gauss(@file) atoms
    #[arg(long, value_enum, default_value_t = InterpArg::Cgf)]
    interp: InterpArg,
    /// Build generators and atoms in the concave polarity
    #[arg(long)]
    concave: bool,
    /// Write the result here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConjugateArgs {
    /// Serialized quadratic function (JSON)
    input: PathBuf,
    /// Rank tolerance for the curvature pseudoinverse
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Write the result here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GaussComposeArgs {
    /// Gauss map applied first (JSON)
    first: PathBuf,
    /// Gauss map applied second (JSON)
    second: PathBuf,
    /// Write the result here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ConditionArgs {
    /// Joint Gaussian state (a Gauss map with no inputs, JSON)
    joint: PathBuf,
    /// Observed values for the trailing coordinates, comma separated
    #[arg(long, value_name = "V1,V2,...", allow_hyphen_values = true)]
    value: String,
    /// Write the conditioned log density here instead of stdout
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CheckArgs {
    /// Suites to run; omit for all of them
    #[arg(value_name = "SUITE")]
    suites: Vec<String>,
}

#[derive(Args)]
struct Fig1Args {
    /// Mean of the first variable
    #[arg(default_value_t = 0.0, allow_hyphen_values = true)]
    mu1: f64,
    /// Variance of the first variable
    #[arg(default_value_t = 1.0)]
    var1: f64,
    /// Mean of the second variable
    #[arg(default_value_t = 0.0, allow_hyphen_values = true)]
    mu2: f64,
    /// Variance of the second variable
    #[arg(default_value_t = 1.0)]
    var2: f64,
    /// Evaluation grid as lo:hi:count
    #[arg(long, value_name = "LO:HI:N", default_value = "-10:10:2001", allow_hyphen_values = true)]
    grid: String,
    /// Directory for the four CSV files (default: current directory)
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum InterpArg {
    Cgf,
    Logpdf,
}

/// A command failure carrying its exit code; the message goes to stderr.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

fn improper(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

/// Entry point for the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(command: Command) -> Result<(), Failure> {
    match command {
        Command::Eval(args) => cmd_eval(args),
        Command::Conjugate(args) => cmd_conjugate(args),
        Command::GaussCompose(args) => cmd_gauss_compose(args),
        Command::Condition(args) => cmd_condition(args),
        Command::Check(args) => cmd_check(args),
        Command::Fig1(args) => cmd_fig1(args),
    }
}

fn emit(out: &Option<PathBuf>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))
}

fn cmd_eval(args: EvalArgs) -> Result<(), Failure> {
    let ctx = EvalContext {
        polarity: if args.concave { Polarity::Concave } else { Polarity::Convex },
        interp: match args.interp {
            InterpArg::Cgf => GaussInterp::Cgf,
            InterpArg::Logpdf => GaussInterp::Logpdf,
        },
        base_dir: PathBuf::from("."),
    };
    let term = dsl::parse(&args.term).map_err(|e| usage(e.to_string()))?;
    let result = dsl::eval(&term, &args.term, &ctx).map_err(|e| match e {
        // a composite that evaluates but is improper (unbounded, infeasible)
        // is a diagnostic about the diagram, not about the command line
        DslError::Eval { .. } => improper(e.to_string()),
        other => usage(other.to_string()),
    })?;
    emit(&args.out, &serial::bifunction_to_json(&result))
}

fn cmd_conjugate(args: ConjugateArgs) -> Result<(), Failure> {
    let config = CliConfig { tolerance: args.tol, out: args.out, ..CliConfig::default() };
    if !(config.tolerance > 0.0) {
        return Err(usage(format!("--tol must be positive, got {}", config.tolerance)));
    }
    let f = serial::pcqf_from_json(&read_input(&args.input)?)
        .map_err(|e| usage(format!("{}: {e}", args.input.display())))?;
    let star = f.conjugate_with_tol(config.tolerance).map_err(|e| improper(e.to_string()))?;
    emit(&config.out, &serial::pcqf_to_json(&star))
}

fn cmd_gauss_compose(args: GaussComposeArgs) -> Result<(), Failure> {
    let first = serial::gauss_from_json(&read_input(&args.first)?)
        .map_err(|e| usage(format!("{}: {e}", args.first.display())))?;
    let second = serial::gauss_from_json(&read_input(&args.second)?)
        .map_err(|e| usage(format!("{}: {e}", args.second.display())))?;
    let composite = second.compose(&first).map_err(|e| improper(e.to_string()))?;
    emit(&args.out, &serial::gauss_to_json(&composite))
}

fn cmd_condition(args: ConditionArgs) -> Result<(), Failure> {
    let joint = serial::gauss_from_json(&read_input(&args.joint)?)
        .map_err(|e| usage(format!("{}: {e}", args.joint.display())))?;
    let value = parse_vector(&args.value).map_err(usage)?;
    // logpdf is contravariant, so a state's log density comes out as an
    // effect; the dagger swaps it back into state orientation
    let conditioned = condition_logpdf(&joint.logpdf().dagger(), &value)
        .map_err(|e| improper(e.to_string()))?;
    emit(&args.out, &serial::bifunction_to_json(&conditioned))
}

fn cmd_check(args: CheckArgs) -> Result<(), Failure> {
    let names: Vec<String> = if args.suites.is_empty() {
        SUITES.iter().map(|s| s.to_string()).collect()
    } else {
        args.suites
    };
    let mut all_ok = true;
    for name in &names {
        let report = checks::run_suite(name).map_err(|e| usage(e.to_string()))?;
        println!("{report}");
        all_ok &= report.ok();
    }
    if all_ok {
        Ok(())
    } else {
        Err(Failure { code: 3, message: "one or more suites failed".into() })
    }
}

// ---------------------------------------------------------------------------
// fig1: sum of independent variables, density side against logdensity side

/// Inputs for the normal-sum figure: two independent scalar Gaussians and
/// the grid both sides are evaluated on.
#[derive(Debug, Clone)]
pub struct Fig1Params {
    pub mu1: f64,
    pub var1: f64,
    pub mu2: f64,
    pub var2: f64,
    pub grid: GridSpec,
}

/// The four curves plus residuals. `convolution` and `sum_pdf` are on the
/// density scale; `sup_convolution` and `sum_logpdf` on the log scale.
/// Residuals compare max-normalized curves, so additive constants on the log
/// side and positive scalings on the density side drop out; they are taken
/// over the central half of the grid, because near the boundary both the
/// quadrature and the grid sup-convolution are truncation-limited (the true
/// optimizer or integrand peak can fall outside the sampled range). The
/// Laplacian fields run the same two pipelines on a pair of standard Laplace
/// variables, where sup-convolution is exact but density convolution is not.
#[derive(Debug, Clone)]
pub struct Fig1Data {
    pub convolution: SampledFunction,
    pub sum_pdf: SampledFunction,
    pub sup_convolution: SampledFunction,
    pub sum_logpdf: SampledFunction,
    pub pdf_residual: f64,
    pub logpdf_residual: f64,
    pub boundary_dominated: bool,
    pub laplace_convolution_residual: f64,
    pub laplace_sup_convolution_residual: f64,
}

fn map_values(f: &SampledFunction, op: impl Fn(ExtReal) -> ExtReal) -> SampledFunction {
    let values = f.values().iter().map(|&v| op(v)).collect();
    SampledFunction::from_values(f.grid().clone(), values).expect("same grid, same length")
}

fn exp_values(f: &SampledFunction) -> SampledFunction {
    map_values(f, |v| match v {
        ExtReal::Finite(x) => ExtReal::Finite(x.exp()),
        ExtReal::NegInf => ExtReal::Finite(0.0),
        ExtReal::PosInf => ExtReal::PosInf,
    })
}

fn neg_values(f: &SampledFunction) -> SampledFunction {
    map_values(f, ExtReal::neg)
}

/// Sup-convolution of two concave samples: negate, infimal-convolve, negate.
fn sup_convolution(a: &SampledFunction, b: &SampledFunction) -> Result<SampledFunction, Error> {
    Ok(neg_values(&neg_values(a).numeric_inf_convolution(&neg_values(b))?))
}

/// Largest pointwise gap over the central half of the grid. `+inf` where one
/// side is infinite and the other is not.
fn central_gap(a: &SampledFunction, b: &SampledFunction) -> f64 {
    let n = a.grid().len();
    let mut worst = 0.0f64;
    for i in n / 4..n - n / 4 {
        match (a.value(i), b.value(i)) {
            (ExtReal::Finite(x), ExtReal::Finite(y)) => worst = worst.max((x - y).abs()),
            (x, y) if x == y => {}
            _ => return f64::INFINITY,
        }
    }
    worst
}

/// Density-scale residual between two log curves after max-normalization.
fn pdf_gap(a: &SampledFunction, b: &SampledFunction) -> f64 {
    central_gap(&exp_values(&a.normalized_to_max()), &exp_values(&b.normalized_to_max()))
}

/// Log-scale residual after max-normalization.
fn logpdf_gap(a: &SampledFunction, b: &SampledFunction) -> f64 {
    central_gap(&a.normalized_to_max(), &b.normalized_to_max())
}

/// Computes the figure data: the density of the sum via trapezoid convolution
/// and the logdensity of the sum via grid sup-convolution, each next to the
/// closed form for the sum variable, plus the Laplacian control.
pub fn fig1_data(params: &Fig1Params) -> Result<Fig1Data, Error> {
    if !(params.var1 > 0.0) || !(params.var2 > 0.0) {
        return Err(Error::ImproperInput(format!(
            "variances must be positive, got {} and {}",
            params.var1, params.var2
        )));
    }
    if params.grid.dim() != 1 {
        return Err(Error::DimensionMismatch { expected: 1, got: params.grid.dim() });
    }
    let grid = params.grid.clone();
    let gauss_logpdf = |mu: f64, var: f64| {
        let norm = 0.5 * (2.0 * std::f64::consts::PI * var).ln();
        SampledFunction::from_fn(grid.clone(), move |x: &Vector| {
            let d = x.get(0) - mu;
            ExtReal::Finite(-d * d / (2.0 * var) - norm)
        })
    };

    let h1 = gauss_logpdf(params.mu1, params.var1);
    let h2 = gauss_logpdf(params.mu2, params.var2);
    let conv = h1.quadrature_log_convolution(&h2)?;
    let convolution = exp_values(&conv.result);
    let sum_logpdf = gauss_logpdf(params.mu1 + params.mu2, params.var1 + params.var2);
    let sum_pdf = exp_values(&sum_logpdf);
    let sup_conv = sup_convolution(&h1, &h2)?;

    let pdf_residual = pdf_gap(&conv.result, &sum_logpdf);
    let logpdf_residual = logpdf_gap(&sup_conv, &sum_logpdf);

    // Control: the same two pipelines on standard Laplace variables. Their
    // logdensity -|x| is idempotent under sup-convolution, so that side stays
    // exact, while the density convolution (1 + |z|) e^{-|z|} / 4 visibly
    // departs from the Laplace shape.
    let laplace = SampledFunction::from_fn(grid.clone(), |x: &Vector| {
        ExtReal::Finite(-x.get(0).abs() + 0.5f64.ln())
    });
    let laplace_conv = laplace.quadrature_log_convolution(&laplace)?;
    let laplace_sup = sup_convolution(&laplace, &laplace)?;
    let laplace_convolution_residual = pdf_gap(&laplace_conv.result, &laplace);
    let laplace_sup_convolution_residual = logpdf_gap(&laplace_sup, &laplace);

    Ok(Fig1Data {
        convolution,
        sum_pdf,
        sup_convolution: sup_conv,
        sum_logpdf,
        pdf_residual,
        logpdf_residual,
        boundary_dominated: conv.boundary_dominated || laplace_conv.boundary_dominated,
        laplace_convolution_residual,
        laplace_sup_convolution_residual,
    })
}

fn cmd_fig1(args: Fig1Args) -> Result<(), Failure> {
    if !(args.var1 > 0.0) || !(args.var2 > 0.0) {
        return Err(usage(format!(
            "variances must be positive, got {} and {}",
            args.var1, args.var2
        )));
    }
    let grid = parse_grid(&args.grid).map_err(usage)?;
    let config = CliConfig { grid, out: args.out, ..CliConfig::default() };
    let data = fig1_data(&Fig1Params {
        mu1: args.mu1,
        var1: args.var1,
        mu2: args.mu2,
        var2: args.var2,
        grid: config.grid.clone(),
    })
    .map_err(|e| improper(e.to_string()))?;

    if data.boundary_dominated {
        eprintln!("warning: the grid boundary dominated a quadrature; widen --grid");
    }

    let dir = config.out.unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir)
        .map_err(|e| usage(format!("cannot create {}: {e}", dir.display())))?;
    let curves: [(&str, &SampledFunction); 4] = [
        ("convolution.csv", &data.convolution),
        ("sum_pdf.csv", &data.sum_pdf),
        ("sup_convolution.csv", &data.sup_convolution),
        ("sum_logpdf.csv", &data.sum_logpdf),
    ];
    for (name, curve) in curves {
        let path = dir.join(name);
        let mut out = Vec::new();
        curve.write_csv(&mut out).expect("writing to a Vec cannot fail");
        fs::write(&path, out)
            .map_err(|e| usage(format!("cannot write {}: {e}", path.display())))?;
        println!("wrote {}", path.display());
    }
    println!("pdf convolution vs closed form (max-normalized): {:.3e}", data.pdf_residual);
    println!(
        "logpdf sup-convolution vs closed form (max-normalized): {:.3e}",
        data.logpdf_residual
    );
    println!(
        "laplacian control, convolution vs laplace shape: {:.3e}",
        data.laplace_convolution_residual
    );
    println!(
        "laplacian control, sup-convolution vs laplace shape: {:.3e}",
        data.laplace_sup_convolution_residual
    );
    Ok(())
}

// ---------------------------------------------------------------------------
// Small argument parsers

/// Parses "lo:hi:n" into a one-dimensional grid.
pub fn parse_grid(text: &str) -> Result<GridSpec, String> {
    let parts: Vec<&str> = text.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("grid must be lo:hi:n, got '{text}'"));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| format!("bad grid bound '{}'", parts[0]))?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| format!("bad grid bound '{}'", parts[1]))?;
    let n: usize = parts[2].trim().parse().map_err(|_| format!("bad grid count '{}'", parts[2]))?;
    GridSpec::line(lo, hi, n).map_err(|e| e.to_string())
}

/// Parses "v1,v2,..." into a vector.
pub fn parse_vector(text: &str) -> Result<Vector, String> {
    let entries: Result<Vec<f64>, String> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|_| format!("bad number '{}'", p.trim())))
        .collect();
    let entries = entries?;
    if entries.is_empty() {
        return Err("expected at least one value".into());
    }
    Ok(Vector::new(entries))
}

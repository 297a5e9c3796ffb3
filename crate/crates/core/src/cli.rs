//! Command-line front end.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage or input error,
//! 3 numerical failure.

use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::certify::{
    evaluate_bound, reports_to_csv, run_convergence, seeded_test_function,
    NativeFunction, FILL_SAFETY_FACTOR,
};
use crate::constants::{ConstantSet, DEFAULT_B0};
use crate::error::Error;
use crate::geometry::{
    fill_distance, format_f64, read_csv_rows, subcube_condition, write_csv_rows, Cube, PointSet,
};
use crate::interpolant::Interpolant;
use crate::kernel::KernelParams;
use crate::lemma_lab::{run_suite, Suite, SuiteOptions};
use crate::logreal::LogReal;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "hspline", version, about = "h-spline interpolation with explicit error bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print every constant of the error bound.
    Constants(ConstantsArgs),
    /// Interpolate values at points and evaluate the spline elsewhere.
    Interpolate(InterpolateArgs),
    /// Certify the bound for one kernel-generated function on one data set.
    Certify(CertifyArgs),
    /// Run the grid-refinement experiment.
    Convergence(ConvergenceArgs),
    /// Check the supporting inequalities numerically.
    VerifyLemmas(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct KernelArgs {
    /// Space dimension.
    #[arg(long)]
    pub n: usize,
    /// Kernel exponent; any real except non-negative even integers.
    #[arg(long, allow_hyphen_values = true)]
    pub beta: f64,
    /// Shape parameter.
    #[arg(long, default_value_t = 1.0)]
    pub c: f64,
}

impl KernelArgs {
    fn params(&self) -> Result<KernelParams, Error> {
        KernelParams::new(self.n, self.beta, self.c)
    }
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Lower bound on the cube side used by the constants.
    #[arg(long, default_value_t = DEFAULT_B0)]
    pub b0: f64,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct InterpolateArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// N×n CSV of centers.
    #[arg(long)]
    pub points: PathBuf,
    /// N×1 CSV of values.
    #[arg(long)]
    pub values: PathBuf,
    /// M×n CSV of evaluation points.
    #[arg(long)]
    pub eval: PathBuf,
    /// M×1 CSV of spline values; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CubeArgs {
    /// Lower corner of the cube, comma separated; the origin when absent.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub corner: Option<Vec<f64>>,
    #[arg(long, default_value_t = 1.0)]
    pub side: f64,
}

impl CubeArgs {
    fn cube(&self, n: usize) -> Result<Cube, Error> {
        let corner = self.corner.clone().unwrap_or_else(|| vec![0.0; n]);
        if corner.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: corner.len(),
            });
        }
        Cube::new(corner, self.side)
    }
}

#[derive(Debug, Args)]
pub struct CertifyArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Lower bound on the cube side used by the constants.
    #[arg(long, default_value_t = DEFAULT_B0)]
    pub b0: f64,
    #[command(flatten)]
    pub cube: CubeArgs,
    /// Data sites X (N×n CSV).
    #[arg(long)]
    pub points: PathBuf,
    /// Generating centers of f (K×n CSV).
    #[arg(long)]
    pub centers: PathBuf,
    /// Generating coefficients of f (K×1 CSV).
    #[arg(long)]
    pub coeffs: PathBuf,
    #[arg(long, default_value_t = 1000)]
    pub probes: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Probe-grid resolution per axis for the fill distance.
    #[arg(long, default_value_t = 401)]
    pub resolution: usize,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ConvergenceArgs {
    #[command(flatten)]
    pub kernel: KernelArgs,
    /// Lower bound on the cube side used by the constants.
    #[arg(long, default_value_t = DEFAULT_B0)]
    pub b0: f64,
    #[command(flatten)]
    pub cube: CubeArgs,
    /// Points per axis for each level.
    #[arg(long, value_delimiter = ',', default_value = "5,9,17,33")]
    pub levels: Vec<usize>,
    #[arg(long, default_value_t = 1000)]
    pub probes: usize,
    /// Number of generating centers of the test function.
    #[arg(long = "centers", default_value_t = 12)]
    pub num_centers: usize,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Directory receiving report.json and report.csv; JSON to stdout
    /// when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// One of l11, l21, l22, l23, all.
    #[arg(long, default_value = "all")]
    pub suite: String,
    #[arg(long, default_value_t = 42)]
    pub seed: u64,
    /// Largest k for the l23 family.
    #[arg(long, default_value_t = 300)]
    pub kmax: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Failure carrying its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SingularSystem { .. }
            | Error::NegativeForm(_)
            | Error::LpInfeasible
            | Error::IterationLimit(_)
            | Error::DegenerateTrial => EXIT_NUMERIC,
            _ => EXIT_USAGE,
        };
        let message = match &e {
            Error::InvalidParameter(m) => m.clone(),
            other => other.to_string(),
        };
        CliError { code, message }
    }
}

fn io_err(path: &Path, e: io::Error) -> CliError {
    CliError {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    }
}

fn read_rows(path: &Path) -> Result<Vec<Vec<f64>>, CliError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    read_csv_rows(BufReader::new(file)).map_err(|e| CliError {
        code: EXIT_USAGE,
        message: format!("{}: {e}", path.display()),
    })
}

fn read_points(path: &Path, n: usize) -> Result<Vec<Vec<f64>>, CliError> {
    let rows = read_rows(path)?;
    if let Some(row) = rows.iter().find(|r| r.len() != n) {
        return Err(CliError {
            code: EXIT_USAGE,
            message: format!("{}: expected {n} columns, found {}", path.display(), row.len()),
        });
    }
    Ok(rows)
}

fn read_column(path: &Path) -> Result<Vec<f64>, CliError> {
    read_points(path, 1).map(|rows| rows.into_iter().map(|r| r[0]).collect())
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| io_err(path, e)),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(text.as_bytes())
                .map_err(|e| io_err(Path::new("<stdout>"), e))
        }
    }
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn render_logreal(v: &LogReal) -> String {
    match v.to_f64_checked() {
        Some(x) => format_f64(x),
        None => v.to_string(),
    }
}

pub fn constants_csv(cs: &ConstantSet) -> String {
    let mut rows: Vec<(&str, String)> = vec![
        ("n", cs.n.to_string()),
        ("beta", format_f64(cs.beta)),
        ("c", format_f64(cs.c)),
        ("m", cs.m.to_string()),
        ("caseLabel", cs.case_label.to_string()),
        ("gammaN", cs.gamma_n.to_string()),
        ("s", cs.s.to_string()),
        ("rho", cs.rho.to_string()),
        ("delta0Const", cs.delta0_const.to_string()),
        ("rhoPrime", format_f64(cs.rho_prime)),
    ];
    for (name, v) in [
        ("bigB", &cs.big_b),
        ("bigC", &cs.big_c),
        ("delta0", &cs.delta0),
        ("lambda", &cs.lambda),
        ("lnLambda", &cs.ln_lambda),
        ("d0", &cs.d0),
        ("lambdaPrime", &cs.lambda_prime),
        ("lnLambdaPrime", &cs.ln_lambda_prime),
        ("frontK", &cs.front_k),
    ] {
        rows.push((name, render_logreal(v)));
    }
    rows.push(("alphaN", format_f64(cs.alpha_n)));
    rows.push(("b0", format_f64(cs.b0)));
    let mut out = String::from("field,value\n");
    for (k, v) in rows {
        out.push_str(&format!("{k},{v}\n"));
    }
    out
}

fn cmd_constants(args: &ConstantsArgs) -> Result<i32, CliError> {
    let cs = ConstantSet::compute(&args.kernel.params()?, args.b0)?;
    let text = match args.format {
        Format::Json => to_json(&cs),
        Format::Csv => constants_csv(&cs),
    };
    emit(args.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_interpolate(args: &InterpolateArgs) -> Result<i32, CliError> {
    let p = args.kernel.params()?;
    let centers = read_points(&args.points, p.n())?;
    let values = read_column(&args.values)?;
    let eval = read_points(&args.eval, p.n())?;
    if centers.len() != values.len() {
        return Err(CliError {
            code: EXIT_USAGE,
            message: format!(
                "{} points but {} values",
                centers.len(),
                values.len()
            ),
        });
    }
    let s = Interpolant::build(&p, &centers, &values)?;
    let out: Vec<Vec<f64>> = eval
        .iter()
        .map(|x| s.eval(x).map(|v| vec![v]))
        .collect::<Result<_, _>>()?;
    let mut buf = Vec::new();
    write_csv_rows(&mut buf, &out)?;
    emit(args.out.as_deref(), &String::from_utf8(buf).expect("utf8"))?;
    Ok(EXIT_OK)
}

/// Single-data-set certificate.
#[derive(Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Certificate {
    pub num_points: usize,
    pub fill_distance_estimate: f64,
    pub d: f64,
    pub front_k: LogReal,
    pub exp_factor: LogReal,
    pub norm_h: f64,
    pub bound: LogReal,
    pub observed_max_err: f64,
    pub probe_count: usize,
    pub within_d0: bool,
    pub subcube_holds: bool,
    pub valid: bool,
    pub bound_holds: bool,
}

fn cmd_certify(args: &CertifyArgs) -> Result<i32, CliError> {
    use rand::SeedableRng;
    let p = args.kernel.params()?;
    let cs = ConstantSet::compute(&p, args.b0)?;
    let cube = args.cube.cube(p.n())?;
    let x = PointSet::new(p.n(), read_points(&args.points, p.n())?)?;
    let f = NativeFunction::new(&p, read_points(&args.centers, p.n())?, read_column(&args.coeffs)?)?;
    if args.probes < 1 {
        return Err(Error::InvalidParameter("at least one probe required".into()).into());
    }
    let fill = fill_distance(&cube, &x, args.resolution)?;
    let d = FILL_SAFETY_FACTOR * fill;
    let subcube_holds = subcube_condition(&cube, &x, (2.0 * d).min(cube.side()))?;
    let bv = evaluate_bound(&cs, d, f.norm_h())?;
    let values: Vec<f64> = x.points().iter().map(|y| f.eval(y)).collect();
    let s = Interpolant::build(&p, x.points(), &values)?;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst = 0.0f64;
    for _ in 0..args.probes {
        let y = cube.sample(&mut rng);
        worst = worst.max((s.eval(&y)? - f.eval(&y)).abs());
    }
    let cert = Certificate {
        num_points: x.len(),
        fill_distance_estimate: fill,
        d,
        front_k: cs.front_k,
        exp_factor: bv.exp_factor,
        norm_h: f.norm_h(),
        bound: bv.bound,
        observed_max_err: worst,
        probe_count: args.probes,
        within_d0: bv.within_d0,
        subcube_holds,
        valid: bv.within_d0 && subcube_holds,
        bound_holds: LogReal::from_f64(worst) <= bv.bound,
    };
    let text = match args.format {
        Format::Json => to_json(&cert),
        Format::Csv => format!(
            "d,ln_bound,observed_max_err,valid\n{},{},{},{}\n",
            format_f64(d),
            format_f64(bv.bound.ln_mag()),
            format_f64(worst),
            cert.valid
        ),
    };
    emit(args.out.as_deref(), &text)?;
    Ok(EXIT_OK)
}

fn cmd_convergence(args: &ConvergenceArgs) -> Result<i32, CliError> {
    let p = args.kernel.params()?;
    let cs = ConstantSet::compute(&p, args.b0)?;
    let cube = args.cube.cube(p.n())?;
    let f = seeded_test_function(&p, &cube, args.num_centers, args.seed)?;
    let reports = run_convergence(&cs, &f, &cube, &args.levels, args.probes, args.seed)?;
    let json = to_json(&reports);
    match &args.out {
        Some(dir) => {
            fs::create_dir_all(dir).map_err(|e| io_err(dir, e))?;
            emit(Some(&dir.join("report.json")), &json)?;
            emit(Some(&dir.join("report.csv")), &reports_to_csv(&reports))?;
        }
        None => emit(None, &json)?,
    }
    if !reports.is_empty() && reports.iter().all(|r| r.error.is_some()) {
        return Ok(EXIT_NUMERIC);
    }
    Ok(EXIT_OK)
}

fn cmd_verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let suite: Suite = args.suite.parse()?;
    let opts = SuiteOptions {
        seed: args.seed,
        k_max_l23: args.kmax,
        ..SuiteOptions::default()
    };
    let results = run_suite(suite, &opts)?;
    emit(args.out.as_deref(), &to_json(&results))?;
    if results.iter().all(|r| r.passed) {
        Ok(EXIT_OK)
    } else {
        Ok(EXIT_VERIFY_FAILED)
    }
}

pub fn run(cli: &Cli) -> Result<i32, CliError> {
    match &cli.command {
        Command::Constants(a) => cmd_constants(a),
        Command::Interpolate(a) => cmd_interpolate(a),
        Command::Certify(a) => cmd_certify(a),
        Command::Convergence(a) => cmd_convergence(a),
        Command::VerifyLemmas(a) => cmd_verify(a),
    }
}

/// Parses `std::env::args`, runs, prints a one-line diagnostic on failure
/// and returns the exit code.
pub fn main() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}


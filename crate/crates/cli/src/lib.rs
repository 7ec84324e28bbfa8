//! Command-line front end for `scatterflat`.
//!
//! [`run`] parses arguments, applies an optional `--config` file, dispatches
//! to the library and writes JSON or CSV to standard output or `--out`. Every
//! file written with `--out` gets a `<out>.manifest.json` next to it.
//!
//! Exit codes: 0 on success, 1 on numeric failures (poles, exhausted term
//! budgets, failed verification), 2 on usage and precondition errors. Errors
//! are reported on standard error as `{"code": ..., "message": ...}`.

mod config;
mod output;
pub mod verify;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, CommandFactory, FromArgMatches, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use scatterflat::chambers::{self, CartanVector, ChamberConvention, ChamberQuery, Parabolic};
use scatterflat::exactlin::{bruhat_decompose, sojourn_vector, Permutation, UnimodularMatrix};
use scatterflat::geodesics::{self, SojournMode};
use scatterflat::poisson::{self, Spectrum, Window};
use scatterflat::scatmat::{Scattering, SpectralParameter3};
use scatterflat::specfun::{self, EvalOptions, RiemannZeta, ZetaEval};
use scatterflat::Complex64;

pub use output::sig15;

/// Documented invocations; each is executed by the test suite.
pub const EXAMPLES: &str = "\
Examples:
  scatterflat geodesics enumerate --cmax 3
  scatterflat geodesics sojourn --matrix '[[\"1\",\"0\"],[\"2\",\"1\"]]' --mode killing
  scatterflat geodesics guillemin-check --sigma 2 --cmax 1000
  scatterflat geodesics crossing --c 5 --a 2 --y 10
  scatterflat scatmat rank1 --s-re 2 --s-im 0
  scatterflat scatmat rank2 --w 13 --lambda-re 2,0,-2
  scatterflat scatmat eisenstein-check --y 3 --s-re 2 --cmax 1000
  scatterflat specfun eval --function zeta --s-re 0.5 --s-im 14.134725
  scatterflat poisson scan --rmax 500 --count 16384 --window gaussian --out spectrum.csv
  scatterflat poisson peaks --in spectrum.csv --threshold 5 --out peaks.json
  scatterflat poisson sl3 --w 12 --rmax 500
  scatterflat chambers classify --h 2,0,-2 --r 4
  scatterflat chambers contains --parabolic P0 --r 4 --h 2,0,-2
  scatterflat bruhat decompose --matrix '[[\"0\",\"-1\"],[\"1\",\"0\"]]'
  scatterflat verify chambers

Environment:
  SCATTERFLAT_THREADS  maximum number of worker threads
";

#[derive(Debug, Parser)]
#[command(
    name = "scatterflat",
    version,
    about = "Scattering matrices, sojourn times and their Poisson relation for SL(2,Z) and SL(3,Z)",
    after_help = EXAMPLES,
    args_override_self = true
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalOpts {
    /// key=value file of default flags; command-line flags take precedence
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Seed for randomized sampling
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Output format (default: csv for tables, json otherwise)
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Write the result to a file instead of standard output
    #[arg(long, global = true, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

/// Deliberate defects for exercising the verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Fault {
    /// Adds 1e-4 to every zeta value.
    Zeta,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Special functions
    Specfun {
        #[command(subcommand)]
        op: SpecfunCmd,
    },
    /// Rank-one and rank-two scattering matrices
    Scatmat {
        #[command(subcommand)]
        op: ScatmatCmd,
    },
    /// Scattering geodesics on the modular surface
    Geodesics {
        #[command(subcommand)]
        op: GeodesicsCmd,
    },
    /// FFT of C(1/2+ir) and sojourn-time peaks
    Poisson {
        #[command(subcommand)]
        op: PoissonCmd,
    },
    /// Weyl chambers and reduction theory for SL(3)
    Chambers {
        #[command(subcommand)]
        op: ChambersCmd,
    },
    /// Exact Bruhat decomposition
    Bruhat {
        #[command(subcommand)]
        op: BruhatCmd,
    },
    /// Run a verification suite; exit 0 iff every criterion passes
    Verify {
        #[arg(value_enum)]
        suite: verify::Suite,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum SpecialFunction {
    Zeta,
    Omega,
    Gamma,
    LnGamma,
    /// sqrt(pi) Gamma(s-1/2)/Gamma(s)
    F,
}

#[derive(Debug, Subcommand)]
pub enum SpecfunCmd {
    /// Evaluate a special function at s
    Eval {
        #[arg(long, value_enum, default_value = "zeta")]
        function: SpecialFunction,
        #[arg(long, allow_hyphen_values = true)]
        s_re: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        s_im: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 1_000_000)]
        max_terms: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ScatmatCmd {
    /// C(s) = Omega(2s-1)/Omega(2s)
    Rank1 {
        #[arg(long, allow_hyphen_values = true)]
        s_re: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        s_im: f64,
    },
    /// C(w, lambda) for w in S_3 and trace-zero lambda
    Rank2 {
        /// Permutation in cycle notation: e, 12, 23, 13, 123, 132
        #[arg(long)]
        w: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        lambda_re: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0,0,0")]
        lambda_im: String,
    },
    /// Residual of the truncated Eisenstein constant term against y^s + C(s) y^(1-s)
    EisensteinCheck {
        #[arg(long)]
        y: f64,
        #[arg(long, allow_hyphen_values = true)]
        s_re: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        s_im: f64,
        #[arg(long)]
        cmax: u32,
    },
}

#[derive(Debug, Subcommand)]
pub enum GeodesicsCmd {
    /// Table of classes: c, multiplicity, sojourn time
    Enumerate {
        #[arg(long)]
        cmax: u64,
    },
    /// Sojourn time of the geodesic of a 2x2 unimodular matrix
    Sojourn {
        /// JSON rows of decimal strings, e.g. [["1","0"],["2","1"]]
        #[arg(long)]
        matrix: String,
        #[arg(long, value_enum, default_value = "hyperbolic")]
        mode: ModeArg,
    },
    /// Compare the sojourn-time series with C(sigma)
    GuilleminCheck {
        #[arg(long, allow_hyphen_values = true)]
        sigma: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        sigma_im: f64,
        #[arg(long)]
        cmax: u64,
    },
    /// Horoball crossing time along the geodesic from infinity to a/c
    Crossing {
        #[arg(long)]
        c: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long)]
        y: f64,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum ModeArg {
    Hyperbolic,
    Killing,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum WindowArg {
    Gaussian,
    Hann,
    None,
}

#[derive(Debug, Subcommand)]
pub enum PoissonCmd {
    /// Windowed FFT on [-rmax, rmax]; columns zeta, abs, re, im
    Scan {
        #[arg(long, default_value_t = 500.0)]
        rmax: f64,
        #[arg(long, default_value_t = 16384)]
        count: usize,
        #[arg(long, value_enum, default_value = "gaussian")]
        window: WindowArg,
        /// Transform C(1/2+ir) itself instead of its Dirichlet part
        #[arg(long)]
        raw: bool,
    },
    /// Detect peaks in a spectrum written by `poisson scan`
    Peaks {
        #[arg(long = "in", value_name = "CSV")]
        input: PathBuf,
        #[arg(long, default_value_t = poisson::DEFAULT_THRESHOLD)]
        threshold: f64,
    },
    /// Singular-support vectors of the rank-two scattering matrix
    Sl3 {
        #[arg(long, default_value = "12")]
        w: String,
        #[arg(long, default_value_t = 500.0)]
        rmax: f64,
        #[arg(long, default_value_t = 16384)]
        count: usize,
    },
}

#[derive(Debug, Subcommand)]
pub enum ChambersCmd {
    /// Core or end containing h for the shift r
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long)]
        r: f64,
        /// Use the printed rank-one inequalities 12h+r > 0 and 12h-r > 0
        #[arg(long)]
        literal: bool,
    },
    /// Membership in the shifted chamber of a standard parabolic
    Contains {
        #[arg(long)]
        parabolic: String,
        #[arg(long)]
        r: f64,
        #[arg(long, allow_hyphen_values = true)]
        h: String,
        #[arg(long)]
        literal: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum BruhatCmd {
    /// Factor g = u diag(m a) P(w) u'
    Decompose {
        /// JSON rows of decimal strings
        #[arg(long)]
        matrix: String,
    },
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Io(String),
    Library(scatterflat::Error),
    Failed(String),
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Input(_) => "input",
            CliError::Io(_) => "io",
            CliError::Library(e) => e.code(),
            CliError::Failed(_) => "verification_failed",
        }
    }

    fn exit_code(&self) -> i32 {
        match self {
            CliError::Library(e) if e.is_numeric() => 1,
            CliError::Failed(_) => 1,
            _ => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Io(m) | CliError::Failed(m) => m.clone(),
            CliError::Library(e) => e.to_string(),
        }
    }
}

impl From<scatterflat::Error> for CliError {
    fn from(e: scatterflat::Error) -> Self {
        CliError::Library(e)
    }
}

struct FaultyZeta;

impl ZetaEval for FaultyZeta {
    fn zeta(&self, s: Complex64, opts: &EvalOptions) -> scatterflat::Result<Complex64> {
        Ok(RiemannZeta.zeta(s, opts)? + 1e-4)
    }
}

static FAULTY_ZETA: FaultyZeta = FaultyZeta;

fn scattering(global: &GlobalOpts) -> Scattering<'static> {
    match global.inject_fault {
        Some(Fault::Zeta) => Scattering::with_zeta(&FAULTY_ZETA, EvalOptions::default()),
        None => Scattering::standard(),
    }
}

/// Runs the command line `argv` (program name first) and returns the exit code.
pub fn run(argv: &[String]) -> i32 {
    run_with(argv, &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with(argv: &[String], out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> i32 {
    match parse(argv) {
        Ok(Parsed::Display(text)) => {
            let _ = write!(out, "{text}");
            0
        }
        Ok(Parsed::Run(cli, argv)) => {
            let result = with_thread_cap(|| execute(&cli, &argv, out, err));
            match result {
                Ok(code) => code,
                Err(e) => report(&e, err),
            }
        }
        Err(e) => report(&e, err),
    }
}

fn report(e: &CliError, err: &mut (dyn Write + Send)) -> i32 {
    let _ = writeln!(err, "{}", json!({ "code": e.code(), "message": e.message() }));
    e.exit_code()
}

enum Parsed {
    Display(String),
    Run(Cli, Vec<String>),
}

fn parse(argv: &[String]) -> Result<Parsed, CliError> {
    let root = Cli::command();
    let clap_error = |e: clap::Error| match e.kind() {
        clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => Ok(Parsed::Display(e.render().to_string())),
        _ => Err(CliError::Usage(e.render().to_string().trim_end().to_string())),
    };
    // Lenient first pass: required flags may still come from the config file.
    let mut effective = argv.to_vec();
    if let Ok(pre) = root.clone().ignore_errors(true).try_get_matches_from(argv) {
        if let Some(path) = pre.get_one::<PathBuf>("config") {
            let entries = config::read(path)?;
            effective = config::splice(&root, argv, &config::subcommand_path(&pre), &entries);
        }
    }
    let matches = match root.try_get_matches_from(&effective) {
        Ok(m) => m,
        Err(e) => return clap_error(e),
    };
    let cli = Cli::from_arg_matches(&matches).map_err(|e| CliError::Usage(e.to_string()))?;
    Ok(Parsed::Run(cli, effective))
}

fn with_thread_cap<T: Send>(f: impl FnOnce() -> T + Send) -> T {
    let cap = std::env::var("SCATTERFLAT_THREADS").ok().and_then(|v| v.trim().parse::<usize>().ok());
    match cap.filter(|n| *n > 0).map(|n| rayon::ThreadPoolBuilder::new().num_threads(n).build()) {
        Some(Ok(pool)) => pool.install(f),
        _ => f(),
    }
}

/// A command's result, before formatting.
struct Output {
    value: Value,
    /// Default to CSV when no `--format` is given.
    tabular: bool,
    /// Tolerances recorded in the manifest.
    tolerances: Value,
}

impl Output {
    fn json(value: Value) -> Self {
        Output { value, tabular: false, tolerances: default_tolerances() }
    }

    fn table(value: Value) -> Self {
        Output { value, tabular: true, tolerances: default_tolerances() }
    }

    fn with_tolerances(mut self, extra: Value) -> Self {
        if let (Value::Object(base), Value::Object(extra)) = (&mut self.tolerances, extra) {
            base.extend(extra);
        }
        self
    }
}

fn default_tolerances() -> Value {
    let o = EvalOptions::default();
    json!({ "target_abs_error": o.target_abs_error, "max_terms": o.max_terms })
}

fn complex(z: Complex64) -> Value {
    json!({ "re": z.re, "im": z.im })
}

fn triple(text: &str, what: &str) -> Result<[f64; 3], CliError> {
    let parts: Vec<f64> = text
        .split(',')
        .map(|p| p.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Input(format!("{what}: expected three comma-separated numbers, got '{text}'")))?;
    parts.try_into().map_err(|_| CliError::Input(format!("{what}: expected three numbers, got '{text}'")))
}

fn matrix(text: &str) -> Result<UnimodularMatrix, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Input(format!("matrix: {e}")))
}

fn permutation(text: &str) -> Result<Permutation, CliError> {
    Ok(text.parse::<Permutation>()?)
}

fn execute(cli: &Cli, argv: &[String], out: &mut (dyn Write + Send), err: &mut (dyn Write + Send)) -> Result<i32, CliError> {
    let start = Instant::now();
    let g = &cli.global;
    if let Command::Verify { suite } = cli.command {
        let ctx = verify::Context { scattering: scattering(g), seed: g.seed };
        let checks = verify::run_suite(suite, &ctx, err);
        let passed = checks.iter().all(|c| c.passed);
        let text = match g.format {
            Some(Format::Json) => serde_json::to_string_pretty(&checks).expect("serializable") + "\n",
            Some(Format::Csv) => output::to_csv(&serde_json::to_value(&checks).expect("serializable"))?,
            None => verify::render(&checks),
        };
        deliver(g, argv, &text, &default_tolerances(), start, out)?;
        if !passed {
            let failing: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| format!("{} ({})", c.criterion, c.name)).collect();
            return Err(CliError::Failed(format!("failing criteria: {}", failing.join(", "))));
        }
        return Ok(0);
    }

    let result = dispatch(&cli.command, g, err)?;
    let text = match g.format.unwrap_or(if result.tabular { Format::Csv } else { Format::Json }) {
        Format::Json => serde_json::to_string_pretty(&result.value).expect("serializable") + "\n",
        Format::Csv => output::to_csv(&result.value)?,
    };
    deliver(g, argv, &text, &result.tolerances, start, out)?;
    Ok(0)
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a [String],
    config: &'a GlobalOpts,
    wall_time_seconds: f64,
    tolerances: &'a Value,
}

fn deliver(g: &GlobalOpts, argv: &[String], text: &str, tolerances: &Value, start: Instant, out: &mut (dyn Write + Send)) -> Result<(), CliError> {
    let Some(path) = &g.out else {
        return out.write_all(text.as_bytes()).map_err(|e| CliError::Io(e.to_string()));
    };
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let manifest = Manifest {
        tool: "scatterflat",
        version: env!("CARGO_PKG_VERSION"),
        command: &argv[1..],
        config: g,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        tolerances,
    };
    let manifest_path = manifest_path(path);
    let body = serde_json::to_string_pretty(&manifest).expect("serializable") + "\n";
    std::fs::write(&manifest_path, body).map_err(|e| CliError::Io(format!("{}: {e}", manifest_path.display())))
}

/// `<out>.manifest.json`.
pub fn manifest_path(out: &Path) -> PathBuf {
    let mut name = out.as_os_str().to_os_string();
    name.push(".manifest.json");
    PathBuf::from(name)
}

fn dispatch(command: &Command, g: &GlobalOpts, err: &mut (dyn Write + Send)) -> Result<Output, CliError> {
    let sc = scattering(g);
    match command {
        Command::Specfun { op: SpecfunCmd::Eval { function, s_re, s_im, tol, max_terms } } => {
            let s = Complex64::new(*s_re, *s_im);
            let opts = EvalOptions { target_abs_error: *tol, max_terms: *max_terms };
            opts.validate()?;
            let value = match function {
                SpecialFunction::Zeta => sc.zeta().zeta(s, &opts)?,
                SpecialFunction::Omega => specfun::omega_with(sc.zeta(), s, &opts)?,
                SpecialFunction::Gamma => specfun::gamma(s)?,
                SpecialFunction::LnGamma => specfun::ln_gamma(s)?,
                SpecialFunction::F => specfun::f_factor(s)?,
            };
            Ok(Output::json(complex(value)).with_tolerances(json!({ "target_abs_error": tol, "max_terms": max_terms })))
        }
        Command::Scatmat { op } => scatmat_command(op, &sc),
        Command::Geodesics { op } => geodesics_command(op, &sc),
        Command::Poisson { op } => poisson_command(op, &sc, err),
        Command::Chambers { op } => chambers_command(op),
        Command::Bruhat { op: BruhatCmd::Decompose { matrix: text } } => {
            let g = matrix(text)?;
            let f = bruhat_decompose(&g);
            let v = sojourn_vector(&f);
            let mut value = serde_json::to_value(&f).expect("serializable");
            value["w_one_based"] = json!(f.w.images().iter().map(|i| i + 1).collect::<Vec<_>>());
            value["sojourn_vector"] = json!(v.h);
            value["killing_norm"] = json!(v.killing_norm()?);
            Ok(Output::json(value).with_tolerances(json!({ "arithmetic": "exact" })))
        }
        Command::Verify { .. } => unreachable!("handled by execute"),
    }
}

fn scatmat_command(op: &ScatmatCmd, sc: &Scattering<'_>) -> Result<Output, CliError> {
    match op {
        ScatmatCmd::Rank1 { s_re, s_im } => {
            let v = sc.c_rank1(Complex64::new(*s_re, *s_im))?;
            let mut value = complex(v.value);
            value["at_pole"] = json!(v.at_pole);
            Ok(Output::json(value))
        }
        ScatmatCmd::Rank2 { w, lambda_re, lambda_im } => {
            let w = permutation(w)?;
            let (re, im) = (triple(lambda_re, "lambda-re")?, triple(lambda_im, "lambda-im")?);
            let lam = SpectralParameter3::new([0, 1, 2].map(|i| Complex64::new(re[i], im[i])))?;
            let v = sc.c_rank2(&w, &lam)?;
            let inversions: Vec<[usize; 2]> = w.inversions().iter().map(|&(a, b)| [a + 1, b + 1]).collect();
            let mut value = complex(v.value);
            value["at_pole"] = json!(v.at_pole);
            value["inversions"] = json!(inversions);
            Ok(Output::json(value))
        }
        ScatmatCmd::EisensteinCheck { y, s_re, s_im, cmax } => {
            let residual = sc.eisenstein_constant_term_check(*y, Complex64::new(*s_re, *s_im), *cmax)?;
            Ok(Output::json(json!({ "y": y, "s": complex(Complex64::new(*s_re, *s_im)), "cmax": cmax, "residual": residual })))
        }
    }
}

fn geodesics_command(op: &GeodesicsCmd, sc: &Scattering<'_>) -> Result<Output, CliError> {
    match op {
        GeodesicsCmd::Enumerate { cmax } => {
            let table = geodesics::enumerate_classes(*cmax)?;
            let rows: Vec<Value> = table
                .rows
                .iter()
                .map(|r| json!({ "c": r.c, "phi": r.multiplicity, "sojourn": r.sojourn_time }))
                .collect();
            Ok(Output::table(Value::Array(rows)))
        }
        GeodesicsCmd::Sojourn { matrix: text, mode } => {
            let g = matrix(text)?;
            let mode = match mode {
                ModeArg::Hyperbolic => SojournMode::Hyperbolic,
                ModeArg::Killing => SojournMode::Killing,
            };
            let t = geodesics::sojourn_time_from_matrix(&g, mode)?;
            Ok(Output::json(json!({ "mode": mode, "sojourn_time": t })))
        }
        GeodesicsCmd::GuilleminCheck { sigma, sigma_im, cmax } => {
            let s = Complex64::new(*sigma, *sigma_im);
            let series = geodesics::guillemin_sum(s, *cmax)?;
            let exact = sc.c_rank1(s)?.value;
            let residual = (series - exact).norm();
            let bound = 2.0 / (*cmax as f64).powf(2.0 * sigma - 2.0);
            Ok(Output::json(json!({
                "sigma": complex(s),
                "cmax": cmax,
                "series": complex(series),
                "c_rank1": complex(exact),
                "residual": residual,
                "tail_bound": bound,
            })))
        }
        GeodesicsCmd::Crossing { c, a, y } => {
            let t = geodesics::horoball_crossing_time(*c, *a, *y)?;
            Ok(Output::json(json!({ "c": c, "a": a, "y": y, "total": t.total, "normalized": t.normalized, "two_ln_c": 2.0 * (*c as f64).ln() }))
                .with_tolerances(json!({ "quadrature_abs_error": 1e-14 })))
        }
    }
}

fn window(arg: WindowArg, r_max: f64) -> Window {
    match arg {
        WindowArg::Gaussian => Window::default_gaussian(r_max),
        WindowArg::Hann => Window::Hann,
        WindowArg::None => Window::None,
    }
}

fn poisson_command(op: &PoissonCmd, sc: &Scattering<'_>, err: &mut (dyn Write + Send)) -> Result<Output, CliError> {
    match op {
        PoissonCmd::Scan { rmax, count, window: w, raw } => {
            let _ = writeln!(err, "sampling C(1/2+ir) at {count} points on [-{rmax}, {rmax}]");
            let mut samples = poisson::sample_phi_with(sc, *rmax, *count)?;
            let health = samples.unitarity_deviation;
            if !raw {
                samples = samples.dirichlet_part()?;
            }
            let spectrum = poisson::windowed_fft(&samples.with_window(window(*w, *rmax)));
            let rows: Vec<Value> = (0..spectrum.values.len())
                .map(|j| {
                    let v = spectrum.values[j];
                    json!({ "zeta": spectrum.zeta(j), "abs": v.norm(), "re": v.re, "im": v.im })
                })
                .collect();
            Ok(Output::table(Value::Array(rows)).with_tolerances(json!({ "unitarity_deviation": health, "unitarity_limit": 1e-8 })))
        }
        PoissonCmd::Peaks { input, threshold } => {
            let spectrum = read_spectrum(input)?;
            let report = poisson::detect_peaks(&spectrum, *threshold)?;
            Ok(Output::json(serde_json::to_value(&report).expect("serializable"))
                .with_tolerances(json!({ "threshold_ratio": threshold, "median_half_width": poisson::MEDIAN_HALF_WIDTH })))
        }
        PoissonCmd::Sl3 { w, rmax, count } => {
            let w = permutation(w)?;
            let report = poisson::sojourn_peaks_with(sc, *rmax, *count, Window::default_gaussian(*rmax), poisson::DEFAULT_THRESHOLD)?;
            let vectors = poisson::sl3_pattern(&w, &report)?;
            let rows: Vec<Value> = vectors.iter().map(|v| json!({ "h1": v[0], "h2": v[1], "h3": v[2] })).collect();
            Ok(Output::json(Value::Array(rows)))
        }
    }
}

/// Reads the `zeta,abs,re,im` table written by `poisson scan`.
fn read_spectrum(path: &Path) -> Result<Spectrum, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
    let mut lines = text.lines();
    let header: Vec<&str> = lines.next().unwrap_or("").split(',').collect();
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| CliError::Input(format!("{}: missing column '{name}'", path.display())))
    };
    let (iz, ire, iim) = (col("zeta")?, col("re")?, col("im")?);
    let mut zeta = Vec::new();
    let mut values = Vec::new();
    for (k, line) in lines.enumerate() {
        let cells: Vec<&str> = line.split(',').collect();
        let num = |i: usize| {
            cells
                .get(i)
                .and_then(|c| c.parse::<f64>().ok())
                .ok_or_else(|| CliError::Input(format!("{}: bad number on row {}", path.display(), k + 2)))
        };
        zeta.push(num(iz)?);
        values.push(Complex64::new(num(ire)?, num(iim)?));
    }
    if zeta.len() < 3 {
        return Err(CliError::Input(format!("{}: spectrum needs at least three rows", path.display())));
    }
    let n = zeta.len() as f64;
    let spacing = (zeta[zeta.len() - 1] - zeta[0]) / (n - 1.0);
    Ok(Spectrum { zeta_min: zeta[0], spacing, values, resolution: spacing * n / (n - 1.0) })
}

fn chambers_command(op: &ChambersCmd) -> Result<Output, CliError> {
    let convention = |literal: bool| if literal { ChamberConvention::Literal } else { ChamberConvention::Derived };
    match op {
        ChambersCmd::Classify { h, r, literal } => {
            let x = CartanVector::new(triple(h, "h")?)?;
            let region = chambers::classify_point(&x, *r, convention(*literal))?;
            Ok(Output::json(json!({ "region": region.to_string(), "convention": convention(*literal) })))
        }
        ChambersCmd::Contains { parabolic, r, h, literal } => {
            let q = ChamberQuery::new(parabolic.parse::<Parabolic>()?, *r)?;
            let x = CartanVector::new(triple(h, "h")?)?;
            let inside = chambers::shifted_chamber_contains(&q, &x, convention(*literal))?;
            Ok(Output::json(json!({ "parabolic": q.parabolic, "r": r, "contains": inside, "convention": convention(*literal) })))
        }
    }
}

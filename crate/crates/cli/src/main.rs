mod commands;
mod spec;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use spec::{split_rows, CliError, FnSpec, ProblemSpec, SpecError};

/// Exact semi-algebraic computations and empirical exponent estimates.
#[derive(Parser, Debug)]
#[command(name = "semialg", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON problem file; flags given on the command line override it.
    #[arg(long, global = true)]
    problem: Option<PathBuf>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write estimator data (curve samples or envelope rows) as CSV.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    /// Seed for every random choice (default 0).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Print the merged problem spec and exit.
    #[arg(long, global = true)]
    dump_spec: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Parse polynomials and print their canonical forms.
    Parse(PolyArgs),
    /// Isolate the real roots of a univariate polynomial.
    Roots(PolyArgs),
    /// Thom encodings of the real roots of a univariate polynomial.
    Thom(PolyArgs),
    /// Realizable sign conditions of a univariate family, cell by cell.
    Signcond1d(PolyArgs),
    /// Cylindrical decomposition of the plane adapted to a family.
    Cad2d(PolyArgs),
    /// Empirical growth exponent of a graph selected among CAD sections.
    GrowthCheck(GrowthArgs),
    /// Distance to a finite point set, or to a closed subset of the line.
    Dist(DistArgs),
    /// Residual of a polynomial system, or of a semidefinite constraint.
    Residual(ResidualArgs),
    /// Exponent bounds evaluated exactly.
    Bounds(BoundsArgs),
    /// Estimate a Lojasiewicz exponent along a curve or over a sample cloud.
    EstimateLoja(LojaArgs),
    /// Estimate an error-bound exponent from the distance envelope.
    EstimateErrorbound(ErrorBoundArgs),
    /// First Puiseux exponent of P(eps, y) from its Newton polygon.
    NewtonSlope(PolyArgs),
    /// Gap bound of a sum-of-squares relaxation.
    SosRate(SosArgs),
    /// Sublinear descent rate k^(1 - rho).
    DescentRate(DescentArgs),
}

#[derive(Args, Debug, Default)]
struct PolyArgs {
    /// Polynomial text; repeat for a family.
    #[arg(long = "poly", allow_hyphen_values = true)]
    polys: Vec<String>,
    /// Comma-separated variable names, last one eliminated first.
    #[arg(long)]
    vars: Option<String>,
}

#[derive(Args, Debug)]
struct GrowthArgs {
    #[command(flatten)]
    family: PolyArgs,
    /// Selector formula as JSON.
    #[arg(long)]
    selector: Option<String>,
    #[arg(long)]
    p: Option<u32>,
    #[arg(long, allow_hyphen_values = true)]
    x_min: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    x_max: Option<String>,
    #[arg(long)]
    samples: Option<usize>,
}

#[derive(Args, Debug)]
struct DistArgs {
    /// Finite set as `a,b;c,d`.
    #[arg(long, allow_hyphen_values = true)]
    points: Option<String>,
    /// Query point as `a,b`.
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// Closed subset of the line as a formula in JSON.
    #[arg(long)]
    formula: Option<String>,
    #[arg(long)]
    vars: Option<String>,
}

#[derive(Args, Debug)]
struct ResidualArgs {
    /// Inequality `g <= 0`; repeat for several.
    #[arg(long = "ineq", allow_hyphen_values = true)]
    ineqs: Vec<String>,
    /// Equation `h = 0`; repeat for several.
    #[arg(long = "eq", allow_hyphen_values = true)]
    eqs: Vec<String>,
    #[arg(long, allow_hyphen_values = true)]
    point: Option<String>,
    /// Symmetric matrix as `a,b;c,d`; the inequalities then range over its
    /// entries in row-major order.
    #[arg(long, allow_hyphen_values = true)]
    matrix: Option<String>,
    #[arg(long)]
    vars: Option<String>,
}

#[derive(Args, Debug)]
struct BoundsArgs {
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    r: Option<u32>,
    #[arg(long)]
    s: Option<u32>,
    #[arg(long)]
    d_bar: Option<u32>,
    #[arg(long)]
    r_bar: Option<u32>,
    #[arg(long)]
    p: Option<u32>,
}

#[derive(Args, Debug)]
struct SamplingArgs {
    /// Region membership formula as JSON.
    #[arg(long)]
    formula: Option<String>,
    /// Sampling box as `lo,hi;lo,hi`.
    #[arg(long = "box", allow_hyphen_values = true)]
    bbox: Option<String>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long)]
    vars: Option<String>,
}

#[derive(Args, Debug)]
struct LojaArgs {
    /// Use the built-in exponential-dependence instance.
    #[arg(long)]
    example_paper: bool,
    #[arg(long)]
    d: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    /// f as JSON, e.g. `{"abs_sum": ["y - x^2"]}`.
    #[arg(long)]
    f: Option<String>,
    /// g as JSON.
    #[arg(long)]
    g: Option<String>,
    /// Curve component in `t`; repeat per coordinate.
    #[arg(long = "curve", allow_hyphen_values = true)]
    curve: Vec<String>,
    /// `curve` (default) or `cloud`.
    #[arg(long)]
    estimator: Option<String>,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    decades: Option<u32>,
    #[arg(long)]
    samples_per_decade: Option<u32>,
    #[arg(long)]
    g_ceiling: Option<f64>,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Args, Debug)]
struct ErrorBoundArgs {
    /// Residual function as JSON.
    #[arg(long)]
    psi: Option<String>,
    /// Distance function as JSON.
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
    #[command(flatten)]
    sampling: SamplingArgs,
}

#[derive(Args, Debug)]
struct SosArgs {
    #[arg(long)]
    c: Option<f64>,
    #[arg(long)]
    f_norm: Option<f64>,
    #[arg(long)]
    deg_f: Option<u32>,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    rho: Option<u32>,
    #[arg(long)]
    t: Option<u32>,
}

#[derive(Args, Debug)]
struct DescentArgs {
    #[arg(long)]
    rho: Option<u32>,
    #[arg(long)]
    k: Option<u64>,
}

fn json_arg<T: serde::de::DeserializeOwned>(flag: &str, text: &str) -> Result<T, CliError> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        CliError::Spec(SpecError { pointer: format!("--{flag}{}", e.path()), message: e.inner().to_string() })
    })
}

fn split_vars(text: &str) -> Vec<String> {
    text.split(',').map(|s| s.trim().to_string()).collect()
}

fn set<T>(slot: &mut Option<T>, v: Option<T>) {
    if v.is_some() {
        *slot = v;
    }
}

fn parse_box(text: &str) -> Result<Vec<(f64, f64)>, CliError> {
    split_rows(text)
        .into_iter()
        .map(|row| match row.as_slice() {
            [a, b] => match (a.parse(), b.parse()) {
                (Ok(a), Ok(b)) => Ok((a, b)),
                _ => Err(CliError::Io(format!("--box: bad bounds {a:?}, {b:?}"))),
            },
            _ => Err(CliError::Io("--box: every side needs `lo,hi`".into())),
        })
        .collect()
}

impl PolyArgs {
    fn apply(&self, spec: &mut ProblemSpec) {
        if !self.polys.is_empty() {
            spec.polys = Some(self.polys.clone());
        }
        set(&mut spec.vars, self.vars.as_deref().map(split_vars));
    }
}

impl SamplingArgs {
    fn apply(&self, spec: &mut ProblemSpec) -> Result<(), CliError> {
        if let Some(f) = &self.formula {
            spec.formula = Some(json_arg("formula", f)?);
        }
        if let Some(b) = &self.bbox {
            spec.params.bbox = Some(parse_box(b)?);
        }
        set(&mut spec.params.count, self.count);
        set(&mut spec.vars, self.vars.as_deref().map(split_vars));
        Ok(())
    }
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Parse(_) => "parse",
            Command::Roots(_) => "roots",
            Command::Thom(_) => "thom",
            Command::Signcond1d(_) => "signcond1d",
            Command::Cad2d(_) => "cad2d",
            Command::GrowthCheck(_) => "growth-check",
            Command::Dist(_) => "dist",
            Command::Residual(_) => "residual",
            Command::Bounds(_) => "bounds",
            Command::EstimateLoja(_) => "estimate-loja",
            Command::EstimateErrorbound(_) => "estimate-errorbound",
            Command::NewtonSlope(_) => "newton-slope",
            Command::SosRate(_) => "sos-rate",
            Command::DescentRate(_) => "descent-rate",
        }
    }

    /// Folds the command-line flags into the spec.
    fn apply(&self, spec: &mut ProblemSpec) -> Result<(), CliError> {
        match self {
            Command::Parse(a) | Command::Roots(a) | Command::Thom(a) | Command::Signcond1d(a) | Command::Cad2d(a) => {
                a.apply(spec)
            }
            Command::NewtonSlope(a) => a.apply(spec),
            Command::GrowthCheck(a) => {
                a.family.apply(spec);
                if let Some(s) = &a.selector {
                    spec.formula = Some(json_arg("selector", s)?);
                }
                set(&mut spec.params.p, a.p);
                set(&mut spec.params.x_min, a.x_min.clone());
                set(&mut spec.params.x_max, a.x_max.clone());
                set(&mut spec.params.samples, a.samples);
            }
            Command::Dist(a) => {
                set(&mut spec.points, a.points.as_deref().map(split_rows));
                set(&mut spec.point, a.point.as_deref().map(split_vars));
                if let Some(f) = &a.formula {
                    spec.formula = Some(json_arg("formula", f)?);
                }
                set(&mut spec.vars, a.vars.as_deref().map(split_vars));
            }
            Command::Residual(a) => {
                if !a.ineqs.is_empty() {
                    spec.ineqs = Some(a.ineqs.clone());
                }
                if !a.eqs.is_empty() {
                    spec.eqs = Some(a.eqs.clone());
                }
                set(&mut spec.point, a.point.as_deref().map(split_vars));
                set(&mut spec.matrix, a.matrix.as_deref().map(split_rows));
                set(&mut spec.vars, a.vars.as_deref().map(split_vars));
            }
            Command::Bounds(a) => {
                let p = &mut spec.params;
                set(&mut p.d, a.d);
                set(&mut p.n, a.n);
                set(&mut p.r, a.r);
                set(&mut p.s, a.s);
                set(&mut p.d_bar, a.d_bar);
                set(&mut p.r_bar, a.r_bar);
                set(&mut p.p, a.p);
            }
            Command::EstimateLoja(a) => {
                if a.example_paper {
                    spec.example_paper = Some(true);
                }
                if let Some(f) = &a.f {
                    spec.f = Some(json_arg::<FnSpec>("f", f)?);
                }
                if let Some(g) = &a.g {
                    spec.g = Some(json_arg::<FnSpec>("g", g)?);
                }
                if !a.curve.is_empty() {
                    spec.curve = Some(a.curve.clone());
                }
                let p = &mut spec.params;
                set(&mut p.d, a.d);
                set(&mut p.n, a.n);
                set(&mut p.estimator, a.estimator.clone());
                set(&mut p.t_max, a.t_max);
                set(&mut p.decades, a.decades);
                set(&mut p.samples_per_decade, a.samples_per_decade);
                set(&mut p.g_ceiling, a.g_ceiling);
                a.sampling.apply(spec)?;
            }
            Command::EstimateErrorbound(a) => {
                if let Some(f) = &a.psi {
                    spec.f = Some(json_arg::<FnSpec>("psi", f)?);
                }
                if let Some(g) = &a.dist {
                    spec.g = Some(json_arg::<FnSpec>("dist", g)?);
                }
                set(&mut spec.params.bins, a.bins);
                a.sampling.apply(spec)?;
            }
            Command::SosRate(a) => {
                let p = &mut spec.params;
                set(&mut p.c, a.c);
                set(&mut p.f_norm, a.f_norm);
                set(&mut p.deg_f, a.deg_f);
                set(&mut p.n, a.n);
                set(&mut p.rho, a.rho);
                set(&mut p.t, a.t);
            }
            Command::DescentRate(a) => {
                set(&mut spec.params.rho, a.rho);
                set(&mut spec.params.k, a.k);
            }
        }
        Ok(())
    }
}

fn write_file(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run(cli: &Cli) -> Result<(), CliError> {
    let mut spec = match &cli.problem {
        Some(path) => ProblemSpec::load(path)?,
        None => ProblemSpec::default(),
    };
    cli.command.apply(&mut spec)?;
    set(&mut spec.params.seed, cli.seed);
    if cli.dump_spec {
        let text = spec.to_json() + "\n";
        return match &cli.out {
            Some(p) => write_file(p, &text),
            None => {
                print!("{text}");
                Ok(())
            }
        };
    }
    let out = commands::run(cli.command.name(), &spec)?;
    let mut report = serde_json::Map::new();
    report.insert("command".into(), cli.command.name().into());
    report.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    report.insert("result".into(), out.json);
    let text = serde_json::to_string_pretty(&serde_json::Value::Object(report)).expect("report serializes") + "\n";
    match &cli.out {
        Some(p) => write_file(p, &text)?,
        None => print!("{text}"),
    }
    if let Some(table) = out.table {
        eprint!("{table}");
    }
    match (&cli.csv, out.csv) {
        (Some(p), Some(csv)) => write_file(p, &csv)?,
        (Some(_), None) => eprintln!("note: {} produces no CSV data", cli.command.name()),
        _ => {}
    }
    Ok(())
}

fn configure_threads() {
    if let Some(n) = std::env::var("SEMIALG_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    configure_threads();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

//! The `srsphere` command line.
//!
//! Every document starts with a header carrying [`TOOLKIT_VERSION`] and the
//! fully resolved [`RunConfig`]; CSV files put it in `#` comment lines.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::poly::{rational_to_f64, Rational};
use crate::frames::contact_vertical;
use crate::geodesics::{is_closed_contact, ContactClosedness, GeodesicSpec, Space, Trace, FD_STEP};
use crate::htype::{integrate_geodesic, HTypePoint, HTypeState};
use crate::linalg::{dist, linspace};
use crate::report::{render_table, Check};
use crate::shooting::{solve, ShootingConfig, ShootingProblem};
use crate::subelliptic::{heat_factorization, spectrum, SubSpace, HEAT_TOL};
use crate::{frames, geodesics, htype, subelliptic, TOOLKIT_VERSION};

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "SRSPHERE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "srsphere", version, about = "Sub-Riemannian geodesics, certificates and spectra on odd spheres")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample a closed-form geodesic with horizontality diagnostics
    Trace(TraceArgs),
    /// Solve the two-point problem by multistart shooting
    Shoot(ShootArgs),
    /// Integrate an H-type geodesic and compare with the closed form
    Htype(HtypeArgs),
    /// Per-degree sub-Laplacian spectra on the quotient spaces
    Spectrum(SpectrumArgs),
    /// Heat factorization discrepancies on S^7
    Heat(HeatArgs),
    /// Run a certificate suite and print a pass/fail table
    Verify(VerifyArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SpaceTag {
    S2n1,
    S4n3,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum SubSpaceTag {
    S3,
    S7,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
enum Module {
    Frames,
    Geodesics,
    Htype,
    Subelliptic,
    All,
}

#[derive(Debug, Args)]
struct Common {
    /// Write to this file instead of standard output
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct TraceArgs {
    #[arg(long, value_enum)]
    space: SpaceTag,
    #[arg(long)]
    n: usize,
    /// Base point, comma separated; entries may be `a/b`
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    v: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    t0: f64,
    #[arg(long, allow_hyphen_values = true)]
    t1: f64,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, value_enum, default_value = "json")]
    out: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ShootArgs {
    #[arg(long, value_enum)]
    space: SpaceTag,
    #[arg(long)]
    n: usize,
    #[arg(long, allow_hyphen_values = true)]
    p: String,
    #[arg(long, allow_hyphen_values = true)]
    q: String,
    #[arg(long = "T")]
    horizon: f64,
    #[arg(long, default_value_t = 64)]
    starts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    max_iters: usize,
    #[arg(long, value_enum, default_value = "json")]
    out: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct HtypeArgs {
    /// `lI,lJ,lK`
    #[arg(long, allow_hyphen_values = true)]
    lambda: String,
    /// Initial horizontal velocity `u1,u2,u3,u4`
    #[arg(long, allow_hyphen_values = true)]
    u0: String,
    #[arg(long = "T")]
    horizon: f64,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long, value_enum, default_value = "json")]
    out: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SpectrumArgs {
    #[arg(long, value_enum, default_value = "s7")]
    space: SubSpaceTag,
    #[arg(long, default_value_t = 2)]
    degree: u32,
    #[arg(long, value_enum, default_value = "json")]
    out: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct HeatArgs {
    #[arg(long)]
    t: f64,
    #[arg(long, default_value_t = 3)]
    degree: u32,
    #[arg(long, value_enum, default_value = "json")]
    out: Format,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long, value_enum, default_value = "all")]
    module: Module,
    #[arg(long, value_enum, default_value = "text")]
    out: Format,
    #[command(flatten)]
    common: Common,
}

/// Resolved configuration echoed in every output header.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub space: Option<String>,
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub tolerances: BTreeMap<String, f64>,
    pub format: Format,
    pub output: Option<String>,
    pub parameters: Value,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    /// Rendered report and the `location: identity` of every failing check.
    Verification { body: String, failed: Vec<String> },
}

impl From<crate::Error> for Failure {
    fn from(e: crate::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn usage<T>(msg: impl Into<String>) -> std::result::Result<T, Failure> {
    Err(Failure::Usage(msg.into()))
}

/// A decimal, `a/b`, or float literal; the exact value is kept when there is one.
fn parse_scalar(s: &str) -> std::result::Result<(f64, Option<Rational>), Failure> {
    let s = s.trim();
    if let Some((a, b)) = s.split_once('/') {
        let (n, d) = (a.trim().parse::<BigInt>(), b.trim().parse::<BigInt>());
        return match (n, d) {
            (Ok(n), Ok(d)) if !d.is_zero() => {
                let q = Rational::new(n, d);
                Ok((rational_to_f64(&q), Some(q)))
            }
            _ => usage(format!("bad rational '{s}'")),
        };
    }
    let x: f64 = s.parse().map_err(|_| Failure::Usage(format!("bad number '{s}'")))?;
    if !x.is_finite() {
        return usage(format!("non-finite number '{s}'"));
    }
    let exact = (!s.contains(['e', 'E'])).then(|| {
        let (neg, body) = s.strip_prefix('-').map_or((false, s.trim_start_matches('+')), |b| (true, b));
        let (int_part, frac) = body.split_once('.').unwrap_or((body, ""));
        let digits = format!("{int_part}{frac}");
        let n: BigInt = digits.parse().ok()?;
        let q = Rational::new(if neg { -n } else { n }, num_traits::pow(BigInt::from(10), frac.len()));
        Some(q)
    });
    Ok((x, exact.flatten()))
}

fn parse_vector(s: &str) -> std::result::Result<(Vec<f64>, Option<Vec<Rational>>), Failure> {
    let parts: Vec<_> = s.split(',').map(parse_scalar).collect::<std::result::Result<_, _>>()?;
    let exact = parts.iter().map(|(_, q)| q.clone()).collect::<Option<Vec<_>>>();
    Ok((parts.into_iter().map(|(x, _)| x).collect(), exact))
}

fn parse_array<const N: usize>(s: &str, name: &str) -> std::result::Result<[f64; N], Failure> {
    let (v, _) = parse_vector(s)?;
    v.try_into().or_else(|v: Vec<f64>| usage(format!("--{name} needs {N} components, got {}", v.len())))
}

fn space_of(tag: SpaceTag, n: usize) -> std::result::Result<Space, Failure> {
    match tag {
        SpaceTag::S2n1 if n >= 1 => Ok(Space::Contact { n }),
        SpaceTag::S4n3 => Ok(Space::Quaternionic { n }),
        SpaceTag::S2n1 => usage("s2n1 needs --n >= 1"),
    }
}

fn header(config: &RunConfig) -> Value {
    json!({ "toolkit": TOOLKIT_VERSION, "config": config })
}

fn csv_header(config: &RunConfig) -> String {
    format!("# toolkit: {TOOLKIT_VERSION}\n# config: {}\n", serde_json::to_string(config).expect("config serializes"))
}

fn csv_float(x: f64) -> String {
    format!("{x:.16e}")
}

fn to_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("value serializes");
    s.push('\n');
    s
}

/// Exact `λ = <v, V(p)>` and its closedness verdict when the inputs are rational and arc-length.
fn exact_contact_closedness(n: usize, p: &[Rational], v: &[Rational]) -> Option<(Rational, ContactClosedness)> {
    let field = contact_vertical(n);
    let vp: Vec<Rational> = field.coefficients().iter().map(|c| c.eval_rational(p)).collect();
    let lambda: Rational = v.iter().zip(&vp).map(|(a, b)| a * b).sum();
    let p2: Rational = p.iter().map(|a| a * a).sum();
    let v2: Rational = v.iter().map(|a| a * a).sum();
    let pv: Rational = p.iter().zip(v).map(|(a, b)| a * b).sum();
    let arc = v2 == Rational::one() + &lambda * &lambda;
    (p2.is_one() && pv.is_zero() && arc).then(|| {
        let c = is_closed_contact(&lambda);
        (lambda, c)
    })
}

fn run_trace(a: &TraceArgs) -> std::result::Result<String, Failure> {
    let space = space_of(a.space, a.n)?;
    let (p, pq) = parse_vector(&a.p)?;
    let (v, vq) = parse_vector(&a.v)?;
    if a.samples < 2 {
        return usage("--samples must be at least 2");
    }
    if !(a.t0.is_finite() && a.t1.is_finite()) {
        return usage("--t0 and --t1 must be finite");
    }
    let spec = GeodesicSpec::new(space, p.clone(), v.clone())?;
    let times = linspace(a.t0, a.t1, a.samples);
    let trace = Trace::generate(&spec, &times);
    let exact = match (space, pq, vq) {
        (Space::Contact { n }, Some(pq), Some(vq)) => exact_contact_closedness(n, &pq, &vq),
        _ => None,
    };
    let config = RunConfig {
        subcommand: "trace".into(),
        space: Some(space.tag().into()),
        n: Some(a.n),
        seed: None,
        tolerances: BTreeMap::from([("fd_step".into(), FD_STEP)]),
        format: a.out,
        output: a.common.output.as_ref().map(|p| p.display().to_string()),
        parameters: json!({ "p": p, "v": v, "t0": a.t0, "t1": a.t1, "samples": a.samples }),
    };
    let k = space.vertical_rank();
    match a.out {
        Format::Csv => {
            let mut s = csv_header(&config);
            let mut cols = vec!["t".to_string()];
            cols.extend((0..space.ambient_dim()).map(|i| format!("x{i}")));
            cols.push("speed".into());
            cols.extend((1..=k).map(|i| format!("horiz_residual_{i}")));
            s.push_str(&cols.join(","));
            s.push('\n');
            for i in 0..times.len() {
                let mut row = vec![csv_float(times[i])];
                row.extend(trace.points[i].iter().map(|x| csv_float(*x)));
                row.push(csv_float(trace.speed[i]));
                row.extend(trace.horizontality[i].iter().map(|x| csv_float(*x)));
                writeln!(s, "{}", row.join(",")).expect("string write");
            }
            Ok(s)
        }
        Format::Json => {
            let last = trace.points.last().expect("two samples");
            let doc = json!({
                "header": header(&config),
                "spec": spec,
                "moments": spec.moments,
                "exact_lambda": exact.as_ref().map(|(l, _)| l.to_string()),
                "closedness": exact.as_ref().map(|(_, c)| c),
                "endpoint_distance": dist(last, &spec.p),
                "max_horizontality": trace.max_horizontality(),
                "max_pythagoras_defect": trace.max_pythagoras_defect(),
                "t": trace.times,
                "points": trace.points,
                "speed": trace.speed,
                "horizontality": trace.horizontality,
            });
            Ok(to_json(&doc))
        }
        Format::Text => usage("trace writes csv or json"),
    }
}

fn run_shoot(a: &ShootArgs) -> std::result::Result<String, Failure> {
    if a.out != Format::Json {
        return usage("shoot writes json");
    }
    let space = space_of(a.space, a.n)?;
    let (p, _) = parse_vector(&a.p)?;
    let (q, _) = parse_vector(&a.q)?;
    let problem = ShootingProblem::new(space, p.clone(), q.clone(), a.horizon)?;
    let cfg = ShootingConfig { max_iters: a.max_iters, n_starts: a.starts, seed: a.seed, ..ShootingConfig::default() };
    let sols = solve(&problem, &cfg);
    let config = RunConfig {
        subcommand: "shoot".into(),
        space: Some(space.tag().into()),
        n: Some(a.n),
        seed: Some(a.seed),
        tolerances: BTreeMap::from([("residual".into(), cfg.tol), ("jacobian_step".into(), crate::shooting::JACOBIAN_STEP)]),
        format: a.out,
        output: a.common.output.as_ref().map(|p| p.display().to_string()),
        parameters: json!({ "p": p, "q": q, "T": a.horizon, "starts": a.starts, "max_iters": a.max_iters }),
    };
    let solutions: Vec<Value> = sols
        .iter()
        .map(|s| json!({ "v": s.spec.v, "moments": s.spec.moments, "residual": s.residual, "length": s.length, "start": s.start }))
        .collect();
    Ok(to_json(&json!({ "header": header(&config), "solutions": solutions })))
}

fn run_htype(a: &HtypeArgs) -> std::result::Result<String, Failure> {
    let lambda = parse_array::<3>(&a.lambda, "lambda")?;
    let u = parse_array::<4>(&a.u0, "u0")?;
    if !(a.horizon > 0.0 && a.step > 0.0 && a.step.is_finite() && a.horizon.is_finite()) {
        return usage("--T and --step must be positive");
    }
    let state = HTypeState { point: HTypePoint::identity(), u, lambda };
    let run = integrate_geodesic(&state, a.horizon, a.step)?;
    let tr = &run.rk4;
    let config = RunConfig {
        subcommand: "htype".into(),
        space: Some("H1".into()),
        n: None,
        seed: None,
        tolerances: BTreeMap::from([("step".into(), a.step)]),
        format: a.out,
        output: a.common.output.as_ref().map(|p| p.display().to_string()),
        parameters: json!({ "lambda": lambda, "u0": u, "T": a.horizon }),
    };
    let speed: Vec<f64> = (0..tr.len()).map(|i| tr.speed(i)).collect();
    match a.out {
        Format::Csv => {
            let mut s = csv_header(&config);
            s.push_str("t,x1,x2,x3,x4,zI,zJ,zK,u1,u2,u3,u4,speed\n");
            for i in 0..tr.len() {
                let mut row = vec![csv_float(tr.times[i])];
                row.extend(tr.x[i].iter().chain(&tr.z[i]).chain(&tr.u[i]).map(|x| csv_float(*x)));
                row.push(csv_float(speed[i]));
                writeln!(s, "{}", row.join(",")).expect("string write");
            }
            Ok(s)
        }
        Format::Json => Ok(to_json(&json!({
            "header": header(&config),
            "state": state,
            "max_discrepancy": run.max_discrepancy,
            "t": tr.times,
            "x": tr.x,
            "z": tr.z,
            "u": tr.u,
            "speed": speed,
        }))),
        Format::Text => usage("htype writes csv or json"),
    }
}

fn run_spectrum(a: &SpectrumArgs) -> std::result::Result<String, Failure> {
    if a.out != Format::Json {
        return usage("spectrum writes json");
    }
    let space = match a.space {
        SubSpaceTag::S3 => SubSpace::S3,
        SubSpaceTag::S7 => SubSpace::S7,
    };
    let report = spectrum(space, a.degree)?;
    let config = RunConfig {
        subcommand: "spectrum".into(),
        space: Some(serde_json::to_value(space).expect("tag").as_str().unwrap_or_default().into()),
        n: None,
        seed: None,
        tolerances: BTreeMap::new(),
        format: a.out,
        output: a.common.output.as_ref().map(|p| p.display().to_string()),
        parameters: json!({ "degree": a.degree }),
    };
    Ok(to_json(&json!({ "header": header(&config), "report": report })))
}

fn run_heat(a: &HeatArgs) -> std::result::Result<String, Failure> {
    if a.out != Format::Json {
        return usage("heat writes json");
    }
    let report = heat_factorization(a.t, a.degree)?;
    let config = RunConfig {
        subcommand: "heat".into(),
        space: Some("s7".into()),
        n: None,
        seed: None,
        tolerances: BTreeMap::from([("discrepancy".into(), HEAT_TOL)]),
        format: a.out,
        output: a.common.output.as_ref().map(|p| p.display().to_string()),
        parameters: json!({ "t": a.t, "degree": a.degree }),
    };
    let within = report.split_discrepancy <= HEAT_TOL && report.laplace_beltrami_discrepancy <= HEAT_TOL;
    Ok(to_json(&json!({ "header": header(&config), "report": report, "within_tolerance": within })))
}

/// Checks of one certificate suite.
pub fn suite(module: &str) -> Option<Vec<Check>> {
    Some(match module {
        "frames" => frames::checks(),
        "geodesics" => geodesics::checks(),
        "htype" => htype::checks(),
        "subelliptic" => subelliptic::certificate_suite(),
        "all" => ["frames", "geodesics", "htype", "subelliptic"].iter().flat_map(|m| suite(m).unwrap_or_default()).collect(),
        _ => return None,
    })
}

fn run_verify(a: &VerifyArgs) -> std::result::Result<(String, Vec<Check>), Failure> {
    let name = serde_json::to_value(a.module).expect("tag").as_str().unwrap_or_default().to_string();
    let checks = suite(&name).unwrap_or_default();
    let config = RunConfig {
        subcommand: "verify".into(),
        space: None,
        n: None,
        seed: None,
        tolerances: BTreeMap::new(),
        format: a.out,
        output: a.common.output.as_ref().map(|p| p.display().to_string()),
        parameters: json!({ "module": name }),
    };
    let body = match a.out {
        Format::Json => {
            let passed = checks.iter().all(|c| c.status.passed());
            to_json(&json!({ "header": header(&config), "passed": passed, "checks": checks }))
        }
        Format::Text => {
            let mut s = format!("# toolkit: {TOOLKIT_VERSION}\n");
            s.push_str(&render_table(&checks));
            s
        }
        Format::Csv => return usage("verify writes text or json"),
    };
    Ok((body, checks))
}

fn thread_cap() -> std::result::Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => usage(format!("{THREADS_ENV} must be a positive integer, got '{s}'")),
        },
    }
}

fn dispatch(cli: &Cli) -> std::result::Result<(String, Option<&PathBuf>), Failure> {
    let (body, path) = match &cli.command {
        Command::Trace(a) => (run_trace(a)?, a.common.output.as_ref()),
        Command::Shoot(a) => (run_shoot(a)?, a.common.output.as_ref()),
        Command::Htype(a) => (run_htype(a)?, a.common.output.as_ref()),
        Command::Spectrum(a) => (run_spectrum(a)?, a.common.output.as_ref()),
        Command::Heat(a) => (run_heat(a)?, a.common.output.as_ref()),
        Command::Verify(a) => {
            let (body, checks) = run_verify(a)?;
            let failed: Vec<String> =
                checks.iter().filter(|c| !c.status.passed()).map(|c| format!("{}: {}", c.location, c.identity)).collect();
            if !failed.is_empty() {
                return Err(Failure::Verification { body, failed });
            }
            (body, a.common.output.as_ref())
        }
    };
    Ok((body, path))
}

fn emit(body: &str, path: Option<&PathBuf>, out: &mut dyn Write) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, body).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => out.write_all(body.as_bytes()).map_err(|e| Failure::Usage(format!("cannot write output: {e}"))),
    }
}

/// Runs the command line with explicit sinks and returns the exit code.
pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = thread_cap().and_then(|cap| match cap {
        Some(n) => match rayon::ThreadPoolBuilder::new().num_threads(n).build() {
            Ok(pool) => pool.install(|| dispatch(&cli)),
            Err(e) => usage(format!("cannot start thread pool: {e}")),
        },
        None => dispatch(&cli),
    });
    let outcome = result.and_then(|(body, path)| emit(&body, path, out));
    match outcome {
        Ok(()) => 0,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}\n\nRun with --help for usage.");
            2
        }
        Err(Failure::Verification { body, failed }) => {
            let path = match &cli.command {
                Command::Verify(a) => a.common.output.as_ref(),
                _ => None,
            };
            if let Err(Failure::Usage(msg)) = emit(&body, path, out) {
                let _ = writeln!(err, "error: {msg}");
            }
            for line in failed {
                let _ = writeln!(err, "verification failed at {line}");
            }
            1
        }
    }
}

/// Runs the command line against the process streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(argv, &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn capture(args: &[&str]) -> (i32, String, String) {
        let (mut o, mut e) = (Vec::new(), Vec::new());
        let mut argv = vec!["srsphere"];
        argv.extend_from_slice(args);
        let code = run_with(argv, &mut o, &mut e);
        (code, String::from_utf8(o).unwrap(), String::from_utf8(e).unwrap())
    }

    #[test]
    fn scalars_keep_exact_values() {
        assert_eq!(parse_scalar("3/4").unwrap().1, Some(Rational::new(3.into(), 4.into())));
        assert_eq!(parse_scalar("0.75").unwrap().1, Some(Rational::new(3.into(), 4.into())));
        assert_eq!(parse_scalar("-1.5").unwrap().1, Some(Rational::new((-3).into(), 2.into())));
        assert_eq!(parse_scalar("1e-3").unwrap(), (1e-3, None));
        assert!(parse_scalar("1/0").is_err());
        assert!(parse_scalar("abc").is_err());
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, err) = capture(&["trace", "--bogus"]);
        assert_eq!(code, 2);
        assert!(err.contains("Usage"));
        assert_eq!(capture(&["frobnicate"]).0, 2);
        assert_eq!(capture(&["trace", "--space", "s2n1", "--n", "1", "--p", "1,0,0", "--v", "0,1,0", "--t1", "1"]).0, 2);
        assert_eq!(capture(&["heat", "--t", "-1"]).0, 2);
        assert_eq!(capture(&["--help"]).0, 0);
    }

    #[test]
    fn trace_reports_exact_closedness() {
        let (code, out, _) = capture(&[
            "trace", "--space", "s2n1", "--n", "1", "--p", "1,0,0,0", "--v", "0,3/4,1,0", "--t1", "12.566370614", "--samples", "50",
        ]);
        assert_eq!(code, 0);
        let doc: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["closedness"]["k"], 5);
        assert_eq!(doc["header"]["toolkit"], TOOLKIT_VERSION);
        assert!(doc["endpoint_distance"].as_f64().unwrap() < 1e-8);
    }

    #[test]
    fn csv_layout() {
        let (code, out, _) = capture(&["htype", "--lambda", "1,0,-0.5", "--u0", "1,0,0,0", "--T", "0.1", "--step", "0.05", "--out", "csv"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert!(lines[0].starts_with("# toolkit"));
        assert_eq!(lines[2], "t,x1,x2,x3,x4,zI,zJ,zK,u1,u2,u3,u4,speed");
        assert_eq!(lines.len(), 3 + 3);
        let first: f64 = lines[3].split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(first, 0.0);
    }
}

//! The `backbone` command line.
//!
//! A config file (`--config path`) holds `key=value` lines using the flag
//! names; its keys are applied first and any flag given on the command line
//! wins. Exit codes: 0 success, 2 invalid configuration or input, 3 a
//! verification row outside tolerance, 4 numerical non-convergence.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::arms::ArmEvent;
use crate::error::Error;
use crate::exponent::{exponent_table, kappa_from_q, solve_xi, KappaParams};
use crate::mc_estimator::{
    annulus_radii, direct_radii, estimate_exponent, quasi_mult_check, read_csv, write_csv, ArmTrialBatch, BatchRow,
    TrialPlan, DEFAULT_SAMPLES, DEFAULT_Z,
};
use crate::moment::moment_f;
use crate::numtheory::{classify_two_cos, cyclotomic, min_poly_two_cos, small_poly_scan, totient, TwoCosClass};
use crate::verify::{run_suite, Suite};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;
pub const EXIT_NONCONVERGENCE: i32 = 4;

/// Environment variable that overrides `--workers`.
pub const THREADS_ENV: &str = "BACKBONE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "backbone", version, about = "Percolation backbone exponent: exact solution, checks and simulation")]
struct Cli {
    /// key=value file with defaults for the subcommand's flags.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args, Serialize)]
struct Output {
    /// Write to this file instead of standard output.
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Debug, Args, Serialize)]
struct KappaArgs {
    #[arg(long)]
    kappa: Option<f64>,
    /// Cluster weight q ∈ [1, 4); sets κ.
    #[arg(long)]
    q: Option<f64>,
    /// Liouville γ ∈ (√2, 2); sets κ = 16/γ².
    #[arg(long)]
    gamma: Option<f64>,
}

impl KappaArgs {
    fn resolve(&self) -> Result<f64, Error> {
        match (self.kappa, self.q, self.gamma) {
            (Some(k), None, None) => Ok(k),
            (None, Some(q), None) => kappa_from_q(q),
            (None, None, Some(g)) => Ok(KappaParams::from_gamma(g)?.kappa),
            (None, None, None) => Err(Error::Domain("one of --kappa, --q, --gamma is required".into())),
            _ => Err(Error::Domain("give only one of --kappa, --q, --gamma".into())),
        }
    }
}

#[derive(Debug, Subcommand, Serialize)]
#[command(args_override_self = true)]
#[serde(rename_all = "lowercase")]
enum Command {
    /// Backbone-type exponent ξ(κ) from the transcendental equation.
    Exact {
        #[command(flatten)]
        kappa: KappaArgs,
        #[command(flatten)]
        out: Output,
    },
    /// ξ for the standard cluster weights q.
    Table {
        #[command(flatten)]
        out: Output,
    },
    /// Moment formula F(λ) at a given κ.
    Moment {
        #[command(flatten)]
        kappa: KappaArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<f64>,
        /// Imaginary part of λ.
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        lambda_im: f64,
        /// Give θ instead of λ, with θ² = (κ/4−1)² − κλ/2.
        #[arg(long, allow_hyphen_values = true)]
        theta: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Run a verification suite; exit 3 if any row fails.
    Verify {
        #[arg(long)]
        suite: Suite,
        /// Tolerance replacing each row's own.
        #[arg(long)]
        tol: Option<f64>,
        #[command(flatten)]
        out: Output,
    },
    /// Monte Carlo arm probabilities at p = 1/2.
    Simulate {
        #[arg(long, default_value = "backbone")]
        event: ArmEvent,
        /// Outer radii, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = crate::mc_estimator::DEFAULT_RADII)]
        radii: Vec<u32>,
        /// Inner radius; 0 measures arms from the origin.
        #[arg(long, default_value_t = 0)]
        inner_radius: u32,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Worker threads; 0 uses every core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
        #[command(flatten)]
        out: Output,
    },
    /// Exponent fits (and quasi-multiplicativity checks) from simulation CSV.
    Estimate {
        #[arg(long, value_name = "CSV")]
        input: PathBuf,
        #[command(flatten)]
        out: Output,
    },
    /// Cyclotomic data, 2cos(2πk/n) classification, small-polynomial scan.
    Numtheory {
        #[arg(long)]
        n: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        k: Option<i64>,
        /// Number to scan for a small integer polynomial.
        #[arg(long, allow_hyphen_values = true)]
        x: Option<f64>,
        #[arg(long, default_value_t = 4)]
        degree: usize,
        #[arg(long, default_value_t = 30)]
        height: i64,
        #[command(flatten)]
        out: Output,
    },
}

impl Command {
    fn output(&self) -> &Output {
        match self {
            Command::Exact { out, .. }
            | Command::Table { out }
            | Command::Moment { out, .. }
            | Command::Verify { out, .. }
            | Command::Simulate { out, .. }
            | Command::Estimate { out, .. }
            | Command::Numtheory { out, .. } => out,
        }
    }

    fn seed(&self) -> Option<u64> {
        match self {
            Command::Simulate { seed, .. } => Some(*seed),
            _ => None,
        }
    }
}

/// What went wrong, and the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NonConvergence { .. } | Error::RootNotFound(_) | Error::Numerical(_) => EXIT_NONCONVERGENCE,
            _ => EXIT_CONFIG,
        };
        Failure { code, message: e.to_string() }
    }
}

fn config_failure(message: impl Into<String>) -> Failure {
    Failure { code: EXIT_CONFIG, message: message.into() }
}

/// Flags from a key=value file, as command-line tokens. A `command` key names
/// the subcommand when the command line does not.
fn config_tokens(text: &str) -> Result<(Option<String>, Vec<String>), Failure> {
    let mut command = None;
    let mut tokens = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(config_failure(format!("config line {}: expected key=value, got '{line}'", i + 1)));
        };
        let (key, value) = (key.trim().replace('_', "-"), value.trim());
        if key == "command" {
            command = Some(value.to_string());
        } else if key == "config" {
            return Err(config_failure("config: nested 'config' key"));
        } else {
            tokens.push(format!("--{key}={value}"));
        }
    }
    Ok((command, tokens))
}

const SUBCOMMANDS: [&str; 7] = ["exact", "table", "moment", "verify", "simulate", "estimate", "numtheory"];

/// Splits `--config` out of argv and returns the argv clap should see.
fn merged_args(args: Vec<OsString>) -> Result<Vec<OsString>, Failure> {
    let mut rest = Vec::with_capacity(args.len());
    let mut path = None;
    let mut it = args.into_iter();
    if let Some(prog) = it.next() {
        rest.push(prog);
    }
    while let Some(a) = it.next() {
        let s = a.to_string_lossy();
        if s == "--config" {
            path = Some(it.next().ok_or_else(|| config_failure("--config needs a path"))?);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(OsString::from(p));
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| config_failure(format!("config {}: {e}", path.to_string_lossy())))?;
    let (command, tokens) = config_tokens(&text)?;

    let sub = rest.iter().position(|a| SUBCOMMANDS.contains(&a.to_string_lossy().as_ref()));
    let mut out: Vec<OsString> = Vec::new();
    match sub {
        Some(i) => {
            out.extend(rest[..=i].iter().cloned());
            out.extend(tokens.into_iter().map(OsString::from));
            out.extend(rest[i + 1..].iter().cloned());
        }
        None => {
            let command = command.ok_or_else(|| config_failure("no subcommand given and config has no 'command' key"))?;
            out.push(rest[0].clone());
            out.push(command.into());
            out.extend(tokens.into_iter().map(OsString::from));
            out.extend(rest[1..].iter().cloned());
        }
    }
    Ok(out)
}

fn workers_override(workers: usize) -> Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| config_failure(format!("{THREADS_ENV}: not a thread count: '{v}'"))),
        Err(_) => Ok(workers),
    }
}

struct Provenance {
    version: &'static str,
    seed: Option<u64>,
    config_sha256: String,
}

impl Provenance {
    fn of(cmd: &Command) -> Self {
        let canonical = serde_json::to_string(cmd).expect("command serializes");
        let digest = Sha256::digest(canonical.as_bytes());
        Provenance {
            version: env!("CARGO_PKG_VERSION"),
            seed: cmd.seed(),
            config_sha256: digest.iter().map(|b| format!("{b:02x}")).collect(),
        }
    }

    fn json(&self) -> Value {
        json!({ "version": self.version, "seed": self.seed, "config_sha256": self.config_sha256 })
    }

    fn csv_comment(&self) -> String {
        let seed = self.seed.map(|s| s.to_string()).unwrap_or_else(|| "none".into());
        format!("# backbone {} seed={seed} config_sha256={}\n", self.version, self.config_sha256)
    }
}

enum Payload {
    Json(Value),
    /// CSV body without the provenance line.
    Csv(Vec<u8>),
}

fn rows_csv<T: Serialize>(rows: &[T]) -> Result<Vec<u8>, Failure> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| Failure::from(Error::Io(e.to_string())))?;
    }
    w.into_inner().map_err(|e| Failure::from(Error::Io(e.to_string())))
}

fn exponent_json(kappa: f64) -> Result<Value, Failure> {
    let s = solve_xi(kappa)?;
    Ok(json!({
        "kappa": s.kappa,
        "xi": s.xi,
        "rho": s.rho,
        "residual": s.residual,
        "degenerate": s.degenerate,
    }))
}

fn execute(cmd: &Command, err: &mut dyn Write) -> Result<(Payload, i32), Failure> {
    let format = cmd.output().format;
    let as_csv = format == Some(Format::Csv);
    match cmd {
        Command::Exact { kappa, .. } => {
            let v = exponent_json(kappa.resolve()?)?;
            if as_csv {
                let v = &v;
                let body = format!("kappa,xi,rho,residual,degenerate\n{},{},{},{},{}\n", v["kappa"], v["xi"], v["rho"], v["residual"], v["degenerate"]);
                return Ok((Payload::Csv(body.into_bytes()), EXIT_OK));
            }
            Ok((Payload::Json(v), EXIT_OK))
        }
        Command::Table { .. } => {
            let rows = exponent_table();
            if as_csv {
                return Ok((Payload::Csv(rows_csv(&rows)?), EXIT_OK));
            }
            Ok((Payload::Json(json!({ "rows": rows })), EXIT_OK))
        }
        Command::Moment { kappa, lambda, lambda_im, theta, .. } => {
            let params = KappaParams::new(kappa.resolve()?)?;
            let k = params.kappa;
            let lam = match (lambda, theta) {
                (Some(l), None) => Complex64::new(*l, *lambda_im),
                (None, Some(t)) => Complex64::new(((k / 4.0 - 1.0).powi(2) - t * t) * 2.0 / k, *lambda_im),
                _ => return Err(config_failure("give exactly one of --lambda, --theta")),
            };
            let m = moment_f(&params, lam)?;
            let v = json!({
                "kappa": k,
                "lambda": [m.lambda.re, m.lambda.im],
                "value": [m.value.re, m.value.im],
            });
            if as_csv {
                let body = format!("kappa,lambda_re,lambda_im,value_re,value_im\n{k},{},{},{},{}\n", m.lambda.re, m.lambda.im, m.value.re, m.value.im);
                return Ok((Payload::Csv(body.into_bytes()), EXIT_OK));
            }
            Ok((Payload::Json(v), EXIT_OK))
        }
        Command::Verify { suite, tol, .. } => {
            if let Some(t) = tol {
                if t.is_nan() || *t <= 0.0 {
                    return Err(config_failure(format!("--tol must be positive, got {t}")));
                }
            }
            let rows = run_suite(*suite, *tol)?;
            let failed = rows.iter().filter(|r| !r.pass).count();
            for r in rows.iter().filter(|r| !r.pass) {
                let _ = writeln!(err, "FAIL {} [{}]: error {:e} >= tol {:e}", r.name, r.params, r.error, r.tol);
            }
            let code = if failed == 0 { EXIT_OK } else { EXIT_VERIFY };
            if as_csv {
                return Ok((Payload::Csv(rows_csv(&rows)?), code));
            }
            Ok((Payload::Json(json!({ "suite": suite, "passed": rows.len() - failed, "failed": failed, "rows": rows })), code))
        }
        Command::Simulate { event, radii, inner_radius, samples, seed, workers, p, .. } => {
            let pairs = if *inner_radius == 0 { direct_radii(radii) } else { annulus_radii(*inner_radius, radii) };
            if pairs.len() != radii.len() {
                return Err(config_failure(format!("--radii must all be at least --inner-radius + 2 = {}", inner_radius + 2)));
            }
            let batches = TrialPlan::new(*event, pairs, *samples, *seed).workers(workers_override(*workers)?).p(*p).run()?;
            if format == Some(Format::Json) {
                let rows: Vec<BatchRow> = batches.iter().map(|b| BatchRow::from_batch(b, DEFAULT_Z)).collect();
                return Ok((Payload::Json(json!({ "batches": batches, "rows": rows })), EXIT_OK));
            }
            let mut body = Vec::new();
            write_csv(&mut body, &batches, DEFAULT_Z)?;
            Ok((Payload::Csv(body), EXIT_OK))
        }
        Command::Estimate { input, .. } => {
            let file = std::fs::File::open(input).map_err(|e| config_failure(format!("input {}: {e}", input.display())))?;
            let rows = read_csv(file)?;
            let reports = estimate_exponent(&rows)?;
            let quasi = quasi_mult_triples(&rows);
            Ok((Payload::Json(json!({ "exponents": reports, "quasi_multiplicativity": quasi })), EXIT_OK))
        }
        Command::Numtheory { n, k, x, degree, height, .. } => {
            let mut v = serde_json::Map::new();
            if let Some(n) = *n {
                let ni = usize::try_from(n).map_err(|_| config_failure("--n too large"))?;
                v.insert("n".into(), json!(n));
                v.insert("totient".into(), json!(totient(n)?));
                v.insert("cyclotomic".into(), json!(cyclotomic(ni)?.to_string()));
                v.insert("two_cos_min_poly".into(), json!(min_poly_two_cos(ni)?.to_string()));
                if let Some(k) = *k {
                    let class = match classify_two_cos(k, n)? {
                        TwoCosClass::Integer(i) => json!({ "integer": i }),
                        TwoCosClass::IrrationalAlgebraic(d) => json!({ "irrational_algebraic_degree": d }),
                    };
                    v.insert("k".into(), json!(k));
                    v.insert("class".into(), class);
                }
            } else if k.is_some() {
                return Err(config_failure("--k needs --n"));
            }
            if let Some(x) = *x {
                let found = small_poly_scan(x, *degree, *height)?;
                v.insert(
                    "scan".into(),
                    json!({ "x": x, "max_degree": degree, "max_height": height, "polynomial": found.map(|p| p.to_string()) }),
                );
            }
            if v.is_empty() {
                return Err(config_failure("numtheory needs --n and/or --x"));
            }
            Ok((Payload::Json(Value::Object(v)), EXIT_OK))
        }
    }
}

/// Every (r1,r2), (r2,r3), (r1,r3) chain among the rows with r2 ≥ 2r1 and
/// r3 ≥ 2r2, checked for quasi-multiplicativity.
fn quasi_mult_triples(rows: &[BatchRow]) -> Vec<Value> {
    let as_batch = |r: &BatchRow| ArmTrialBatch {
        event: r.event,
        r_in: r.r_in,
        r_out: r.r_out,
        samples: r.samples,
        successes: r.successes,
        seed: 0,
        trial_range: (0, r.samples),
        p: 0.5,
    };
    let find = |e: ArmEvent, a: u32, b: u32| rows.iter().find(|r| r.event == e && r.r_in == a && r.r_out == b);
    let mut out = Vec::new();
    for r12 in rows.iter().filter(|r| r.r_in > 0) {
        for r23 in rows.iter().filter(|r| r.event == r12.event && r.r_in == r12.r_out) {
            let Some(r13) = find(r12.event, r12.r_in, r23.r_out) else { continue };
            match quasi_mult_check(&as_batch(r12), &as_batch(r23), &as_batch(r13)) {
                Ok(rep) => out.push(json!({ "event": r12.event, "report": rep })),
                Err(Error::Domain(_)) => {}
                Err(e) => out.push(json!({ "event": r12.event, "radii": [r12.r_in, r12.r_out, r23.r_out], "error": e.to_string() })),
            }
        }
    }
    out
}

fn emit(cmd: &Command, payload: Payload, out: &mut dyn Write) -> Result<(), Failure> {
    let prov = Provenance::of(cmd);
    let bytes = match payload {
        Payload::Json(mut v) => {
            if let Value::Object(m) = &mut v {
                m.insert("provenance".into(), prov.json());
            }
            let mut s = serde_json::to_string_pretty(&v).expect("json serializes");
            s.push('\n');
            s.into_bytes()
        }
        Payload::Csv(body) => {
            let mut b = prov.csv_comment().into_bytes();
            b.extend(body);
            b
        }
    };
    let io = |e: std::io::Error| Failure::from(Error::Io(e.to_string()));
    match &cmd.output().output {
        Some(path) => std::fs::write(path, bytes).map_err(io),
        None => out.write_all(&bytes).map_err(io),
    }
}

/// Parses `args` (program name first), runs the command and returns its
/// exit code, writing results to `out` and diagnostics to `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let result = merged_args(args).and_then(|argv| {
        let cli = match Cli::try_parse_from(argv) {
            Ok(c) => c,
            Err(e) => {
                use clap::error::ErrorKind;
                if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                    let _ = write!(out, "{e}");
                    return Ok(EXIT_OK);
                }
                let msg = e.to_string();
                return Err(config_failure(msg.trim_start_matches("error: ").trim_end()));
            }
        };
        let (payload, code) = execute(&cli.command, err)?;
        emit(&cli.command, payload, out)?;
        Ok(code)
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

/// [`run_with`] on the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

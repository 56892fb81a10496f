//! `cartan-bundle` command-line tool.
//!
//! Exit codes: 0 success, 1 domain or usage error (error JSON on stderr),
//! 2 verification failure.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use cartan_bundle::bundle::{
    bundle_act, dp_exp_full, dp_log_full, find_transporter, rho, rho_inv, tau, twisted_act, BundlePoint,
    CartanMotion, DpElement,
};
use cartan_bundle::grassmann::{cartan_embed0, rho0, CartanRotation, Plane, Signature};
use cartan_bundle::json::Wire;
use cartan_bundle::liegroup::{se_exp, se_log, so_exp, so_log, LogBranch, Motion, Rotation, Screw, SkewMatrix};
use cartan_bundle::projective::moebius_grid;
use cartan_bundle::sample::{sample, Config, SampleKind};
use cartan_bundle::{verify, Error, Tolerances};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "cartan-bundle", version, about = "Cartan model of the canonical bundle over G(n,p) in SE(n)")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Ambient dimension.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Plane dimension.
    #[arg(long, global = true)]
    p: Option<usize>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[arg(long, global = true, default_value_t = 100)]
    samples: usize,
    /// Input file (stdin when absent).
    #[arg(long = "in", global = true)]
    input: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long = "out", global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[arg(long = "tol.orth", global = true)]
    tol_orth: Option<f64>,
    #[arg(long = "tol.invol", global = true)]
    tol_invol: Option<f64>,
    #[arg(long = "tol.eig", global = true)]
    tol_eig: Option<f64>,
    #[arg(long = "tol.recon", global = true)]
    tol_recon: Option<f64>,
    #[arg(long = "tol.rank", global = true)]
    tol_rank: Option<f64>,
    #[arg(long = "tol.branch", global = true)]
    tol_branch: Option<f64>,
    #[arg(long = "tol.sing", global = true)]
    tol_sing: Option<f64>,
    #[arg(long = "tol.plane", global = true)]
    tol_plane: Option<f64>,
    #[arg(long = "tol.fiber", global = true)]
    tol_fiber: Option<f64>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args, Debug)]
struct ExpMode {
    /// Screw in se(n) to motion (default).
    #[arg(long)]
    se: bool,
    /// Skew matrix to rotation.
    #[arg(long)]
    so: bool,
    /// Element of d_p to Cartan motion.
    #[arg(long)]
    dp: bool,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exponential: screw, skew matrix or d_p element from the input.
    Exp(ExpMode),
    /// Logarithm: motion, rotation or Cartan motion from the input.
    Log {
        #[command(flatten)]
        mode: ExpMode,
        /// Resolve angle-π blocks deterministically instead of failing.
        #[arg(long)]
        branch_pi: bool,
    },
    /// Plane to Cartan rotation, or with --bundle a bundle point to a Cartan motion.
    Embed {
        #[arg(long)]
        bundle: bool,
    },
    /// Cartan rotation to plane, or with --bundle a Cartan motion to a bundle point.
    Project {
        #[arg(long)]
        bundle: bool,
    },
    /// Twisted action on motions ({"a", "g"}) or bundle action ({"a", "b"}).
    Act {
        #[arg(long, conflicts_with = "bundle")]
        twisted: bool,
        #[arg(long)]
        bundle: bool,
    },
    /// Transporter between two bundle points ({"src", "dst"}).
    Transport,
    /// g σ(g⁻¹) for a motion.
    Tau,
    /// Seeded random values of the given kind.
    Sample { kind: String },
    /// Run the randomized verification harness.
    Verify,
    /// Grid on the Möbius band exp(d_1) in SE(2).
    Moebius {
        #[arg(long, default_value_t = 64)]
        num_theta: usize,
        #[arg(long, default_value_t = 9)]
        num_lambda: usize,
        #[arg(long, default_value_t = 2.0)]
        lambda_max: f64,
    },
}

#[derive(Debug)]
enum CliError {
    Domain(Error),
    Usage(String),
    MalformedJson(String),
    Io(String),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Domain(e)
    }
}

impl CliError {
    fn code(&self) -> &'static str {
        match self {
            CliError::Domain(e) => e.code(),
            CliError::Usage(_) => "usage",
            CliError::MalformedJson(_) => "malformed_json",
            CliError::Io(_) => "io",
        }
    }

    fn detail(&self) -> String {
        match self {
            CliError::Domain(e) => e.to_string(),
            CliError::Usage(s) | CliError::MalformedJson(s) | CliError::Io(s) => s.clone(),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

enum Outcome {
    Done,
    VerificationFailed,
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let command = args.get(1).cloned().unwrap_or_default();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            report(&CliError::Usage(e.to_string().trim().to_string()), &command);
            return ExitCode::from(1);
        }
    };
    match run(&cli) {
        Ok(Outcome::Done) => ExitCode::SUCCESS,
        Ok(Outcome::VerificationFailed) => ExitCode::from(2),
        Err(e) => {
            report(&e, &command);
            ExitCode::from(1)
        }
    }
}

fn report(e: &CliError, command: &str) {
    let body = json!({
        "error": e.code(),
        "detail": e.detail(),
        "context": { "command": command },
    });
    eprintln!("{body}");
}

fn tolerances(g: &Global) -> CliResult<Tolerances> {
    let mut tol = Tolerances::from_env()?;
    let overrides = [
        ("orth", g.tol_orth),
        ("invol", g.tol_invol),
        ("eig", g.tol_eig),
        ("recon", g.tol_recon),
        ("rank", g.tol_rank),
        ("branch", g.tol_branch),
        ("sing", g.tol_sing),
        ("plane", g.tol_plane),
        ("fiber", g.tol_fiber),
    ];
    for (name, value) in overrides {
        if let Some(v) = value {
            tol.set(name, v)?;
        }
    }
    Ok(tol)
}

fn config(g: &Global, tol: Tolerances) -> CliResult<Config> {
    let n = g.n.unwrap_or(3);
    let p = g.p.unwrap_or(1);
    let cfg = Config {
        n,
        p,
        seed: g.seed,
        samples: g.samples,
        tol,
        input: g.input.clone(),
        output: g.output.clone(),
    };
    cfg.validate()?;
    Ok(cfg)
}

fn read_input(g: &Global) -> CliResult<Value> {
    let text = match &g.input {
        Some(path) => fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?,
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| CliError::Io(format!("stdin: {e}")))?;
            s
        }
    };
    serde_json::from_str(&text).map_err(|e| CliError::MalformedJson(e.to_string()))
}

/// Applies `f` to each element when the input is an array.
fn each(input: Value, f: impl Fn(Value) -> CliResult<Value>) -> CliResult<Value> {
    match input {
        Value::Array(items) => items.into_iter().map(f).collect::<CliResult<Vec<_>>>().map(Value::Array),
        v => f(v),
    }
}

fn field(v: &mut Value, name: &str) -> CliResult<Value> {
    v.get_mut(name)
        .map(Value::take)
        .ok_or_else(|| CliError::Domain(Error::InvalidValue(format!("input lacks field {name:?}"))))
}

fn write_output(g: &Global, text: &str) -> CliResult<()> {
    match &g.output {
        Some(path) => fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

fn emit(g: &Global, value: &Value) -> CliResult<()> {
    if g.format == Format::Csv {
        return Err(CliError::Usage("CSV output is only available for moebius".into()));
    }
    write_output(g, &format!("{value}\n"))
}

fn signature(g: &Global, n: usize) -> CliResult<Signature> {
    let p = g
        .p
        .ok_or_else(|| CliError::Usage("--p is required for this command".into()))?;
    if let Some(gn) = g.n {
        if gn != n {
            return Err(Error::DimensionMismatch(format!("--n {gn} but input has dimension {n}")).into());
        }
    }
    Ok(Signature::for_dim(n, p)?)
}

#[derive(Clone, Copy)]
enum Mode {
    Se,
    So,
    Dp,
}

fn mode(m: &ExpMode) -> CliResult<Mode> {
    match (m.se, m.so, m.dp) {
        (_, false, false) => Ok(Mode::Se),
        (false, true, false) => Ok(Mode::So),
        (false, false, true) => Ok(Mode::Dp),
        _ => Err(CliError::Usage("choose one of --se, --so, --dp".into())),
    }
}

fn run(cli: &Cli) -> CliResult<Outcome> {
    let g = &cli.global;
    let tol = tolerances(g)?;
    let out = match &cli.command {
        Command::Exp(m) => {
            let mode = mode(m)?;
            each(read_input(g)?, |v| {
                Ok(match mode {
                    Mode::Se => se_exp(&Screw::from_json(v, &tol)?, &tol)?.to_json(),
                    Mode::So => so_exp(&SkewMatrix::from_json(v, &tol)?, &tol)?.to_json(),
                    Mode::Dp => dp_exp_full(&DpElement::from_json(v, &tol)?, &tol)?.to_json(),
                })
            })?
        }
        Command::Log { mode: m, branch_pi } => {
            let branch = if *branch_pi { LogBranch::ResolvePi } else { LogBranch::Strict };
            let mode = mode(m)?;
            each(read_input(g)?, |v| {
                Ok(match mode {
                    Mode::Se => se_log(&Motion::from_json(v, &tol)?, branch, &tol)?.to_json(),
                    Mode::So => so_log(&Rotation::from_json(v, &tol)?, branch, &tol)?.to_json(),
                    Mode::Dp => dp_log_full(&CartanMotion::from_json(v, &tol)?, &tol)?.to_json(),
                })
            })?
        }
        Command::Embed { bundle } => {
            each(read_input(g)?, |v| {
                Ok(if *bundle {
                    rho_inv(&BundlePoint::from_json(v, &tol)?, &tol)?.to_json()
                } else {
                    cartan_embed0(&Plane::from_json(v, &tol)?, &tol)?.to_json()
                })
            })?
        }
        Command::Project { bundle } => {
            each(read_input(g)?, |v| {
                Ok(if *bundle {
                    rho(&CartanMotion::from_json(v, &tol)?, &tol)?.to_json()
                } else {
                    rho0(&CartanRotation::from_json(v, &tol)?, &tol)?.to_json()
                })
            })?
        }
        Command::Act { twisted: _, bundle } => {
            each(read_input(g)?, |mut input| {
                let a = Motion::from_json(field(&mut input, "a")?, &tol)?;
                Ok(if *bundle {
                    let b = BundlePoint::from_json(field(&mut input, "b")?, &tol)?;
                    bundle_act(&a, &b, &tol)?.to_json()
                } else {
                    let target = Motion::from_json(field(&mut input, "g")?, &tol)?;
                    let sig = signature(g, target.n())?;
                    twisted_act(&a, &target, &sig)?.to_json()
                })
            })?
        }
        Command::Transport => {
            each(read_input(g)?, |mut input| {
                let src = BundlePoint::from_json(field(&mut input, "src")?, &tol)?;
                let dst = BundlePoint::from_json(field(&mut input, "dst")?, &tol)?;
                Ok(find_transporter(&src, &dst)?.to_json())
            })?
        }
        Command::Tau => {
            each(read_input(g)?, |v| {
                let m = Motion::from_json(v, &tol)?;
                let sig = signature(g, m.n())?;
                Ok(tau(&m, &sig, &tol)?.to_json())
            })?
        }
        Command::Sample { kind } => {
            let kind: SampleKind = kind.parse()?;
            Value::Array(sample(kind, &config(g, tol)?)?)
        }
        Command::Verify => {
            let report = verify::run(&config(g, tol)?)?;
            emit(g, &serde_json::to_value(&report).expect("report serializes"))?;
            return Ok(if report.pass { Outcome::Done } else { Outcome::VerificationFailed });
        }
        Command::Moebius {
            num_theta,
            num_lambda,
            lambda_max,
        } => {
            let records = moebius_grid(*num_theta, *num_lambda, *lambda_max)?;
            let text = match g.format {
                Format::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for r in &records {
                        w.serialize(r).map_err(|e| CliError::Io(e.to_string()))?;
                    }
                    String::from_utf8(w.into_inner().map_err(|e| CliError::Io(e.to_string()))?)
                        .expect("csv output is UTF-8")
                }
                Format::Json => records
                    .iter()
                    .map(|r| serde_json::to_string(r).expect("record serializes") + "\n")
                    .collect(),
            };
            write_output(g, &text)?;
            return Ok(Outcome::Done);
        }
    };
    emit(g, &out)?;
    Ok(Outcome::Done)
}

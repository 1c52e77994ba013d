//! The `belief` command-line tool.
//!
//! [`run`] takes the argument list and output streams so the whole tool can
//! be driven from tests without spawning a process.

mod bench;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use belief_core::combine::{conjunctive, conjunctive_many, conjunctive_via_q};
use belief_core::dense::{m_from_q, q_from_m, to_dense};
use belief_core::io::{format_real, parse_bba_in, read_bba, to_json, write_bba};
use belief_core::oracle::{oracle_body, oracle_conjunctive};
use belief_core::reduce::kmeans::{kmeans_reduce, KMeansConfig};
use belief_core::reduce::linear::{reduce_betp_bel, reduce_betp_pl, reduce_isopignistic};
use belief_core::{BodyKind, Error, Frame, MassFunction, ReductionReport, SubsetMask};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_REDUCTION: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "belief",
    version,
    about = "Sparse belief functions: evaluate, combine, reduce"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check a bba file and print its size, m(∅) and mass sum.
    Validate {
        path: PathBuf,
        /// Also write the canonical form of the bba here.
        #[arg(long, value_name = "PATH")]
        write: Option<PathBuf>,
    },
    /// Evaluate one body of evidence on a set.
    Eval(EvalArgs),
    /// Combine bbas with the conjunctive rule.
    Combine(CombineArgs),
    /// Reduce the focal set of a bba.
    Reduce(ReduceArgs),
    /// Compare fast paths against the brute-force oracles.
    Verify {
        path: PathBuf,
        /// Second bba, to also check combination.
        other: Option<PathBuf>,
    },
    /// Run a benchmark scenario and print per-step CSV.
    Bench(bench::BenchArgs),
}

/// Sets are written `a,b` or `{a,b}`; `""` is ∅ and `X` the whole frame
/// unless `X` is a label.
#[derive(Debug, Args)]
#[command(group(ArgGroup::new("body").required(true).args(["bel", "pl", "q", "betp"])))]
struct EvalArgs {
    path: PathBuf,
    #[arg(long, value_name = "SET", allow_hyphen_values = true)]
    bel: Option<String>,
    #[arg(long, value_name = "SET", allow_hyphen_values = true)]
    pl: Option<String>,
    #[arg(long, value_name = "SET", allow_hyphen_values = true)]
    q: Option<String>,
    #[arg(long, value_name = "SET", allow_hyphen_values = true)]
    betp: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Via {
    /// Pairwise products of focal elements.
    Focal,
    /// Pointwise product of dense commonalities.
    Q,
}

#[derive(Debug, Args)]
struct CombineArgs {
    #[arg(required = true, num_args = 2..)]
    paths: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "focal")]
    via: Via,
    /// Write the result here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Method {
    Isopignistic,
    LinearPl,
    LinearBel,
    Kmeans,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    path: PathBuf,
    #[arg(long, value_enum)]
    method: Method,
    #[command(flatten)]
    kmeans: KMeansArgs,
    /// Write the reduced bba here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub(crate) struct KMeansArgs {
    /// Number of clusters (kmeans only).
    #[arg(long)]
    pub k: Option<usize>,
    /// Runs from different initial centers; more than one needs --seed.
    #[arg(long, default_value_t = 1)]
    pub restarts: usize,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Defaults to k.
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Never use ∅ as a center.
    #[arg(long)]
    pub closed_world: bool,
}

impl KMeansArgs {
    pub(crate) fn config(&self) -> Result<KMeansConfig, Failure> {
        let k = self
            .k
            .ok_or_else(|| Failure::usage("--method kmeans needs --k"))?;
        if self.restarts > 1 && self.seed.is_none() {
            return Err(Failure::usage(
                "--restarts above 1 needs an explicit --seed",
            ));
        }
        let mut cfg = KMeansConfig::new(k)
            .with_restarts(self.restarts, self.seed.unwrap_or(0))
            .closed_world(self.closed_world);
        if let Some(it) = self.max_iterations {
            cfg = cfg.with_max_iterations(it);
        }
        Ok(cfg)
    }
}

/// A command failure with its exit code.
#[derive(Debug)]
pub(crate) struct Failure {
    code: i32,
    message: String,
    source: Option<Error>,
}

impl Failure {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        Self {
            code: EXIT_INPUT,
            message: message.into(),
            source: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NegativeMassSolution { .. } | Error::SingularSystem { .. } => EXIT_REDUCTION,
            _ => EXIT_INPUT,
        };
        Self {
            code,
            message: format!("{}: {e}", variant_name(&e)),
            source: Some(e),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::from(Error::Io(e.to_string()))
    }
}

fn variant_name(e: &Error) -> String {
    let debug = format!("{e:?}");
    debug
        .split(|c: char| !c.is_alphanumeric())
        .next()
        .unwrap_or_default()
        .to_string()
}

pub(crate) type CmdResult = Result<(), Failure>;

/// Reduced bba, its report, and method-specific report lines.
pub(crate) type Reduced = (MassFunction, ReductionReport, Vec<(&'static str, String)>);

/// Runs the tool and returns its exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_INPUT
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            };
        }
    };
    let result = match cli.command {
        Command::Validate { path, write } => validate(&path, write.as_deref(), out),
        Command::Eval(args) => eval(&args, out),
        Command::Combine(args) => combine(&args, out, err),
        Command::Reduce(args) => reduce(&args, out, err),
        Command::Verify { path, other } => verify(&path, other.as_deref(), out),
        Command::Bench(args) => bench::run(&args, out),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn validate(path: &Path, write: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let m = read_bba(path)?;
    if let Some(target) = write {
        write_bba(target, &m)?;
    }
    writeln!(
        out,
        "ok: |m|={}, m(∅)={}, sum={:.9}",
        m.len(),
        format_real(m.conflict()),
        m.total_mass()
    )?;
    Ok(())
}

/// Parses a set expression against `frame`.
fn parse_set(frame: &Frame, expr: &str) -> Result<SubsetMask, Error> {
    let expr = expr.trim();
    if expr == "X" && frame.index_of("X").is_none() {
        return Ok(frame.full());
    }
    let inner = expr
        .strip_prefix('{')
        .and_then(|s| s.strip_suffix('}'))
        .unwrap_or(expr)
        .trim();
    if inner.is_empty() || inner == "∅" {
        return Ok(SubsetMask::EMPTY);
    }
    frame.parse_subset(inner.split(',').map(str::trim))
}

fn eval(args: &EvalArgs, out: &mut dyn Write) -> CmdResult {
    let m = read_bba(&args.path)?;
    let (kind, expr) = [
        (BodyKind::Bel, &args.bel),
        (BodyKind::Pl, &args.pl),
        (BodyKind::Q, &args.q),
        (BodyKind::Betp, &args.betp),
    ]
    .into_iter()
    .find_map(|(kind, v)| v.as_deref().map(|e| (kind, e)))
    .expect("clap requires one body");
    let a = parse_set(m.frame(), expr)?;
    writeln!(out, "{:.12}", kind.eval(&m, a)?)?;
    Ok(())
}

fn read_all(paths: &[PathBuf]) -> Result<Vec<MassFunction>, Error> {
    let first = read_bba(&paths[0])?;
    let frame = Arc::clone(first.frame_arc());
    let mut all = vec![first];
    for path in &paths[1..] {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        all.push(parse_bba_in(&frame, &text)?);
    }
    Ok(all)
}

/// Writes `m` to `path`, or to `out` when there is none. Returns the stream
/// that should receive the summary.
fn emit<'a>(
    m: &MassFunction,
    path: Option<&Path>,
    out: &'a mut dyn Write,
    err: &'a mut dyn Write,
) -> Result<&'a mut dyn Write, Failure> {
    match path {
        Some(p) => {
            write_bba(p, m)?;
            Ok(out)
        }
        None => {
            write!(out, "{}", to_json(m))?;
            Ok(err)
        }
    }
}

fn combine(args: &CombineArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let ms = read_all(&args.paths)?;
    let result = match args.via {
        Via::Focal => conjunctive_many(&ms)?,
        Via::Q => {
            let mut acc = ms[0].clone();
            for m in &ms[1..] {
                acc = conjunctive_via_q(&acc, m)?;
            }
            acc
        }
    };
    let summary = emit(&result, args.out.as_deref(), out, err)?;
    writeln!(
        summary,
        "|m|={}, m(∅)={}",
        result.len(),
        format_real(result.conflict())
    )?;
    Ok(())
}

/// Reduces `m` with `method`, plus extra report lines.
pub(crate) fn apply_method(
    m: &MassFunction,
    method: Method,
    kmeans: &KMeansArgs,
) -> Result<Reduced, Failure> {
    let (r, report, extra) = match method {
        Method::Isopignistic => {
            let (r, report) = reduce_isopignistic(m)?;
            (r, report, Vec::new())
        }
        Method::LinearPl => {
            let (r, report) = reduce_betp_pl(m)?;
            (r, report, Vec::new())
        }
        Method::LinearBel => {
            let (r, report) = reduce_betp_bel(m)?;
            (r, report, Vec::new())
        }
        Method::Kmeans => {
            let (r, state, report) = kmeans_reduce(m, &kmeans.config()?)?;
            let extra = vec![
                ("iterations", state.iterations.to_string()),
                ("termination", format!("{:?}", state.termination)),
                ("objective", format_real(state.objective)),
                ("winning_run", state.run.to_string()),
            ];
            (r, report, extra)
        }
    };
    Ok((r, report, extra))
}

fn reduce(args: &ReduceArgs, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    let m = read_bba(&args.path)?;
    let (r, report, extra) = match apply_method(&m, args.method, &args.kmeans) {
        Ok(done) => done,
        Err(f) => {
            if let Some(Error::NegativeMassSolution {
                candidates,
                solution,
            }) = &f.source
            {
                writeln!(err, "signed solution (not clamped):")?;
                for (a, y) in candidates.iter().zip(solution) {
                    writeln!(
                        err,
                        "  {}: {}",
                        m.frame().format_subset(*a),
                        format_real(*y)
                    )?;
                }
            }
            return Err(f);
        }
    };
    let method = args.method.to_possible_value().expect("not skipped");
    let mut lines = vec![
        ("method", method.get_name().to_string()),
        ("input_size", report.input_size.to_string()),
        ("output_size", report.output_size.to_string()),
        ("betp_deviation", format!("{:e}", report.betp_deviation)),
        (
            "secondary_deviation",
            format!("{:e}", report.secondary_deviation),
        ),
        ("negative_mass_flag", report.negative_mass_flag.to_string()),
    ];
    lines.extend(extra);
    let summary = emit(&r, args.out.as_deref(), out, err)?;
    let width = lines.iter().map(|(k, _)| k.len()).max().unwrap_or(0) + 1;
    for (key, value) in lines {
        writeln!(summary, "{:<width$} {value}", format!("{key}:"))?;
    }
    Ok(())
}

const VERIFY_TOL: f64 = 1e-12;
const VERIFY_VIA_Q_TOL: f64 = 1e-9;

fn verify(path: &Path, other: Option<&Path>, out: &mut dyn Write) -> CmdResult {
    let mut paths = vec![path.to_path_buf()];
    paths.extend(other.map(Path::to_path_buf));
    let ms = read_all(&paths)?;
    let m = &ms[0];
    let n = m.frame().len();
    if n > 10 {
        return Err(Error::FrameTooLargeForOracle { n, max: 10 }.into());
    }

    let mut checks: Vec<(String, f64, f64)> = Vec::new();
    for kind in BodyKind::ALL {
        let mut worst: f64 = 0.0;
        for a in (0..1u64 << n).map(SubsetMask) {
            match (kind.eval(m, a), oracle_body(m, kind, a)) {
                (Ok(x), Ok(y)) => worst = worst.max((x - y).abs()),
                (Err(Error::TotalConflict), Err(Error::TotalConflict)) => {}
                _ => worst = f64::INFINITY,
            }
        }
        checks.push((kind.name().to_string(), worst, VERIFY_TOL));
    }
    let back = m_from_q(&q_from_m(&to_dense(m)?)?)?;
    let round_trip = (0..1u64 << n)
        .map(|a| (back.get(SubsetMask(a)) - m.mass(SubsetMask(a))).abs())
        .fold(0.0, f64::max);
    checks.push(("m->q->m".into(), round_trip, VERIFY_TOL));
    if let [m1, m2] = &ms[..] {
        let fast = conjunctive(m1, m2)?;
        checks.push((
            "conjunctive".into(),
            fast.max_abs_diff(&oracle_conjunctive(m1, m2)?),
            VERIFY_TOL,
        ));
        checks.push((
            "conjunctive via q".into(),
            fast.max_abs_diff(&conjunctive_via_q(m1, m2)?),
            VERIFY_VIA_Q_TOL,
        ));
    }

    let mut failed = Vec::new();
    for (name, err, tol) in &checks {
        let status = if err <= tol { "ok" } else { "MISMATCH" };
        writeln!(out, "{name:<18} max err {err:.3e} (tol {tol:e}) {status}")?;
        if err > tol {
            failed.push(name.clone());
        }
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Failure::usage(format!(
            "oracle mismatch: {}",
            failed.join(", ")
        )))
    }
}

//! `bench`: per-step timing of a combination scenario.

use std::fmt::Write as _;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use belief_core::combine::conjunctive;
use belief_core::dense::MAX_DENSE_FRAME;
use belief_core::io::write_bba;
use belief_core::random::explosion_sources;
use belief_core::{Error, Frame};
use clap::{Args, ValueEnum};

use crate::{apply_method, CmdResult, Failure, KMeansArgs, Method};

pub const CSV_HEADER: &str = "step,size_before,size_after,wall_ms,betp_dev,secondary_dev";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub(crate) enum Scenario {
    /// Fold n bbas `m_i(X) = m_i(X ∖ {x_i}) = 1/2`.
    Explosion,
}

#[derive(Debug, Args)]
pub(crate) struct BenchArgs {
    #[arg(long, value_enum)]
    scenario: Scenario,
    #[arg(long)]
    n: usize,
    /// Reduce after every S combinations.
    #[arg(long, value_name = "S", requires = "method")]
    reduce_every: Option<usize>,
    #[arg(long, value_enum)]
    method: Option<Method>,
    #[command(flatten)]
    kmeans: KMeansArgs,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the final bba.
    #[arg(long)]
    bba_out: Option<PathBuf>,
}

pub(crate) fn run(args: &BenchArgs, out: &mut dyn Write) -> CmdResult {
    let Scenario::Explosion = args.scenario;
    let n = args.n;
    if n < 2 {
        return Err(Failure::usage("explosion needs --n of at least 2"));
    }
    let reduction = match (args.reduce_every, args.method) {
        (Some(0), _) => return Err(Failure::usage("--reduce-every must be at least 1")),
        (Some(s), Some(method)) => Some((s, method)),
        (None, Some(_)) => return Err(Failure::usage("--method needs --reduce-every")),
        _ => None,
    };
    if reduction.is_none() && n > MAX_DENSE_FRAME {
        return Err(Error::FrameTooLarge {
            n,
            max: MAX_DENSE_FRAME,
        }
        .into());
    }

    let frame = Arc::new(Frame::numbered(n)?);
    let sources = explosion_sources(&frame);
    let mut csv = String::from(CSV_HEADER);
    csv.push('\n');
    let mut acc = sources[0].clone();
    for (step, m) in sources.iter().enumerate().skip(1) {
        let start = Instant::now();
        acc = conjunctive(&acc, m)?;
        let before = acc.len();
        let mut deviations = (String::new(), String::new());
        if let Some((every, method)) = reduction {
            let skip = method == Method::Kmeans && args.kmeans.k.is_some_and(|k| before <= k);
            if step % every == 0 && !skip {
                let (r, report, _) = apply_method(&acc, method, &args.kmeans)?;
                acc = r;
                deviations = (
                    format!("{:e}", report.betp_deviation),
                    format!("{:e}", report.secondary_deviation),
                );
            }
        }
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        let _ = writeln!(
            csv,
            "{step},{before},{},{wall_ms:.3},{},{}",
            acc.len(),
            deviations.0,
            deviations.1
        );
    }

    match &args.out {
        Some(path) => {
            std::fs::write(path, &csv).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?
        }
        None => out.write_all(csv.as_bytes())?,
    }
    if let Some(path) = &args.bba_out {
        write_bba(path, &acc)?;
    }
    Ok(())
}

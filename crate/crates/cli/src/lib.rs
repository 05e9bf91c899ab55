//! Command-line front end for `tpgabor`.
//!
//! Every invocation prints a one-line JSON summary on standard output and
//! writes its data payload to `--out` when given. Exit status is 0 on
//! success, 1 when a computation fails and 2 on invalid usage.

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use serde_json::{json, Value};

mod commands;
pub mod output;
pub mod parse;

pub use commands::random_signal;
pub use output::{Format, Payload};
use parse::{
    parse_deltas, parse_grid, parse_positive_ratio, parse_range, parse_ratio_list, Deltas,
    RatioList,
};

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "TPGABOR_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "tpgabor",
    version,
    about = "Totally positive Gabor windows and their duals"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Data output file
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Format of the data output file
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate, sample or periodize a window
    Window(WindowCmd),
    /// Zak transform on the fundamental domain and its zero
    Zak(ZakCmd),
    /// Compactly supported dual window
    Dual(DualCmd),
    /// Frame and Riesz bounds
    FrameCheck(FrameCheckCmd),
    /// Seeded reconstruction trials on C^L
    Reconstruct(ReconstructCmd),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct WindowSource {
    /// Pole parameters, e.g. `1,-1,1/2,-1/2`
    #[arg(long, value_parser = parse_deltas, allow_hyphen_values = true)]
    pub delta: Option<Deltas>,

    /// JSON file `{"deltas": [...], "scale": 1.0}`
    #[arg(long)]
    pub spec: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WindowOpts {
    #[command(flatten)]
    pub source: WindowSource,

    /// Scale C (overrides the spec file)
    #[arg(long, value_parser = parse_positive_ratio)]
    pub scale: Option<Rational64>,

    /// Split repeated poles by this relative amount
    #[arg(long)]
    pub perturb: Option<f64>,
}

#[derive(Debug, Args)]
pub struct WindowCmd {
    #[command(flatten)]
    pub window: WindowOpts,

    /// Evaluation interval START:END
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true, conflicts_with = "sample")]
    pub range: Option<(Rational64, Rational64)>,

    /// Evaluation step on --range
    #[arg(long, value_parser = parse_positive_ratio, requires = "range")]
    pub step: Option<Rational64>,

    /// Sampling step h
    #[arg(long, value_parser = parse_positive_ratio)]
    pub sample: Option<Rational64>,

    /// Period K of the periodized samples
    #[arg(long, requires = "sample")]
    pub period: Option<usize>,

    /// Multiply periodized samples by h^{1/2}
    #[arg(long, requires = "period")]
    pub normalize: bool,
}

#[derive(Debug, Args)]
pub struct ZakCmd {
    #[command(flatten)]
    pub window: WindowOpts,

    /// Quasi-period alpha
    #[arg(long, value_parser = parse_positive_ratio)]
    pub alpha: Rational64,

    /// Grid size NXxNXI on [0, alpha) x [0, 1/alpha)
    #[arg(long, value_parser = parse_grid, default_value = "64x64")]
    pub grid: (usize, usize),
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("offsets").required(true).args(["xgrid", "x_values"]))]
pub struct DualCmd {
    #[command(flatten)]
    pub window: WindowOpts,

    /// Time step alpha
    #[arg(long, value_parser = parse_positive_ratio)]
    pub alpha: Rational64,

    /// Frequency step beta
    #[arg(long, value_parser = parse_positive_ratio)]
    pub beta: Rational64,

    /// Support enlargement L
    #[arg(long = "L", default_value_t = 0)]
    pub l: u32,

    /// Number of equispaced offsets in [0, alpha)
    #[arg(long)]
    pub xgrid: Option<usize>,

    /// Explicit offsets in [0, alpha)
    #[arg(long, value_parser = parse_ratio_list)]
    pub x_values: Option<RatioList>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Space {
    /// C^L
    Cl,
    /// l2(Z) at critical density
    Seq,
    /// L2(T_L) at critical density
    Periodic,
}

#[derive(Debug, Args)]
pub struct FrameCheckCmd {
    #[command(flatten)]
    pub window: WindowOpts,

    #[arg(long, value_enum)]
    pub space: Space,

    /// Signal length (period)
    #[arg(long = "L")]
    pub len: Option<usize>,

    /// Time step
    #[arg(long)]
    pub a: Option<usize>,

    /// Number of modulations
    #[arg(long = "M")]
    pub m: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DualKind {
    /// Sampled, periodized dual of the continuous window
    Algorithm,
    /// Canonical dual S^+ g of the finite system
    Canonical,
}

#[derive(Debug, Args)]
pub struct ReconstructCmd {
    #[command(flatten)]
    pub window: WindowOpts,

    /// Signal length
    #[arg(long = "L")]
    pub len: usize,

    #[arg(long)]
    pub a: usize,

    #[arg(long = "M")]
    pub m: usize,

    #[arg(long, value_enum, default_value_t = DualKind::Algorithm)]
    pub dual: DualKind,

    /// Support enlargement of the algorithmic dual
    #[arg(long = "dual-L", default_value_t = 0)]
    pub dual_l: u32,

    #[arg(long, default_value_t = 50)]
    pub trials: usize,

    /// Seed of the ChaCha8 generator
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

/// Invalid flag combination detected after parsing.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("invalid value for '{flag}': {message}")]
pub struct UsageError {
    pub flag: &'static str,
    pub message: String,
}

impl UsageError {
    pub fn new(flag: &'static str, message: impl Into<String>) -> Self {
        Self {
            flag,
            message: message.into(),
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Usage(#[from] UsageError),
    #[error(transparent)]
    Compute(#[from] tpgabor::Error),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            _ => 1,
        }
    }

    pub fn code(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "UsageError",
            CliError::Compute(e) => e.code(),
            CliError::Io(_) => "IoError",
        }
    }
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: i32,
    /// One-line JSON summary for standard output.
    pub summary: Value,
    /// Help, version or usage text for standard error (help goes to stdout).
    pub message: Option<String>,
}

fn error_summary(code: &str, message: &str, flag: Option<&str>) -> Value {
    let mut v = json!({ "status": "error", "code": code, "message": message });
    if let Some(flag) = flag {
        v["flag"] = json!(flag);
    }
    v
}

/// Parses `argv` (program name first) and runs the command.
pub fn run_from<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::{ContextKind, ErrorKind};
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                return Outcome {
                    status: 0,
                    summary: Value::Null,
                    message: Some(e.to_string()),
                };
            }
            let flag = e.get(ContextKind::InvalidArg).and_then(|a| {
                let a = a.to_string();
                let start = a.find("--")?;
                let name: String = a[start + 2..]
                    .chars()
                    .take_while(|c| c.is_ascii_alphanumeric() || *c == '-')
                    .collect();
                Some(format!("--{name}"))
            });
            let text = e.to_string();
            let first = text
                .lines()
                .map(str::trim)
                .filter(|l| {
                    !l.is_empty()
                        && !l.starts_with("For more information")
                        && !l.starts_with("Usage:")
                })
                .collect::<Vec<_>>()
                .join(" ");
            let first = first.trim_start_matches("error: ");
            return Outcome {
                status: 2,
                summary: error_summary("UsageError", first, flag.as_deref()),
                message: Some(text),
            };
        }
    };
    run(&cli)
}

pub fn run(cli: &Cli) -> Outcome {
    match commands::execute(cli) {
        Ok(summary) => Outcome {
            status: 0,
            summary,
            message: None,
        },
        Err(e) => {
            let flag = match &e {
                CliError::Usage(u) => Some(u.flag),
                _ => None,
            };
            Outcome {
                status: e.exit_code(),
                summary: error_summary(e.code(), &e.to_string(), flag),
                message: Some(format!("error: {e}")),
            }
        }
    }
}

/// Configures the global thread pool from [`THREADS_ENV`].
pub fn init_threads() -> Result<(), UsageError> {
    let Ok(v) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        UsageError::new(
            THREADS_ENV,
            format!("expected a positive integer, got '{v}'"),
        )
    })?;
    // a pool may already exist when embedded; the first configuration wins
    let _ = rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global();
    Ok(())
}

//! Command-line front end: `feasible`, `solve` and `order`.
//!
//! Exit codes: 0 success, 2 bad input, 3 rank-deficient garbling, 4 refuted
//! equilibrium check, 5 internal tolerance failure. `MP_THREADS` caps the
//! worker pool.

pub mod commands;
pub mod format;
pub mod scenario;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use crate::Error;
pub use commands::{Format, Output, SPEC_VERSION};
pub use scenario::Scenario;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_SINGULAR: i32 = 3;
pub const EXIT_REFUTED: i32 = 4;
pub const EXIT_INTERNAL: i32 = 5;

#[derive(Parser, Debug)]
#[command(name = "mp", version, about = "Two-state mediated Bayesian persuasion")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Csv,
    Json,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum Mode {
    Bp,
    SenderBr,
    MediatorBr,
    Check,
    Search,
    Compare,
}

impl Mode {
    fn name(self) -> &'static str {
        match self {
            Mode::Bp => "bp",
            Mode::SenderBr => "sender-br",
            Mode::MediatorBr => "mediator-br",
            Mode::Check => "check",
            Mode::Search => "search",
            Mode::Compare => "compare",
        }
    }
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Boundary curves and wing vertices of the feasible posterior set.
    Feasible {
        scenario: PathBuf,
        #[arg(long, default_value_t = crate::feasible::DEFAULT_POINTS)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "csv")]
        format: FormatArg,
    },
    /// Benchmark, best responses, equilibrium check/search and comparison.
    Solve {
        scenario: PathBuf,
        #[arg(long, value_enum)]
        mode: Mode,
        /// Sender experiment, `"a,b;c,d"`, `identity` or `uninformative`.
        #[arg(long)]
        x: Option<String>,
        /// Mediator garbling; defaults to the scenario's `sigma`.
        #[arg(long)]
        sigma: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Blackwell comparison of two garblings.
    Order {
        #[arg(long, required_unless_present = "pair")]
        a: Option<String>,
        #[arg(long, required_unless_present = "pair")]
        b: Option<String>,
        /// File holding the two matrices on its first two non-empty lines.
        #[arg(long, conflicts_with_all = ["a", "b"])]
        pair: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::SingularGarbling => EXIT_SINGULAR,
        Error::Solver(_) => EXIT_INTERNAL,
        _ => EXIT_INPUT,
    }
}

/// Worker count from `MP_THREADS`, if set.
pub fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var("MP_THREADS") {
        Err(_) => Ok(None),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!("MP_THREADS must be a positive integer, found {s:?}")),
        },
    }
}

/// Runs the CLI and returns the process exit code. Reports go to stdout (and
/// `--out` when given), diagnostics to stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
        }
    };
    match thread_cap() {
        Ok(Some(n)) => {
            // A pool may already exist when embedded; the cap then cannot change.
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
        Ok(None) => {}
        Err(msg) => {
            eprintln!("error: {msg}");
            return EXIT_INPUT;
        }
    }
    match dispatch(cli.command) {
        Ok((out, path)) => {
            if let Some(p) = path {
                if let Err(e) = std::fs::write(&p, &out.text) {
                    eprintln!("error: {}: {e}", p.display());
                    return EXIT_INPUT;
                }
            }
            print!("{}", out.text);
            if out.refuted {
                EXIT_REFUTED
            } else {
                EXIT_OK
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn dispatch(cmd: Command) -> crate::Result<(Output, Option<PathBuf>)> {
    match cmd {
        Command::Feasible { scenario, points, out, format } => {
            let s = Scenario::load(&scenario)?;
            let fmt = match format {
                FormatArg::Csv => Format::Csv,
                FormatArg::Json => Format::Json,
            };
            Ok((commands::feasible(&s, points.clamp(2, crate::feasible::MAX_POINTS), fmt)?, out))
        }
        Command::Solve { scenario, mode, x, sigma, out } => {
            let s = Scenario::load(&scenario)?;
            let profile = commands::Profile {
                x: x.as_deref().map(format::parse_matrix).transpose()?,
                sigma: sigma.as_deref().map(format::parse_matrix).transpose()?,
            };
            Ok((commands::solve(&s, mode.name(), &profile)?, out))
        }
        Command::Order { a, b, pair, json } => {
            let (a, b) = match pair {
                Some(path) => {
                    let text = std::fs::read_to_string(&path)
                        .map_err(|e| Error::Scenario(format!("{}: {e}", path.display())))?;
                    let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#'));
                    match (lines.next(), lines.next()) {
                        (Some(a), Some(b)) => (a.to_string(), b.to_string()),
                        _ => return Err(Error::Scenario(format!("{} must hold two matrices", path.display()))),
                    }
                }
                None => (a.unwrap_or_default(), b.unwrap_or_default()),
            };
            let (a, b) = (format::parse_matrix(&a)?, format::parse_matrix(&b)?);
            Ok((commands::order(&a, &b, json)?, None))
        }
    }
}

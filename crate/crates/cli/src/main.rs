//! `sumsys`: divisor functions, arrangement counts, joint ordered
//! factorisations and sum systems from the command line.
//!
//! Every result is one JSON object per line. Exit codes: 0 success,
//! 2 usage or parse error, 3 guard violation, 4 a verified system is
//! invalid, 1 internal error.

mod commands;
mod output;

use std::io;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use output::Out;

/// Environment variable overriding the default size guard.
pub const GUARD_ENV: &str = "SUMSYS_GUARD";
pub const DEFAULT_GUARD: u64 = 10_000_000;

#[derive(Parser)]
#[command(name = "sumsys", version, about = "Joint ordered factorisations and sum systems")]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a divisor-type function at n or over a range.
    Divisor(DivisorArgs),
    /// Count arrangements of typed blocks with no equal neighbours.
    Arrangements(ArrangementArgs),
    /// Count joint ordered factorisations of a tuple.
    Count(CountArgs),
    /// List joint ordered factorisations in canonical order.
    Enumerate(EnumerateArgs),
    /// Build, list or verify sum systems.
    #[command(subcommand)]
    Sumsystem(SumsystemCommand),
    /// N_(a,...,a) / m! for a = 2..=a-max.
    Sequence(SequenceArgs),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum DivisorKind {
    /// d_j = 1^{*j}; negative j gives powers of the Moebius function.
    D,
    /// c_j, ordered factorisations into j non-trivial factors.
    C,
    /// c_j^(r) = c_j * d_r.
    Cjr,
    /// c_j^(-j), signed square-free factorisation count.
    CjNegj,
    /// Moebius function minus the unit.
    MuMod,
    /// Ordered factorisations into j square-free non-trivial factors.
    #[value(name = "F")]
    F,
}

#[derive(Args)]
pub struct DivisorArgs {
    #[arg(long, value_enum)]
    pub kind: DivisorKind,
    #[arg(long, allow_negative_numbers = true)]
    pub j: Option<i64>,
    #[arg(long, allow_negative_numbers = true)]
    pub r: Option<i64>,
    /// Single argument.
    #[arg(long, conflicts_with_all = ["from", "to"], required_unless_present_all = ["from", "to"])]
    pub n: Option<u64>,
    /// First argument of an inclusive range.
    #[arg(long, requires = "to")]
    pub from: Option<u64>,
    /// Last argument of an inclusive range.
    #[arg(long, requires = "from")]
    pub to: Option<u64>,
}

#[derive(Args)]
pub struct ArrangementArgs {
    /// Blocks per type, e.g. 2,1,1.
    #[arg(long, value_delimiter = ',', required = true)]
    pub profile: Vec<u32>,
    /// Also count by backtracking (at most 12 blocks).
    #[arg(long)]
    pub oracle: bool,
    /// Report the annotated count |A_t| for this t.
    #[arg(long)]
    pub ticks: Option<u64>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum CountMethod {
    Main,
    Profiles,
    Alternating,
    #[value(name = "2d")]
    TwoD,
    Enumerate,
}

#[derive(Args)]
pub struct CountArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub dims: Vec<u64>,
    #[arg(long, value_enum, default_value = "main")]
    pub method: CountMethod,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum EnumerateFormat {
    /// One JSON array per chain.
    Lines,
    /// A single JSON array of chains.
    Json,
}

#[derive(Args)]
pub struct EnumerateArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    pub dims: Vec<u64>,
    #[arg(long)]
    pub limit: Option<u64>,
    #[arg(long, value_enum, default_value = "lines")]
    pub format: EnumerateFormat,
}

#[derive(Subcommand)]
pub enum SumsystemCommand {
    /// Sum system of a chain. Reads one chain per stdin line when no
    /// argument is given.
    Build {
        /// Chain as JSON, e.g. [[1,2],[2,3]].
        jof: Option<String>,
    },
    /// Every chain of a tuple with its sum system and validity.
    All {
        #[arg(long, value_delimiter = ',', required = true)]
        dims: Vec<u64>,
    },
    /// Check the sum-system property. Reads one system (or build record)
    /// per stdin line when no argument is given.
    Verify {
        /// {"dims":[..],"components":[[..],..]}
        system: Option<String>,
    },
}

#[derive(Args)]
pub struct SequenceArgs {
    #[arg(long, value_parser = clap::value_parser!(u8).range(2..=3))]
    pub m: u8,
    #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
    pub a_max: u64,
}

/// Failure of a subcommand, mapped onto the exit code.
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Core(sumsys_core::Error),
    Io(io::Error),
    VerificationFailed,
}

impl From<sumsys_core::Error> for Failure {
    fn from(e: sumsys_core::Error) -> Self {
        Failure::Core(e)
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Io(e)
    }
}

fn guard() -> Result<u64, Failure> {
    match std::env::var(GUARD_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{GUARD_ENV}={v:?} is not a non-negative integer"))),
        Err(_) => Ok(DEFAULT_GUARD),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    let mut out = Out::stdout(cli.pretty);
    let result = match cli.command {
        Command::Divisor(a) => commands::divisor(&a, &mut out),
        Command::Arrangements(a) => commands::arrangements(&a, &mut out),
        Command::Count(a) => commands::count(&a, guard()?, &mut out),
        Command::Enumerate(a) => commands::enumerate(&a, &mut out),
        Command::Sumsystem(c) => commands::sumsystem(&c, guard()?, &mut out),
        Command::Sequence(a) => commands::sequence(&a, &mut out),
    };
    out.flush()?;
    result
}

fn main() -> ExitCode {
    use sumsys_core::Error;

    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::VerificationFailed) => ExitCode::from(4),
        Err(Failure::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Core(e)) => {
            eprintln!("error: {e}");
            match e {
                Error::Guard { .. } => ExitCode::from(3),
                Error::Internal(_) => ExitCode::FAILURE,
                _ => ExitCode::from(2),
            }
        }
    }
}

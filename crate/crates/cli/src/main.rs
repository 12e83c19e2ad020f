mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use output::{Format, OutDir};

#[derive(Parser, Debug)]
#[command(name = "fiberlrc", version, about = "Locally recoverable codes on fiber products of curves")]
struct Cli {
    /// Output format for stdout.
    #[arg(long, global = true, value_enum, default_value_t = Format::Pretty)]
    format: Format,
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads (default: available parallelism).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Directory for artifact files.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    cmd: Cmd,
}

/// A family instance: `hermitian_rational`, `hermitian_lrc2`, `thc` or `as`.
#[derive(Args, Debug, Clone)]
pub struct FamilyArgs {
    pub family: String,
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub h: u32,
    /// Number of Artin-Schreier factors (default h).
    #[arg(long)]
    pub t: Option<u32>,
    /// Field modulus, low coefficient first, e.g. `1,1,1,1,1`.
    #[arg(long)]
    pub modulus: Option<String>,
    /// Trace-kernel elements for `as`, e.g. `b^2+b+2,b^3+b+2`.
    #[arg(long)]
    pub kernel: Option<String>,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Field description, arithmetic, preimages and kernel bases.
    Field(commands::FieldArgs),
    /// Split locus, evaluation set and point counts of a family.
    Curve {
        #[command(flatten)]
        fam: FamilyArgs,
    },
    /// Build a code and write its metadata, generator and recovery index.
    Build {
        #[command(flatten)]
        fam: FamilyArgs,
        #[arg(long, default_value_t = 0)]
        l: u64,
    },
    /// Repair erasures in a received word, or run a seeded demo.
    Recover(commands::RecoverArgs),
    /// Certify the minimum distance, or check a supplied witness.
    Certify(commands::CertifyArgs),
    /// Distance and rate bounds for given parameters.
    Bounds(commands::BoundsArgs),
    /// Reproduce one of the parameter tables.
    Table(commands::TableArgs),
    /// Closed-form rate series for the figures.
    FigureData(commands::FigureArgs),
}

#[derive(Debug)]
pub enum CliError {
    Core(fiberlrc::Error),
    Input(String),
    Io(String),
}

impl From<fiberlrc::Error> for CliError {
    fn from(e: fiberlrc::Error) -> Self {
        CliError::Core(e)
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(e.to_string())
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_infeasible() => 3,
            CliError::Core(_) | CliError::Input(_) => 2,
            CliError::Io(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Core(e) => write!(f, "{e}"),
            CliError::Input(s) | CliError::Io(s) => f.write_str(s),
        }
    }
}

fn run(cli: Cli) -> Result<String, CliError> {
    if let Some(j) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build_global()
            .map_err(|e| CliError::Input(e.to_string()))?;
    }
    let out = OutDir::new(cli.out);
    let ctx = commands::Ctx { seed: cli.seed, out };
    let doc = match cli.cmd {
        Cmd::Field(a) => commands::field(&a)?,
        Cmd::Curve { fam } => commands::curve(&ctx, &fam)?,
        Cmd::Build { fam, l } => commands::build(&ctx, &fam, l)?,
        Cmd::Recover(a) => commands::recover(&ctx, &a)?,
        Cmd::Certify(a) => commands::certify(&ctx, &a)?,
        Cmd::Bounds(a) => commands::bounds(&a)?,
        Cmd::Table(a) => commands::table(&ctx, &a)?,
        Cmd::FigureData(a) => commands::figure_data(&ctx, &a)?,
    };
    doc.render(cli.format)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            print!("{text}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

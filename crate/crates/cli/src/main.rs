//! `groupoidal`: verification campaigns and tomography runs with JSON reports.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 input error,
//! 3 parameters cannot reach the requested accuracy.

mod commands;
mod inputs;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

use commands::axioms::AxiomsArgs;
use commands::equiv::EquivScheme;
use commands::export::{KernelArgs, RoundtripArgs};
use commands::tomo::TomoScheme;
use report::{CliError, CliResult, Context, RunReport};

#[derive(Debug, Parser)]
#[command(name = "groupoidal", version, about = "Groupoid algebras, star products and tomograms")]
struct Cli {
    /// Seed for every randomized campaign.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Worker threads for lattice sweeps; 1 is the bit-reproducible reference.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory. GROUPOIDAL_OUT, when set, takes precedence.
    #[arg(long, global = true, default_value = ".")]
    out: PathBuf,
    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check the groupoid axioms and report minimal witnesses.
    Axioms(AxiomsArgs),
    /// Compare star products with groupoid convolution.
    Equiv {
        #[command(subcommand)]
        scheme: EquivScheme,
    },
    /// Compute tomograms and optionally reconstruct the state.
    Tomo {
        #[command(subcommand)]
        scheme: TomoScheme,
    },
    /// Export the star-product kernel as CSV.
    Kernel(KernelArgs),
    /// Fock to position symbol round trip.
    Roundtrip(RoundtripArgs),
}

fn out_dir(flag: PathBuf) -> PathBuf {
    match std::env::var_os("GROUPOIDAL_OUT") {
        Some(dir) if !dir.is_empty() => PathBuf::from(dir),
        _ => flag,
    }
}

fn run(cli: Cli) -> CliResult<RunReport> {
    let threads = match cli.threads {
        Some(0) => return Err(CliError::Input("--threads must be at least 1".into())),
        Some(k) => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(k)
                .build_global()
                .map_err(|e| CliError::Input(e.to_string()))?;
            k
        }
        None => rayon::current_num_threads(),
    };
    let mut ctx = Context::new(out_dir(cli.out), cli.seed, threads);
    match &cli.command {
        Command::Axioms(args) => commands::axioms::run(args, &mut ctx),
        Command::Equiv { scheme } => commands::equiv::run(scheme, &mut ctx),
        Command::Tomo { scheme } => commands::tomo::run(scheme, &mut ctx),
        Command::Kernel(args) => commands::export::kernel_cmd(args, &mut ctx),
        Command::Roundtrip(args) => commands::export::roundtrip(args, &mut ctx),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).parse_default_env().init();
    match run(cli) {
        Ok(report) if report.passed => ExitCode::SUCCESS,
        Ok(_) => ExitCode::from(1),
        Err(err) => {
            eprintln!("groupoidal: {err}");
            err.exit_code()
        }
    }
}

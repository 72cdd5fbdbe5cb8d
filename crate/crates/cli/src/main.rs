use std::io;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use egvi::{cmd_audit, cmd_compare, cmd_oracle, cmd_run, Console};

#[derive(Parser)]
#[command(
    name = "egvi",
    version,
    about = "Extragradient and fixed-point schemes for variational inequalities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured scheme and write its trace as CSV.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed_override: Option<u64>,
    },
    /// Run several schemes on one problem and tabulate them.
    Compare {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_delimiter = ',', num_args = 0..)]
        schemes: Vec<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        seed_override: Option<u64>,
    },
    /// Audit the configured set and operators.
    Audit {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed_override: Option<u64>,
    },
    /// Solve with the reference solver and print its certificate.
    Oracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        seed_override: Option<u64>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
    let mut console = Console {
        out: &mut out,
        err: &mut err,
    };
    let status = match cli.command {
        Command::Run {
            config,
            out,
            seed_override,
        } => cmd_run(&config, &out, seed_override, &mut console),
        Command::Compare {
            config,
            schemes,
            out,
            seed_override,
        } => cmd_compare(&config, &schemes, &out, seed_override, &mut console),
        Command::Audit { config, seed_override } => cmd_audit(&config, seed_override, &mut console),
        Command::Oracle { config, seed_override } => cmd_oracle(&config, seed_override, &mut console),
    };
    ExitCode::from(status.code() as u8)
}

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use plucker_dss_cli::error::{read_bytes, read_to_string, write};
use plucker_dss_cli::config::{resolve, ConfigFile, Loaded, Overrides};
use plucker_dss_cli::{
    cmd_gen_assignment, cmd_goodmatrix, cmd_run, cmd_store, cmd_verify_assignment, CliError, CliResult, Format,
};

/// Storage simulator for equidistant subspace codes built on the Plücker embedding.
#[derive(Debug, Parser)]
#[command(name = "plucker-dss", version)]
struct Cli {
    /// TOML configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Field, e.g. gf(2), gf(7), gf(16).
    #[arg(long, global = true)]
    field: Option<String>,
    /// Hex modulus polynomial for GF(2^m).
    #[arg(long, global = true)]
    modulus: Option<String>,
    /// Dimension b; files hold b(b-1)/2 symbols.
    #[arg(long, global = true)]
    b: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Encode a file onto every node and write a snapshot.
    Store {
        input: PathBuf,
    },
    /// Run a scenario and print its report.
    Run {
        scenario: PathBuf,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Print the download schedule used for B-symbol reconstruction.
    Goodmatrix,
    /// Check repair and reconstruction after every failure set of size <= t.
    VerifyAssignment {
        #[arg(long)]
        t: usize,
        #[arg(long, value_enum, default_value_t)]
        format: Format,
    },
    /// Print the assignment's node vectors.
    GenAssignment,
}

fn load(cli: &Cli) -> CliResult<Loaded> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    resolve(
        &cfg,
        &Overrides {
            field: cli.field.clone(),
            modulus: cli.modulus.clone(),
            b: cli.b,
            seed: cli.seed,
        },
    )
}

fn emit(output: Option<&Path>, text: &str) -> CliResult<()> {
    match output {
        Some(path) => write(path, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn run(cli: &Cli) -> CliResult<bool> {
    let output = cli.output.as_deref();
    match &cli.command {
        Command::Store { input } => {
            let loaded = load(cli)?;
            let bytes = read_bytes(input)?;
            emit(output, &cmd_store(&loaded, &bytes)?.to_json())?;
            Ok(true)
        }
        Command::Run { scenario, format } => {
            let loaded = load(cli)?;
            let text = read_to_string(scenario)?;
            let outcome = cmd_run(&loaded, &text, *format)?;
            emit(output, &outcome.output)?;
            Ok(outcome.passed)
        }
        Command::Goodmatrix => {
            let b = cli
                .b
                .ok_or_else(|| CliError::Usage("goodmatrix needs --b".into()))?;
            emit(output, &cmd_goodmatrix(b)?)?;
            Ok(true)
        }
        Command::VerifyAssignment { t, format } => {
            let loaded = load(cli)?;
            let outcome = cmd_verify_assignment(&loaded, *t, *format)?;
            emit(output, &outcome.output)?;
            Ok(outcome.passed)
        }
        Command::GenAssignment => {
            let loaded = load(cli)?;
            emit(output, &cmd_gen_assignment(&loaded))?;
            Ok(true)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

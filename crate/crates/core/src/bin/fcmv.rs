use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};

use fcmv::frontend::{
    encode_cmd, load_spec, model_show, parse_automaton, verify, witness_cmd, Backend, Format, FrontendError, Report,
    VerifyOptions,
};

/// Safety verification by finite countermodel finding.
///
/// Exit status: 0 safe, 1 inconclusive, 2 unsafe at the bound, 3 usage or
/// input error.
#[derive(Parser)]
#[command(name = "fcmv", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one backend on a spec file.
    Verify {
        spec: PathBuf,
        /// fcm, monotone, rmc-forward or oracle.
        #[arg(long, default_value = "fcm")]
        backend: Backend,
        #[arg(long, default_value_t = 12)]
        max_size: usize,
        /// Seconds.
        #[arg(long, default_value_t = 300)]
        timeout: u64,
        /// Longest configuration explored by the oracle.
        #[arg(long, default_value_t = 6)]
        oracle_length: usize,
        /// Domain sizes searched in parallel.
        #[arg(long, default_value_t = 1)]
        threads: usize,
        /// Write the JSON report here.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Print the clause set of a spec.
    Encode {
        spec: PathBuf,
        /// native or mace4.
        #[arg(long, default_value = "native")]
        format: Format,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Inspect saved reports.
    Model {
        #[command(subcommand)]
        action: ModelAction,
    },
    /// Build a witness model from a separating regular set.
    Witness {
        spec: PathBuf,
        /// Automaton file for the invariant.
        #[arg(long)]
        invariant: PathBuf,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

#[derive(Subcommand)]
enum ModelAction {
    /// Re-validate a report and print its model tables.
    Show { report: PathBuf },
}

fn read(path: &PathBuf) -> Result<String, FrontendError> {
    std::fs::read_to_string(path).map_err(|e| FrontendError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn write(path: &PathBuf, text: &str) -> Result<(), FrontendError> {
    std::fs::write(path, text).map_err(|e| FrontendError::Io { path: path.display().to_string(), message: e.to_string() })
}

fn finish(report: &Report, path: Option<&PathBuf>) -> Result<u8, FrontendError> {
    println!("{report}");
    if let Some(p) = path {
        write(p, &report.to_json())?;
    }
    Ok(report.exit_code() as u8)
}

fn run(cli: Cli) -> Result<u8, FrontendError> {
    match cli.command {
        Command::Verify { spec, backend, max_size, timeout, oracle_length, threads, report } => {
            let spec = load_spec(&spec)?;
            let mut options = VerifyOptions {
                max_size,
                timeout: Duration::from_secs(timeout.max(1)),
                oracle_length,
                ..VerifyOptions::default()
            };
            options.finder.threads = threads;
            let r = verify(&spec, backend, &options)?;
            finish(&r, report.as_ref())
        }
        Command::Encode { spec, format, output } => {
            let text = encode_cmd(&load_spec(&spec)?, format)?;
            match output {
                Some(p) => write(&p, &text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Command::Model { action: ModelAction::Show { report } } => {
            let r = Report::from_json(&read(&report)?)?;
            print!("{}", model_show(&r));
            Ok(0)
        }
        Command::Witness { spec, invariant, report } => {
            let spec = load_spec(&spec)?;
            let r = parse_automaton(&read(&invariant)?)
                .map_err(|e| FrontendError::InFile { path: invariant.display().to_string(), source: Box::new(e) })?;
            let out = witness_cmd(&spec, &r)?;
            finish(&out, report.as_ref())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) => e.exit(),
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(3);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(3)
        }
    }
}

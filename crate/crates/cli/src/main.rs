use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use nform_core::io::{
    example_document, first_integrals_document, parse_report, parse_system, render_integrals, render_kernel,
    render_report, render_verification, run_kernel, run_normalize, to_canonical_json, verify_report,
    IntegralsSource, SystemDocument, EXAMPLE_NAMES,
};
use nform_core::Error;

/// Exact normal forms of polynomial ODEs and control systems
#[derive(Parser)]
#[command(name = "nform", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Complement basis of the homological operator at one degree
    Kernel {
        #[arg(long)]
        degree: u32,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Normal form, generators and certificates through --order
    Normalize {
        #[arg(long, default_value_t = 3)]
        order: u32,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Re-check a normalize report against its input system
    Verify {
        /// Report produced by `normalize --format json`
        #[arg(long)]
        report: PathBuf,
        #[command(flatten)]
        io: IoArgs,
    },
    /// Certified polynomial first integrals of the characteristic field
    FirstIntegrals {
        /// State dimension of a single-input Brunovsky pair
        #[arg(long, default_value_t = 2, conflicts_with = "uncontrollable")]
        n: usize,
        /// Use the built-in uncontrollable example instead
        #[arg(long)]
        uncontrollable: bool,
        #[arg(long, value_enum, default_value_t = Format::Pretty)]
        format: Format,
    },
    /// Print a built-in example system document
    Examples {
        #[arg(long, default_value = "brunovsky", value_parser = clap::builder::PossibleValuesParser::new(EXAMPLE_NAMES))]
        name: String,
    },
}

#[derive(Args)]
struct IoArgs {
    /// System document; read from stdin when omitted
    #[arg(long)]
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Pretty)]
    format: Format,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Pretty,
}

enum Failure {
    Input(String),
    Certificate(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Verification(_) => Failure::Certificate(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

fn read_text(path: Option<&PathBuf>) -> Result<String, Failure> {
    match path {
        Some(p) => fs::read_to_string(p).map_err(|e| Failure::Input(format!("{}: {e}", p.display()))),
        None => {
            let mut s = String::new();
            io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
            Ok(s)
        }
    }
}

fn read_system(io: &IoArgs) -> Result<SystemDocument, Failure> {
    Ok(parse_system(&read_text(io.input.as_ref())?)?)
}

fn emit(format: Format, json: String, pretty: impl FnOnce() -> String) {
    match format {
        Format::Json => print!("{json}"),
        Format::Pretty => print!("{}", pretty()),
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Kernel { degree, io } => {
            let doc = read_system(&io)?;
            let kernel = run_kernel(&doc, degree)?;
            emit(io.format, to_canonical_json(&kernel), || render_kernel(&kernel));
        }
        Command::Normalize { order, io } => {
            let doc = read_system(&io)?;
            let report = run_normalize(&doc, order)?;
            emit(io.format, to_canonical_json(&report), || render_report(&report));
            if !report.certificates.all_pass() {
                return Err(Failure::Certificate("normal form certificates failed".into()));
            }
        }
        Command::Verify { report, io } => {
            let doc = read_system(&io)?;
            let rep = parse_report(&read_text(Some(&report))?)?;
            let outcome = verify_report(&doc, &rep)?;
            emit(io.format, to_canonical_json(&outcome), || render_verification(&outcome));
            if !outcome.ok() {
                return Err(Failure::Certificate("report does not verify".into()));
            }
        }
        Command::FirstIntegrals { n, uncontrollable, format } => {
            let source = if uncontrollable {
                IntegralsSource::Uncontrollable
            } else {
                IntegralsSource::Brunovsky(n)
            };
            let doc = first_integrals_document(source)?;
            emit(format, to_canonical_json(&doc), || render_integrals(&doc));
        }
        Command::Examples { name } => {
            let doc = example_document(&name).expect("name checked by clap");
            print!("{}", to_canonical_json(&doc));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Certificate(msg)) => {
            eprintln!("certificate failure: {msg}");
            ExitCode::from(2)
        }
    }
}

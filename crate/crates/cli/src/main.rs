mod args;
mod commands;
mod exit;

use std::io::{self, Write};
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;

use args::{Cli, Command, Format};
use commands::{Failure, Outcome};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => exit::OK,
                _ => exit::USAGE,
            });
        }
    };
    let (format, outcome) = match &cli.command {
        Command::Check(a) => (a.common.format(), commands::check(a)),
        Command::Dichotomy(a) => (a.common.format(), commands::dichotomy(a)),
        Command::Extract(a) => (a.common.format(), commands::extract(a)),
        Command::Enumerate(a) => (a.common.format(), commands::enumerate(a)),
        Command::Eval(a) => (a.common.format(), commands::eval(a)),
    };
    match outcome {
        Ok(outcome) => {
            if let Err(e) = emit(format, &outcome) {
                eprintln!("error: writing output: {e}");
                return ExitCode::from(exit::FAILURE);
            }
            ExitCode::from(outcome.exit)
        }
        Err(failure) => report_failure(&failure),
    }
}

fn emit(format: Format, outcome: &Outcome) -> io::Result<()> {
    let mut out = io::stdout().lock();
    match format {
        Format::Json => writeln!(out, "{}", outcome.json),
        Format::Table => out.write_all(outcome.table.as_bytes()),
    }
}

fn report_failure(failure: &Failure) -> ExitCode {
    eprintln!("{}", failure.message());
    ExitCode::from(failure.exit_code())
}

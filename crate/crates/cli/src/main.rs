use std::io::Write;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{CommandFactory, Parser};

mod args;
mod commands;
mod output;

use args::{Cli, Command, Format};
use commands::CliError;

fn default_format(cmd: &Command) -> Format {
    match cmd {
        Command::Sweep(_) | Command::Qtable(_) => Format::Csv,
        _ => Format::Json,
    }
}

fn report(e: &CliError) -> ExitCode {
    match e {
        CliError::Usage(msg) => {
            let _ = Cli::command().error(ErrorKind::InvalidValue, msg).print();
        }
        other => eprintln!("error: {other}"),
    }
    ExitCode::from(e.exit_code())
}

fn emit(cli: &Cli, text: &str) -> Result<(), CliError> {
    match &cli.output {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    if let Err(e) = commands::init_threads() {
        return report(&e);
    }
    let run = match commands::run(&cli.command) {
        Ok(r) => r,
        Err(e) => return report(&e),
    };
    let format = cli.format.unwrap_or_else(|| default_format(&cli.command));
    if let Err(e) = emit(&cli, &run.output.render(format)) {
        return report(&e);
    }
    match run.failure {
        Some(f) => {
            eprintln!("error: {f}");
            ExitCode::from(2)
        }
        None => ExitCode::SUCCESS,
    }
}

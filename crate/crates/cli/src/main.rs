use std::fs;
use std::process::ExitCode;

use clap::Parser;
use lipcert_cli::args::{resolve, Cli, Format, Request};
use lipcert_cli::report::{profile_csv, sequence_csv};
use lipcert_cli::{replay, run, CliError, CliResult, EXIT_OK, EXIT_RUNTIME, EXIT_VIOLATION};

fn emit(cli: &Cli, text: &str) -> CliResult<()> {
    match &cli.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main_inner(cli: &Cli) -> CliResult<i32> {
    match resolve(cli)? {
        Request::Run(inputs) => {
            let (report, execution) = run(&inputs)?;
            let text = match cli.format {
                Format::Json => report.to_json(),
                Format::Csv => match (&execution.profile, &execution.sequence) {
                    (Some(p), _) => profile_csv(p),
                    (_, Some(s)) => sequence_csv(s),
                    _ => unreachable!("csv rejected for this command during resolve"),
                },
            };
            emit(cli, &text)?;
            if execution.violation {
                eprintln!("soundness violation: sampled ratio exceeds the certificate");
                return Ok(EXIT_VIOLATION);
            }
            Ok(EXIT_OK)
        }
        Request::Replay(recorded) => {
            let (fresh, identical) = replay(&recorded)?;
            emit(cli, &fresh.to_json())?;
            if identical {
                Ok(EXIT_OK)
            } else {
                eprintln!("replayed outputs differ from the recorded report");
                Ok(EXIT_RUNTIME)
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = main_inner(&cli).unwrap_or_else(|e| {
        eprintln!("error: {e}");
        e.exit_code()
    });
    ExitCode::from(code as u8)
}

use std::io::Write;
use std::process::ExitCode;

use arnorm::commands::{run, Cli};
use clap::Parser;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|text| match cli.command.out() {
        Some(path) => std::fs::write(path, text).map_err(|e| arnorm::CliError::io(path, e)),
        None => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            Ok(())
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("arnorm: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
    }
}

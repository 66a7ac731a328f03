use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use lss_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(outcome) => {
            print!("{}", outcome.text);
            let _ = std::io::stdout().flush();
            if let Some(path) = &outcome.out {
                if let Err(e) = outcome.report.write(path) {
                    eprintln!("error: {e:#}");
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(outcome.status.exit_code())
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

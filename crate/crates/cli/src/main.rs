use std::process::ExitCode;

use clap::Parser;
use woldlab_cli::{emit, run, Cli};

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // --help and --version are not failures
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e:#}");
            return ExitCode::from(1);
        }
    };
    if let Err(e) = emit(&cli, &outcome) {
        eprintln!("error: {e:#}");
        return ExitCode::from(1);
    }
    ExitCode::from(outcome.exit_code() as u8)
}

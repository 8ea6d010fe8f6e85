use bounds_cli::{dispatch, emit, Cli};
use clap::Parser;
use std::process::ExitCode;

fn main() -> ExitCode {
    // clap exits with code 2 on usage errors by itself.
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok((report, exit)) => {
            let json_path = cli.json.as_deref();
            let csv_path = cli.csv.as_deref();
            if let Err(e) = emit(&report, json_path, csv_path, true) {
                eprintln!("error writing report: {e}");
                return ExitCode::from(1);
            }
            ExitCode::from(exit as u8)
        }
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(1)
        }
    }
}

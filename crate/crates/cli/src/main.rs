use std::process::ExitCode;

use clap::Parser;
use lvs_cli::{run, Cli, EXIT_USAGE};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(report) => {
            for f in &report.failures {
                eprintln!("error: {}: {}", f.stem, f.message);
            }
            eprintln!(
                "{} file(s) written, {} failure(s)",
                report.written.len(),
                report.failures.len()
            );
            ExitCode::from(report.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE as u8)
        }
    }
}

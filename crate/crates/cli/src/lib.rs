//! Command-line front end: file formats, reports and commands.

pub mod commands;
pub mod error;
pub mod expr;
pub mod files;
pub mod report;

pub use commands::{execute, Cli, Command, Format};
pub use error::{CliError, CliResult};
pub use files::{CategoryFile, ClassDef, PairsFile};
pub use report::{Check, Outcome, Report};

/// Runs a parsed command line, prints the report
/// and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match execute(cli) {
        Ok(report) => {
            match cli.format {
                Format::Json => match report.to_json() {
                    Ok(s) => println!("{s}"),
                    Err(e) => {
                        eprintln!("error: {e}");
                        return e.exit_code();
                    }
                },
                Format::Text => print!("{}", report.to_text()),
            }
            report.exit_code()
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

use std::io::Write;

use clap::Parser;
use cvsep::cli::{run, Cli};

fn main() {
    let outcome = run(&Cli::parse());
    // A closed pipe downstream is not an error worth reporting.
    let _ = std::io::stdout().lock().write_all(outcome.stdout.as_bytes());
    let _ = std::io::stderr().lock().write_all(outcome.stderr.as_bytes());
    std::process::exit(outcome.code);
}

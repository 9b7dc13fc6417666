use std::io::Write;
use std::process::ExitCode;

use clap::Parser;

use contact_check::{execute, exit_code, render, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = execute(&cli);
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    let out = render(&result, cli.json);
    let mut stdout = std::io::stdout().lock();
    if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
        return ExitCode::from(2);
    }
    ExitCode::from(exit_code(&result) as u8)
}

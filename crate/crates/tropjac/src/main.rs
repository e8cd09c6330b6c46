use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use tropjac::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            let body = serde_json::to_string(&e.to_dto()).unwrap_or_else(|_| e.to_string());
            eprintln!("{body}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use qcorr_cli::{execute, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(&cli) {
        Ok(output) => {
            let mut stdout = std::io::stdout().lock();
            if stdout
                .write_all(output.text.as_bytes())
                .and_then(|_| stdout.flush())
                .is_err()
            {
                return ExitCode::from(1);
            }
            if output.ok {
                ExitCode::SUCCESS
            } else {
                eprintln!("qcorr: verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("qcorr: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

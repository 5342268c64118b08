use std::process::ExitCode;

use fuzzband_cli::{parse_args, summary, CliError};

fn main() -> ExitCode {
    let cfg = match parse_args(std::env::args_os()) {
        Ok(cfg) => cfg,
        Err(e @ CliError::Usage(_)) => {
            let code = e.exit_code();
            if let CliError::Usage(inner) = e {
                let _ = inner.print();
            }
            return ExitCode::from(code as u8);
        }
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match fuzzband::run(&cfg) {
        Ok(out) => {
            print!("{}", summary(&out));
            ExitCode::SUCCESS
        }
        Err(e) => {
            let e = CliError::from(e);
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

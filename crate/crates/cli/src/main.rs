use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use stressflex_cli::run::{deliver, out_path};
use stressflex_cli::{run, Cli};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli.command).and_then(|output| {
        let text = deliver(&output, out_path(&cli.command))?;
        Ok((output.exit_code, text))
    });
    match result {
        Ok((code, text)) => {
            if let Some(text) = text {
                let mut stdout = std::io::stdout().lock();
                if stdout.write_all(text.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                    return ExitCode::from(1);
                }
            }
            ExitCode::from(code)
        }
        Err(e) => {
            eprint!("{}", e.to_json());
            ExitCode::from(e.exit_code())
        }
    }
}

use clap::Parser;

use regpart_cli::{run_command, Cli, RunError};

fn main() {
    let cli = Cli::parse();
    match run_command(cli) {
        Ok(code) => std::process::exit(code),
        Err(e @ RunError::Usage(_)) => {
            eprintln!("error: {e}");
            std::process::exit(2);
        }
        // Downstream consumers (head, etc.) may close the pipe early.
        Err(RunError::Io { source, .. }) if source.kind() == std::io::ErrorKind::BrokenPipe => {
            std::process::exit(0);
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(1);
        }
    }
}

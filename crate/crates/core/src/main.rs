use clap::error::ErrorKind;
use clap::Parser;

use facering::cli::{run, Cli, EXIT_INPUT};

fn main() {
    // clap's default usage-error exit code is 2, which this tool reserves
    // for route disagreements; remap usage errors to the input-error code
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => EXIT_INPUT,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    std::process::exit(run(&cli));
}

use std::io;
use std::process::ExitCode;

use clap::Parser;

use tightdesign_cli::args::Cli;
use tightdesign_cli::{commands, exit_code};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = commands::run(cli, &mut io::stdout(), &mut io::stderr());
    if let Err(e) = &result {
        eprintln!("error: {e}");
    }
    ExitCode::from(exit_code(&result) as u8)
}

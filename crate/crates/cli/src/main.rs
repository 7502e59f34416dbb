use std::process::ExitCode;

use clap::Parser;

use teamdiv::{run, Cli, Status};

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::Unbalanced) => {
            eprintln!("teamdiv: matched sample failed the balance check");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("teamdiv {}: {e:#}", cli.command.name());
            ExitCode::FAILURE
        }
    }
}

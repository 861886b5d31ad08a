mod args;
mod commands;
mod error;
mod io;
mod output;

use std::process::ExitCode;

use clap::Parser;

use crate::args::{Cli, Command};
use crate::error::exit;
use crate::output::Printer;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            let code = if err.use_stderr() { exit::USAGE } else { exit::OK };
            return ExitCode::from(code);
        }
    };
    let printer = Printer::new(cli.format);
    let result = match cli.command {
        Command::Genpad(args) => commands::genpad::run(&args, printer),
        Command::Encrypt(args) => commands::crypt::encrypt(&args, printer),
        Command::Decrypt(args) => commands::crypt::decrypt(&args, printer),
        Command::Verify(args) => commands::verify::run(&args, printer),
        Command::Entropy(args) => commands::entropy::run(&args, printer),
        Command::Demo => commands::demo::run(printer),
    };
    match result {
        Ok(true) => ExitCode::from(exit::OK),
        Ok(false) => ExitCode::from(exit::CHECK_FAILED),
        Err(err) => {
            eprintln!("qpp: {err}");
            ExitCode::from(err.code)
        }
    }
}

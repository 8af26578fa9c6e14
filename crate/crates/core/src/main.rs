use clap::Parser;
use lame_weyl::cli::{main_with, Cli};
use std::process::ExitCode;

fn main() -> ExitCode {
    main_with(Cli::parse())
}

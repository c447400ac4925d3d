use std::process::ExitCode;

fn main() -> ExitCode {
    bargwig_cli::run(std::env::args_os())
}

use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(bopshox_cli::run(std::env::args_os()))
}

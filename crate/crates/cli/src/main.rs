use std::process::ExitCode;

fn main() -> ExitCode {
    swcp_cli::cli::main_with_args(std::env::args_os())
}

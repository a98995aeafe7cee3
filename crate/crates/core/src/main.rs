use std::process::ExitCode;

fn main() -> ExitCode {
    lgcoh::cli::main_with_args(std::env::args_os())
}

use std::process::ExitCode;

fn main() -> ExitCode {
    gsh_shrink_cli::main_with_args(std::env::args_os())
}

use std::process::ExitCode;

fn main() -> ExitCode {
    fastmix::cli::run(std::env::args_os())
}

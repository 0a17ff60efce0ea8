use std::process::ExitCode;

fn main() -> ExitCode {
    fourval::cli::run()
}

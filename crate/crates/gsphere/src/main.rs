use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(gsphere::cli::run())
}

use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(arbor_cubic::cli::run(std::env::args()) as u8)
}

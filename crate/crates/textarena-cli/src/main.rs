use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(textarena_cli::run(std::env::args_os()) as u8)
}

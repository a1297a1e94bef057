use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    ExitCode::from(wavecascade::harness::cli_main(&args) as u8)
}

use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let (report, code) = collat_cli::run(&args);
    print!("{report}");
    ExitCode::from(code as u8)
}

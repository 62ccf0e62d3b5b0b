use std::process::ExitCode;

fn main() -> ExitCode {
    let out = wittcalc::cli::run(std::env::args_os());
    println!("{}", out.stdout.trim_end());
    ExitCode::from(out.code as u8)
}

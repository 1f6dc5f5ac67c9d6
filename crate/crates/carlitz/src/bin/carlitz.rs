use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = carlitz::commands::run_args(std::env::args_os());
    if !out.stdout.is_empty() {
        let mut stdout = std::io::stdout().lock();
        let _ = writeln!(stdout, "{}", out.stdout.trim_end());
    }
    if !out.stderr.is_empty() {
        eprintln!("{}", out.stderr.trim_end());
    }
    ExitCode::from(out.code as u8)
}

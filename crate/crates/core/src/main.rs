use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    let (mut out, mut err) = (stdout.lock(), stderr.lock());
    let code = arrc::cli::main_with(std::env::args().collect(), &mut out, &mut err);
    let _ = out.flush();
    ExitCode::from(code as u8)
}

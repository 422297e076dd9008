use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let (code, out) = msdiag::cli::execute_command(std::env::args_os().skip(1));
    let mut stream: Box<dyn Write> = if code == msdiag::cli::EXIT_INPUT {
        Box::new(std::io::stderr())
    } else {
        Box::new(std::io::stdout())
    };
    let _ = stream.write_all(out.as_bytes());
    ExitCode::from(code as u8)
}

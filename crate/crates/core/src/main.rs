use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = std::panic::catch_unwind(|| qconfluent::cli::run(std::env::args_os()))
        .unwrap_or_else(|_| qconfluent::cli::RunOutput {
            stdout: String::new(),
            stderr: "error (internal): unexpected panic\n".into(),
            code: 2,
        });
    let _ = std::io::stdout().write_all(out.stdout.as_bytes());
    let _ = std::io::stderr().write_all(out.stderr.as_bytes());
    ExitCode::from(out.code as u8)
}

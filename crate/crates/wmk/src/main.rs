use std::io;
use std::process::ExitCode;

fn main() -> ExitCode {
    let env = std::env::var(wmk::cli::BOUNDS_ENV).ok();
    let status = wmk::run(
        std::env::args_os(),
        env.as_deref(),
        &mut io::stdout(),
        &mut io::stderr(),
    );
    ExitCode::from(status as u8)
}

use std::io;
use std::panic;
use std::process::ExitCode;

fn main() -> ExitCode {
    let code = panic::catch_unwind(|| {
        let (mut out, mut err) = (io::stdout().lock(), io::stderr().lock());
        infocat_cli::run(std::env::args_os(), &mut out, &mut err)
    })
    .unwrap_or(infocat_cli::EXIT_INTERNAL);
    ExitCode::from(code as u8)
}

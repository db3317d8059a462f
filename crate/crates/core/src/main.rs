use std::io::Write;
use std::process::ExitCode;

use arclift::cli::{run, NWORK_ENV};

fn main() -> ExitCode {
    let env = std::env::var(NWORK_ENV).ok();
    let out = run(std::env::args_os(), env.as_deref());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    let _ = std::io::stdout().flush();
    ExitCode::from(out.code as u8)
}

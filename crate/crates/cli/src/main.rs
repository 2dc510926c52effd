use std::io::Write;
use std::process::ExitCode;

fn main() -> ExitCode {
    let out = specseq::run(std::env::args_os());
    print!("{}", out.stdout);
    std::io::stdout().flush().ok();
    eprint!("{}", out.stderr);
    ExitCode::from(out.code as u8)
}

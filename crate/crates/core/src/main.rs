use std::process::ExitCode;

fn main() -> ExitCode {
    netsteer::cli::main_entry()
}

use std::process::ExitCode;

fn main() -> ExitCode {
    ExitCode::from(qudit_teleport::cli::main_entry())
}

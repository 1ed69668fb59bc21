use std::process::ExitCode;

fn main() -> ExitCode {
    superkern::cli::run()
}

use std::process::ExitCode;

use clap::Parser;
use frale_cli::commands::{run, Cli};
use frale_cli::{exit_code, init_thread_pool};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let threads = std::env::var("FRALE_THREADS").ok();
    let result = init_thread_pool(threads.as_deref()).and_then(|()| run(&cli));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

use clap::Parser;

use shiftdiag::cli::{exit_code_for, run, Cli};

fn main() {
    let cli = Cli::parse();
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    if let Err(e) = run(cli, &mut lock) {
        drop(lock);
        eprintln!("error: {e}");
        std::process::exit(exit_code_for(&e));
    }
}

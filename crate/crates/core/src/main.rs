use clap::Parser;

use thwaves::cli::{configure_threads, run, Cli};

fn main() {
    let cli = Cli::parse();
    let code = match configure_threads().and_then(|()| run(cli)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    };
    std::process::exit(code);
}

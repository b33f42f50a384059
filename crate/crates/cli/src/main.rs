use clap::Parser;
use igt_cli::{error_json, run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            std::process::exit(out.code);
        }
        Err(e) => {
            eprintln!("{}", error_json(&e));
            std::process::exit(e.exit_code());
        }
    }
}

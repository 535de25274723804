use clap::Parser;
use speclab_cli::{exit_code, run, Cli};

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(outcome) => {
            for c in &outcome.summary.checks {
                println!("{} {}: measured {} bound {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.measured, c.bound);
            }
            println!("wrote {}", outcome.dir.display());
            std::process::exit(exit_code(&outcome.summary));
        }
        Err(e) => {
            eprintln!("speclab: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

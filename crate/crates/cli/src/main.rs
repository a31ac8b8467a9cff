use clap::Parser;

use risp_dyn_cli::{run, Cli, RunConfig};

fn main() {
    let cli = Cli::parse();
    let result = RunConfig::from_cli(&cli).and_then(|cfg| run(&cfg).map(|names| (cfg, names)));
    match result {
        Ok((cfg, names)) => {
            for n in names {
                println!("{}", cfg.out.join(n).display());
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

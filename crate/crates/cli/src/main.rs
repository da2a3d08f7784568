mod args;
mod commands;
mod config;
mod error;
mod ingest;

use clap::error::ErrorKind;
use clap::Parser;

fn main() {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            std::process::exit(code);
        }
    };

    let mut logger = env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"));
    if cli.quiet {
        logger.filter_level(log::LevelFilter::Error);
    }
    logger.init();

    if let Err(e) = commands::run(cli) {
        eprintln!("softskill: {e}");
        std::process::exit(e.exit_code());
    }
}

mod args;
mod commands;

use std::process::ExitCode;

use clap::{CommandFactory, Parser};

use args::{Cli, Command};

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    if let Command::Search(search) = &cli.command {
        if let Err(message) = commands::check_search(search) {
            Cli::command()
                .error(clap::error::ErrorKind::MissingRequiredArgument, message)
                .exit();
        }
    }
    let result = match cli.command {
        Command::Inspect(space) => commands::inspect(&space),
        Command::Enumerate { space, limit } => commands::enumerate(&space, limit),
        Command::Search(search) => commands::search(&search),
        Command::DumpTable {
            space,
            oracle_seed,
            out,
        } => commands::dump_table(&space, oracle_seed, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

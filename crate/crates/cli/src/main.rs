//! `gsp`: sampling set selection and reconstruction of graph signals from the command line.

mod args;
mod bench;
mod error;
mod files;
mod gen;
mod plot;
mod reconstruct;
mod select;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(name = "gsp", version, about = "Graph signal sampling in arbitrary Hilbert spaces")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Random geometric graph with its inner product diagonals.
    Gen(gen::GenArgs),
    /// Greedy sampling set selection on a generated graph.
    Select(select::SelectArgs),
    /// Reconstruct a signal from samples on the selected vertices.
    Reconstruct(reconstruct::ReconstructArgs),
    /// Monte-Carlo experiments comparing inner products.
    #[command(subcommand)]
    Bench(bench::BenchCommand),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Gen(a) => gen::run(a),
        Command::Select(a) => select::run(a),
        Command::Reconstruct(a) => reconstruct::run(a),
        Command::Bench(c) => bench::run(c),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

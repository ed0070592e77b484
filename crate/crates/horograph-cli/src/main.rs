//! Command line front end for the horograph library.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(
    name = "horograph",
    version,
    about = "Minimal graphs over semi-ideal polygons: construction, checks, solving and diagnostics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a polygon with prescribed limit ends and write it as JSON.
    Construct(commands::ConstructArgs),
    /// Evaluate the solvability criteria for a stored polygon.
    Check(commands::CheckArgs),
    /// Solve the minimal graph equation on a capped truncation.
    Solve(commands::SolveArgs),
    /// Tabulate flux ratios across one edge over a list of cap heights.
    Sweep(commands::SweepArgs),
    /// Conjugate height diagnostics for a solved graph.
    Conjugate(commands::ConjugateArgs),
    /// Rewrite a stored solution as OBJ geometry.
    Export(commands::ExportArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Construct(args) => commands::construct(args),
        Command::Check(args) => commands::check(args),
        Command::Solve(args) => commands::solve_graph(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Conjugate(args) => commands::conjugate(args),
        Command::Export(args) => commands::export(args),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

//! Command-line surface: metric evaluation, ansatz search, grid search,
//! training, and table reproduction. Outputs are machine-parsable CSV
//! and JSON; every command is deterministic under a fixed seed.

mod commands;
mod data_source;

use clap::{Parser, Subcommand};

/// Exit code for invalid configuration or references.
const EXIT_USAGE: i32 = 2;
/// Exit code when a request exceeds the simulator capacity.
const EXIT_CAPACITY: i32 = 3;

/// Largest register the exact statevector backend accepts.
const MAX_QUBITS: usize = 20;

#[derive(Parser)]
#[command(
    name = "qcnn-forge",
    about = "Quantum-circuit metrics, ansatz search and QCNN training on exact statevectors",
    version
)]
struct Cli {
    /// Worker threads (default: machine parallelism). Results do not
    /// depend on this.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate expressibility, entanglement and the objective for one
    /// circuit.
    Metrics(commands::MetricsArgs),
    /// Regenerate the published evaluation tables and compare.
    ReproduceTables(commands::ReproduceArgs),
    /// Run the ansatz search.
    Search(commands::SearchArgs),
    /// Train one model on a classification task.
    Train(commands::TrainArgs),
    /// Evaluate a trained parameter set on the test split.
    Evaluate(commands::EvaluateArgs),
    /// Train every grid-search model at a qubit count and rank them.
    GridSearch(commands::GridSearchArgs),
    /// Print the fragment-processing memory bound and its liveness
    /// oracle.
    MemoryBound(commands::MemoryBoundArgs),
}

fn main() {
    let cli = Cli::parse();
    if let Some(threads) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .ok();
    }
    let result = match cli.command {
        Command::Metrics(args) => commands::run_metrics(args),
        Command::ReproduceTables(args) => commands::run_reproduce(args),
        Command::Search(args) => commands::run_search_cmd(args),
        Command::Train(args) => commands::run_train(args),
        Command::Evaluate(args) => commands::run_evaluate(args),
        Command::GridSearch(args) => commands::run_grid_search(args),
        Command::MemoryBound(args) => commands::run_memory_bound(args),
    };
    match result {
        Ok(()) => {}
        Err(e) => {
            eprintln!("error: {e:#}");
            let code = if e.to_string().contains("capacity") {
                EXIT_CAPACITY
            } else {
                EXIT_USAGE
            };
            std::process::exit(code);
        }
    }
}

fn check_capacity(num_qubits: usize) -> anyhow::Result<()> {
    if num_qubits > MAX_QUBITS {
        anyhow::bail!(
            "capacity exceeded: {num_qubits} qubits past the {MAX_QUBITS}-qubit statevector limit"
        );
    }
    Ok(())
}

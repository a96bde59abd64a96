use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use markov_growth::action::Exponent;
use markov_growth_io::commands::{
    parse_exponent, parse_pair, DEFAULT_BIG_NMAX, DEFAULT_LADDER_GROWTH, DEFAULT_LADDER_START,
    DEFAULT_TOL,
};
use markov_growth_io::{run, Builtin, CliError, Command, RunConfig};

/// Markov codings, exact sphere counts, growth asymptotics and Cesàro
/// spherical averages.
#[derive(Parser)]
#[command(name = "markov-growth", version)]
struct Cli {
    #[command(subcommand)]
    command: Sub,
}

#[derive(Subcommand)]
enum Sub {
    /// Exact sphere sizes and pair path counts as CSV.
    Count(Common),
    /// Growth descriptors with validation against exact counts, as CSV.
    Analyze(Common),
    /// Check that a graph is a Markov coding of a (semi)group.
    Verify(Common),
    /// Spherical and Cesàro averages of an observable under a finite action.
    Simulate(Common),
}

#[derive(Args)]
struct Common {
    /// Graph file.
    #[arg(long)]
    graph: Option<String>,
    /// Built-in coding: free_semigroup:k, free_group:k, cyclic:n, table:<path>.
    #[arg(long)]
    builtin: Option<Builtin>,
    /// Oracle for `verify` with --graph (same syntax as --builtin).
    #[arg(long)]
    oracle: Option<Builtin>,
    /// Action file for `simulate`.
    #[arg(long)]
    action: Option<String>,
    /// Largest path length (count/analyze: 200; verify: 7 for free
    /// constructions, diameter + 2 for finite groups).
    #[arg(long)]
    nmax: Option<usize>,
    /// Largest Cesàro index for `simulate`.
    #[arg(long = "Nmax", default_value_t = DEFAULT_BIG_NMAX)]
    big_nmax: usize,
    /// Norm exponent: a real >= 1 or `inf`.
    #[arg(long, default_value = "1", value_parser = parse_exponent)]
    p: Exponent,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Seed for the random observable.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (count/analyze/verify) or file prefix (simulate).
    #[arg(long)]
    out: Option<String>,
    /// Vertex pair `u,v`; repeatable.
    #[arg(long = "pairs", value_parser = parse_pair)]
    pairs: Vec<(String, String)>,
    /// First rung of the convergence ladder.
    #[arg(long, default_value_t = DEFAULT_LADDER_START)]
    ladder_start: usize,
    /// Ratio between consecutive ladder rungs.
    #[arg(long, default_value_t = DEFAULT_LADDER_GROWTH)]
    ladder_growth: f64,
    /// Observable values, comma separated, instead of a random one.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    phi: Option<Vec<f64>>,
}

fn config(command: Command, c: Common) -> RunConfig {
    RunConfig {
        command,
        graph_path: c.graph,
        builtin: c.builtin,
        action_path: c.action,
        oracle: c.oracle,
        n_max: c.nmax,
        big_n_max: c.big_nmax,
        p: c.p,
        tol: c.tol,
        seed: c.seed,
        out: c.out,
        pairs: c.pairs,
        ladder_start: c.ladder_start,
        ladder_growth: c.ladder_growth,
        phi: c.phi,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match cli.command {
        Sub::Count(c) => config(Command::Count, c),
        Sub::Analyze(c) => config(Command::Analyze, c),
        Sub::Verify(c) => config(Command::Verify, c),
        Sub::Simulate(c) => config(Command::Simulate, c),
    };
    let result = run(&cfg).and_then(|outcome| {
        let text = outcome.emit()?.to_string();
        Ok((outcome.exit_code, text))
    });
    match result {
        Ok((code, text)) => {
            print!("{text}");
            ExitCode::from(code as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let CliError::Coding(markov_growth::codings::CodingError::Count(_)) = e {
                eprintln!("(enumeration cap exceeded; lower --nmax)");
            }
            ExitCode::from(2)
        }
    }
}

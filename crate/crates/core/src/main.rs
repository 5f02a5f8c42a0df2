use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod cli;

use cli::{CliError, Output};

#[derive(Parser)]
#[command(name = "tropiclust", version, about = "Exact cluster-seed mutation, tropical data, characters and quantum data")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
#[group(required = true, multiple = false)]
pub struct Source {
    /// Built-in seed: a2, a2f, markov, cns.
    #[arg(long)]
    fixture: Option<String>,
    /// Seed JSON file (`-` for stdin).
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Check the seed (and its quantum datum, if any).
    Validate {
        #[command(flatten)]
        source: Source,
    },
    /// Mutate along a path and print the data after every step.
    Trace {
        #[command(flatten)]
        source: Source,
        /// Comma-separated mutation directions.
        #[arg(long, default_value = "")]
        path: String,
        /// Comma-separated subset of b,g,c,f,a,x,lambda.
        #[arg(long)]
        show: Option<String>,
        #[arg(long)]
        json: bool,
        /// Use the exchange polynomials of a generalized rank-2 seed.
        #[arg(long)]
        generalized: bool,
        /// Refuse steps whose polynomials would exceed this many terms.
        #[arg(long, default_value_t = 100_000)]
        max_terms: usize,
    },
    /// Enumerate the exchange graph up to relabeling.
    Graph {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 1000)]
        max_seeds: usize,
        #[arg(long, conflicts_with = "json")]
        dot: bool,
        #[arg(long)]
        json: bool,
    },
    /// Run every invariant along random mutation paths.
    Audit {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value_t = 8)]
        depth: usize,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        /// RNG seed; the TROPICLUST_RNG environment variable takes precedence.
        #[arg(long, default_value_t = 0)]
        seed_rng: u64,
        /// Term budget for characters; past it a path continues with tropical data only.
        #[arg(long, default_value_t = 2000)]
        max_terms: usize,
        #[arg(long)]
        no_characters: bool,
        #[arg(long)]
        no_quantum: bool,
        #[arg(long)]
        json: bool,
    },
    /// Solve for compatible quantum data.
    Quantize {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        json: bool,
    },
    /// Write the seed (after an optional path) as canonical JSON.
    Export {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "")]
        path: String,
        /// Attach a solved quantum datum when the file has none.
        #[arg(long)]
        quantize: bool,
    },
}

fn run(cli: Cli) -> Result<Output, CliError> {
    match cli.command {
        Command::Validate { source } => cli::validate(&source),
        Command::Trace { source, path, show, json, generalized, max_terms } => {
            cli::trace::run(&source, &path, show.as_deref(), json, generalized, max_terms)
        }
        Command::Graph { source, max_seeds, dot, json } => cli::graph(&source, max_seeds, dot, json),
        Command::Audit { source, depth, samples, seed_rng, max_terms, no_characters, no_quantum, json } => {
            let rng = match std::env::var("TROPICLUST_RNG") {
                Ok(v) => v
                    .trim()
                    .parse()
                    .map_err(|_| CliError::usage(format!("TROPICLUST_RNG: `{v}` is not an unsigned integer")))?,
                Err(_) => seed_rng,
            };
            let opts = cli::AuditArgs { depth, samples, rng, max_terms, characters: !no_characters, quantum: !no_quantum, json };
            cli::audit(&source, &opts)
        }
        Command::Quantize { source, json } => cli::quantize(&source, json),
        Command::Export { source, path, quantize } => cli::export(&source, &path, quantize),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (out, code, err) = match run(cli) {
        Ok(o) => (o.stdout, o.code, o.stderr),
        Err(e) => (e.stdout, e.code, Some(e.message)),
    };
    let mut stdout = std::io::stdout().lock();
    let _ = stdout.write_all(out.as_bytes());
    let _ = stdout.flush();
    if let Some(e) = err {
        eprintln!("{e}");
    }
    ExitCode::from(code)
}

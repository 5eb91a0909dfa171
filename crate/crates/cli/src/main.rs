//! Exact computations with toric 1-motives over ℚ.
//!
//! Exit codes: 0 success, 1 verification failure, 2 parse/usage error.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use cartier_cli::commands::{
    cmd_describe, cmd_extgroups, cmd_pairing, cmd_random, cmd_verify, cmd_verify_corpus, CmdOutput,
};

#[derive(Parser)]
#[command(
    name = "cartier",
    version,
    about = "Exact computations with toric 1-motives over Q: Cartier duals, de Rham realizations, pairings, Ext groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct InputArgs {
    /// Motive document to read
    #[arg(long, value_name = "PATH")]
    input: PathBuf,
    /// Write the result here instead of stdout
    #[arg(long, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Emit machine-readable JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct WindowArgs {
    /// Window primes (comma separated), overriding the document
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    primes: Option<Vec<u64>>,
    /// Window denominator bound N ≥ 1, overriding the document
    #[arg(long, value_name = "N")]
    denominator_bound: Option<u32>,
}

#[derive(Subcommand)]
enum Command {
    /// Motive, dual, universal extension, de Rham dimensions, weights
    Describe {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Canonical connection, curvature, pairing matrix and certificates
    Pairing {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Hom, Ext and Ext♮ presentations inside the window
    Extgroups {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Run every invariant and exact-sequence check
    Verify {
        /// Motive document to read (or use --corpus)
        #[arg(long, value_name = "PATH", conflicts_with = "corpus")]
        input: Option<PathBuf>,
        /// Verify the bundled corpus instead of a file
        #[arg(long)]
        corpus: bool,
        /// Write the result here instead of stdout
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
        /// Emit machine-readable JSON
        #[arg(long)]
        json: bool,
        #[command(flatten)]
        window: WindowArgs,
    },
    /// Generate a reproducible random motive document
    Random {
        /// Lattice rank
        #[arg(long)]
        r: usize,
        /// Torus rank
        #[arg(long)]
        d: usize,
        /// Prime support of the entries
        #[arg(long, value_name = "LIST", value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Generator seed
        #[arg(long)]
        seed: u64,
        /// Write the document here instead of stdout
        #[arg(long, value_name = "PATH")]
        output: Option<PathBuf>,
    },
}

fn read_input(path: &PathBuf) -> Result<String, String> {
    fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn deliver(out: CmdOutput, output: Option<&PathBuf>) -> Result<u8, String> {
    match output {
        Some(path) => fs::write(path, &out.text)
            .map_err(|e| format!("cannot write {}: {e}", path.display()))?,
        None => print!("{}", out.text),
    }
    Ok(out.exit_code as u8)
}

fn run() -> Result<u8, String> {
    let cli = Cli::parse();
    match cli.command {
        Command::Describe { input } => {
            let text = read_input(&input.input)?;
            deliver(cmd_describe(&text, input.json)?, input.output.as_ref())
        }
        Command::Pairing { input } => {
            let text = read_input(&input.input)?;
            deliver(cmd_pairing(&text, input.json)?, input.output.as_ref())
        }
        Command::Extgroups { input, window } => {
            let text = read_input(&input.input)?;
            deliver(
                cmd_extgroups(
                    &text,
                    window.primes.as_deref(),
                    window.denominator_bound,
                    input.json,
                )?,
                input.output.as_ref(),
            )
        }
        Command::Verify {
            input,
            corpus,
            output,
            json,
            window,
        } => {
            let out = if corpus {
                cmd_verify_corpus(window.primes.as_deref(), window.denominator_bound, json)?
            } else {
                let path = input.ok_or_else(|| "verify needs --input or --corpus".to_string())?;
                let text = read_input(&path)?;
                cmd_verify(
                    &text,
                    window.primes.as_deref(),
                    window.denominator_bound,
                    json,
                )?
            };
            deliver(out, output.as_ref())
        }
        Command::Random {
            r,
            d,
            primes,
            seed,
            output,
        } => {
            let out = cmd_random(r, d, primes.as_deref().unwrap_or(&[]), seed)?;
            deliver(out, output.as_ref())
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code),
        Err(message) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kummerian_cli::commands::{self, Output, PairSource, EXIT_INPUT};

#[derive(Parser)]
#[command(name = "kummerian", version, about = "Kummerian property checks for finitely presented pro-p groups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Working p-adic precision.
    #[arg(long)]
    precision: Option<u32>,
    /// Work budget for searches.
    #[arg(long, default_value_t = 1_000_000)]
    budget: u64,
    /// Also write the result as JSON to this path.
    #[arg(long)]
    json: Option<PathBuf>,
    /// Seed for sampled checks.
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a file and validate the orientation.
    Validate {
        /// Presentation file, or `corpus:NAME` for a bundled one.
        file: String,
        #[command(flatten)]
        common: Common,
    },
    /// Run the Kummer criterion.
    KummerCheck {
        /// Presentation file, or `corpus:NAME` for a bundled one.
        file: String,
        #[command(flatten)]
        common: Common,
    },
    /// Enumerate the orientations that make the presentation Kummerian.
    OrientSearch {
        /// Presentation file, or `corpus:NAME` for a bundled one.
        file: String,
        #[command(flatten)]
        common: Common,
    },
    /// Compute Ker θ / K and its torsion.
    Torsion {
        /// Presentation file, or `corpus:NAME` for a bundled one.
        file: String,
        #[command(flatten)]
        common: Common,
    },
    /// Print the cup-product pairings and relations.
    Ring {
        /// Presentation file, or `corpus:NAME` for a bundled one.
        file: String,
        #[command(flatten)]
        common: Common,
    },
    /// Decide a Massey product.
    Massey {
        /// Presentation file, or `corpus:NAME` for a bundled one.
        file: String,
        /// Comma separated classes, e.g. `x,y0,x+2*y1`.
        #[arg(long)]
        classes: String,
        /// defined, vanish or target.
        #[arg(long, default_value = "vanish")]
        mode: String,
        /// Target values on the relator duals for `--mode target`.
        #[arg(long)]
        beta: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Check cyclic Massey vanishing over pairs with vanishing cup product.
    MasseyCyclic {
        /// Presentation file, or `corpus:NAME` for a bundled one.
        file: String,
        /// Run every pair of classes.
        #[arg(long, conflicts_with = "sample")]
        exhaustive: bool,
        /// Sample this many eligible pairs.
        #[arg(long)]
        sample: Option<usize>,
        #[command(flatten)]
        common: Common,
    },
    /// Build a Reidemeister–Schreier presentation of a finite-index kernel.
    Subgroup {
        /// Presentation file, or `corpus:NAME` for a bundled one.
        file: String,
        /// Images of the generators, e.g. `x:1,0; y0:0,1`.
        #[arg(long)]
        map: String,
        /// Cyclic factors of the target, e.g. `p,p`.
        #[arg(long)]
        target: String,
        /// Write the kernel presentation file here.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Run every check of the bundled corpus.
    CorpusReport {
        /// Write a markdown report here.
        #[arg(long)]
        markdown: Option<PathBuf>,
        /// Include timings in the JSON.
        #[arg(long)]
        timings: bool,
        #[command(flatten)]
        common: Common,
    },
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), i32> {
    std::fs::write(path, contents).map_err(|e| {
        eprintln!("error: {}: {e}", path.display());
        EXIT_INPUT
    })
}

fn finish(out: Output, common: &Common) -> i32 {
    print!("{}", out.text);
    if let Some(path) = &common.json {
        let text = serde_json::to_string_pretty(&out.json).expect("valid json") + "\n";
        if let Err(code) = write_file(path, &text) {
            return code;
        }
    }
    out.exit
}

fn run(cli: Cli) -> i32 {
    match cli.command {
        Command::Validate { file, common } => finish(commands::validate(&file, common.precision), &common),
        Command::KummerCheck { file, common } => finish(commands::kummer_check(&file, common.precision), &common),
        Command::OrientSearch { file, common } => {
            finish(commands::orient_search(&file, common.precision, common.budget), &common)
        }
        Command::Torsion { file, common } => finish(commands::torsion(&file, common.precision), &common),
        Command::Ring { file, common } => finish(commands::ring(&file), &common),
        Command::Massey { file, classes, mode, beta, common } => finish(
            commands::massey(&file, &classes, &mode, beta.as_deref(), common.budget),
            &common,
        ),
        Command::MasseyCyclic { file, exhaustive, sample, common } => {
            let source = match (exhaustive, sample) {
                (_, Some(k)) => PairSource::Sample(k),
                (true, None) => PairSource::Exhaustive,
                (false, None) => PairSource::Sample(1000),
            };
            finish(commands::massey_cyclic(&file, source, common.seed, common.budget), &common)
        }
        Command::Subgroup { file, map, target, out, common } => {
            let result = commands::subgroup(&file, &map, &target);
            if let (Some(path), Some(text)) = (&out, result.json.get("file").and_then(|v| v.as_str())) {
                if let Err(code) = write_file(path, text) {
                    return code;
                }
            }
            finish(result, &common)
        }
        Command::CorpusReport { markdown, timings, common } => {
            let (out, md) =
                commands::corpus_report(common.precision.unwrap_or(4), common.budget, common.seed, timings);
            if let Some(path) = &markdown {
                if let Err(code) = write_file(path, &md) {
                    return code;
                }
            }
            finish(out, &common)
        }
    }
}

fn main() -> ExitCode {
    let code = run(Cli::parse());
    ExitCode::from(code as u8)
}

mod cache;
mod commands;
mod config;
mod error;
mod files;
mod manifest;
mod tables;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use simrepair_core::metrics::{DeckardMode, MetricKind};
use simrepair_core::ranking::{Level, TieMode};

use crate::commands::RankRequest;
use crate::config::{parse_combined, RunConfig};
use crate::error::CliError;

/// Rank candidate repair ingredients and contexts by code similarity and
/// evaluate the rankings against historical fixes.
#[derive(Parser)]
#[command(name = "simrepair", version)]
struct Cli {
    /// TOML config file; flags override it.
    #[arg(long, short, global = true)]
    config: Option<PathBuf>,
    /// Directory for artifacts (default: `run`).
    #[arg(long, global = true)]
    run_dir: Option<PathBuf>,
    /// Score cache location (default: <run-dir>/cache).
    #[arg(long, global = true, env = "SIMREPAIR_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// Seed for embedding training and task sampling.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Overwrite existing outputs.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Segment a source tree into statements and methods.
    Index {
        #[arg(long)]
        corpus: Option<PathBuf>,
        /// Glob over corpus-relative paths; repeatable.
        #[arg(long = "filter")]
        filters: Vec<String>,
    },
    /// Train the statement and method embedding models.
    Train,
    /// Extract repair tasks from unified diffs.
    Tasks {
        #[arg(long)]
        diffs: Option<PathBuf>,
        #[arg(long)]
        project: Option<String>,
        /// Sample at most this many tasks.
        #[arg(long)]
        limit: Option<usize>,
    },
    /// Rank candidates for one task.
    Rank {
        #[arg(long)]
        task: String,
        #[arg(long, value_enum, default_value = "ingredient")]
        level: LevelArg,
        #[arg(long, default_value = "tfidf")]
        metric: MetricKind,
        /// CONTEXT:INGREDIENT metrics for `--level combined`.
        #[arg(long)]
        combined: Option<String>,
        #[arg(long, value_enum)]
        tie_mode: Option<TieArg>,
        #[arg(long, default_value_t = 10)]
        top: usize,
        /// Write the full ranking as CSV.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Rank every task under every metric and write the report and tables.
    Evaluate {
        /// Comma-separated subset of lcs, tfidf, doc2vec, deckard.
        #[arg(long, value_delimiter = ',')]
        metrics: Vec<MetricKind>,
        /// CONTEXT:INGREDIENT metrics of the combined ranking, or `none`.
        #[arg(long)]
        combined: Option<String>,
        #[arg(long, value_enum)]
        tie_mode: Option<TieArg>,
        #[arg(long, value_enum)]
        deckard_mode: Option<DeckardArg>,
        /// Histogram bins of the normalized-rank density table.
        #[arg(long)]
        bins: Option<usize>,
        /// Also write every ranking to tables/rankings.csv.
        #[arg(long)]
        export_rankings: bool,
    },
    /// Print the summary of an existing report.
    Stats,
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    Ingredient,
    Context,
    Combined,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieArg {
    Positional,
    Pessimistic,
}

#[derive(Clone, Copy, ValueEnum)]
enum DeckardArg {
    Kinds,
    KindsAndPairs,
}

impl From<TieArg> for TieMode {
    fn from(t: TieArg) -> Self {
        match t {
            TieArg::Positional => TieMode::Positional,
            TieArg::Pessimistic => TieMode::Pessimistic,
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(d) = cli.run_dir {
        cfg.run_dir = d;
    }
    if let Some(d) = cli.cache_dir {
        cfg.cache_dir = Some(d);
    }
    if let Some(s) = cli.seed {
        cfg.seed = s;
    }
    if let Some(j) = cli.jobs {
        cfg.jobs = j;
    }
    let combined = |s: &str| parse_combined(s).map_err(|e| CliError::usage(format!("--combined: {e}")));
    let mut rank_request = None;
    let mut export_rankings = false;
    match &cli.command {
        Command::Index { corpus, filters } => {
            if corpus.is_some() {
                cfg.corpus = corpus.clone();
            }
            if !filters.is_empty() {
                cfg.filters = filters.clone();
            }
        }
        Command::Train | Command::Stats => {}
        Command::Tasks { diffs, project, limit } => {
            if diffs.is_some() {
                cfg.diffs = diffs.clone();
            }
            if project.is_some() {
                cfg.project = project.clone();
            }
            if let Some(n) = limit {
                cfg.sample_limit = *n;
            }
        }
        Command::Rank { task, level, metric, combined: pair, tie_mode, top, out } => {
            if let Some(p) = pair {
                cfg.combined = combined(p)?;
            }
            if let Some(t) = tie_mode {
                cfg.tie_mode = (*t).into();
            }
            let level = match level {
                LevelArg::Ingredient => Level::Ingredient,
                LevelArg::Context => Level::Context,
                LevelArg::Combined => Level::Combined,
            };
            rank_request = Some(RankRequest { task: task.clone(), level, metric: *metric, top: *top, out: out.clone() });
        }
        Command::Evaluate { metrics, combined: pair, tie_mode, deckard_mode, bins, export_rankings: export } => {
            if !metrics.is_empty() {
                let mut seen = Vec::new();
                for m in metrics {
                    if !seen.contains(m) {
                        seen.push(*m);
                    }
                }
                cfg.metrics = seen;
            }
            if let Some(p) = pair {
                cfg.combined = combined(p)?;
            }
            if let Some(t) = tie_mode {
                cfg.tie_mode = (*t).into();
            }
            if let Some(d) = deckard_mode {
                cfg.deckard = match d {
                    DeckardArg::Kinds => DeckardMode::Kinds,
                    DeckardArg::KindsAndPairs => DeckardMode::KindsAndPairs,
                };
            }
            if let Some(b) = bins {
                cfg.bins = *b;
            }
            export_rankings = *export;
        }
    }
    cfg.validate()?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.jobs)
        .build()
        .map_err(|e| CliError::usage(format!("cannot start {} worker threads: {e}", cfg.jobs)))?;
    pool.install(|| match cli.command {
        Command::Index { .. } => commands::index(&cfg, cli.force),
        Command::Train => commands::train(&cfg, cli.force),
        Command::Tasks { .. } => commands::tasks(&cfg, cli.force),
        Command::Rank { .. } => commands::rank(&cfg, rank_request.as_ref().expect("set above")),
        Command::Evaluate { .. } => commands::evaluate(&cfg, cli.force, export_rankings),
        Command::Stats => commands::stats(&cfg),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

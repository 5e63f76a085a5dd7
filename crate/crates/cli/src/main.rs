//! `ttlab` command-line front end.

mod commands;
mod config;
mod io;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};
use ttlab::formulas::ReductionClass;
use ttlab::EstimatorSpec;

use crate::config::ExperimentConfig;

#[derive(Parser)]
#[command(name = "ttlab", version, about = "Finite-horizon truth-table reduction experiments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON experiment config; flags given explicitly take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    horizon: Option<u64>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// length | zero | log | scaled:N/D | compressor[:LEVEL] | external:PROGRAM [ARGS]
    #[arg(long, global = true)]
    estimator: Option<EstimatorSpec>,
    /// Witness rows an adversary must exhibit.
    #[arg(long, global = true)]
    threshold: Option<usize>,
    /// Output directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Write a stream prefix and its description.
    Gen {
        /// Stream description (inline JSON or file).
        #[arg(long)]
        stream: String,
        /// Prefix length; defaults to the horizon.
        #[arg(short, long)]
        n: Option<u64>,
    },
    /// Apply a reduction to an oracle and report query sets.
    Reduce {
        /// Reduction as JSON, or a `row,formula` CSV table.
        #[arg(long, conflicts_with = "template")]
        reduction: Option<String>,
        /// Row template such as "v[2n] | v[2n+1]".
        #[arg(long)]
        template: Option<String>,
        #[arg(long)]
        class: Option<ReductionClass>,
        /// Oracle stream (inline JSON or file).
        #[arg(long)]
        oracle: String,
        /// Use bound for a weak truth-table audit.
        #[arg(long)]
        bound: Option<String>,
        #[arg(short, long)]
        n: Option<u64>,
    },
    /// Run the switching reduction over a family of columns.
    Switch {
        /// Column family (inline JSON or file).
        #[arg(long)]
        family: String,
        /// Number of columns, or `omega`.
        #[arg(long, default_value = "2")]
        arity: String,
    },
    /// Build an oracle defeating a positive, linear or bounded reduction.
    Adversary {
        #[arg(long, conflicts_with = "template")]
        reduction: Option<String>,
        #[arg(long)]
        template: Option<String>,
        #[arg(long)]
        class: Option<ReductionClass>,
    },
    /// Finite-horizon dimension estimates of a stream.
    Dims {
        #[arg(long)]
        stream: String,
        /// JSON list of index sets; tails only when omitted.
        #[arg(long)]
        family: Option<String>,
    },
    /// Mind-change accounting and decompositions of a stage approximation.
    Ershov {
        /// Approximation as JSON, or an `x,s,bit` CSV table.
        #[arg(long)]
        approx: String,
        /// Probed elements, as `a..b`.
        #[arg(long, default_value = "0..64")]
        xs: String,
        /// Stages examined; defaults to the approximation's stage horizon.
        #[arg(long)]
        upto: Option<u64>,
        /// Use bound g for the ω-c.e. check (inline JSON or file).
        #[arg(long)]
        bound: Option<String>,
        /// even:K | odd:K | omega
        #[arg(long)]
        decompose: Option<String>,
    },
    /// Re-check a certificate written by another subcommand.
    Verify {
        certificate: PathBuf,
    },
    /// Write the generated adversary corpus, optionally running it.
    Corpus {
        #[arg(long, default_value_t = ttlab::hammers::corpus::CORPUS_SEED)]
        corpus_seed: u64,
        /// Run the matching adversary on every entry.
        #[arg(long)]
        run: bool,
    },
}

/// How a successful command ended.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    Inconclusive,
}

fn resolve(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(h) = common.horizon {
        cfg.horizon = h;
    }
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(e) = &common.estimator {
        cfg.estimator = e.clone();
    }
    if let Some(t) = common.threshold {
        cfg.threshold = t;
    }
    if let Some(o) = &common.out {
        cfg.out = o.clone();
    }
    Ok(cfg)
}

fn run(cli: Cli) -> Result<Status> {
    let cfg = resolve(&cli.common)?;
    use commands::*;
    match cli.command {
        Command::Gen { stream, n } => gen(&cfg, &stream, n),
        Command::Reduce {
            reduction,
            template,
            class,
            oracle,
            bound,
            n,
        } => {
            let r = reduction_from(reduction.as_deref(), template.as_deref(), class)?;
            reduce(&cfg, &r, &oracle, bound.as_deref(), n)
        }
        Command::Switch { family, arity } => switch(&cfg, &family, &arity),
        Command::Adversary {
            reduction,
            template,
            class,
        } => {
            let r = reduction_from(reduction.as_deref(), template.as_deref(), class)?;
            adversary(&cfg, &r)
        }
        Command::Dims { stream, family } => dims(&cfg, &stream, family.as_deref()),
        Command::Ershov {
            approx,
            xs,
            upto,
            bound,
            decompose,
        } => ershov(&cfg, &approx, &xs, upto, bound.as_deref(), decompose.as_deref()),
        Command::Verify { certificate } => verify(&certificate),
        Command::Corpus { corpus_seed, run } => corpus(&cfg, corpus_seed, run),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // usage errors share exit code 1 with other failures; 2 means inconclusive
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Status::Ok) => ExitCode::SUCCESS,
        Ok(Status::Inconclusive) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

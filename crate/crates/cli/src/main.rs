// SPDX-License-Identifier: Apache-2.0

mod cache;
mod commands;
mod error;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use divrank_core::ModelVariant;

use error::CliError;
use output::Format;

/// PageRank and spectrum of the Google matrix of the integers.
#[derive(Debug, Parser)]
#[command(name = "divrank", version)]
pub struct Cli {
    #[command(flatten)]
    pub config: RunConfig,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Mult,
    Simplified,
    Prime,
}

impl From<VariantArg> for ModelVariant {
    fn from(v: VariantArg) -> Self {
        match v {
            VariantArg::Mult => ModelVariant::Multiplicity,
            VariantArg::Simplified => ModelVariant::Simplified,
            VariantArg::Prime => ModelVariant::PrimeFactors,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Power,
    Semianalytic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StartArg {
    Uniform,
    Random,
}

/// Settings shared by every subcommand.
#[derive(Debug, Clone, Args)]
pub struct RunConfig {
    /// Network size N.
    #[arg(long = "n", global = true, default_value_t = 1000)]
    pub n_max: u64,
    #[arg(long, global = true, value_enum, default_value_t = VariantArg::Mult)]
    pub variant: VariantArg,
    /// Damping factor in (0, 1].
    #[arg(long, global = true, default_value_t = 1.0)]
    pub alpha: f64,
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Semianalytic)]
    pub method: MethodArg,
    /// L1 stopping tolerance of the power method.
    #[arg(long, global = true, default_value_t = divrank_core::pagerank::DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = divrank_core::pagerank::DEFAULT_MAX_ITER)]
    pub max_iter: usize,
    /// Directory for output files.
    #[arg(long, global = true, default_value = ".")]
    pub out: PathBuf,
    /// Directory for cached count tables.
    #[arg(long, global = true)]
    pub cache_dir: Option<PathBuf>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Format of tabular output files.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Memory budget in MiB for the size guard.
    #[arg(long, global = true, default_value_t = 4096)]
    pub mem_budget_mb: u64,
    /// Run even when the memory estimate exceeds the budget.
    #[arg(long, global = true)]
    pub force: bool,
}

impl RunConfig {
    pub fn variant(&self) -> ModelVariant {
        self.variant.into()
    }

    fn validate(&self) -> Result<(), CliError> {
        if self.n_max < 1 {
            return Err(CliError::Validation("--n must be at least 1".into()));
        }
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(CliError::Validation(format!("--alpha {} outside (0, 1]", self.alpha)));
        }
        if !(self.tol > 0.0) {
            return Err(CliError::Validation(format!("--tol {} must be positive", self.tol)));
        }
        if self.threads == Some(0) {
            return Err(CliError::Validation("--threads must be positive".into()));
        }
        Ok(())
    }

    /// Refuses runs whose estimated footprint exceeds the budget.
    pub fn guard_memory(&self, bytes: u64) -> Result<(), CliError> {
        let budget = self.mem_budget_mb.saturating_mul(1 << 20);
        if bytes > budget && !self.force {
            return Err(CliError::Validation(format!(
                "estimated memory {} MiB exceeds the budget of {} MiB; pass --force or raise --mem-budget-mb",
                bytes >> 20,
                self.mem_budget_mb
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Link count, dangling nodes and nilpotency index.
    Stats {
        /// Also report the link ratio of the multiplicity and simplified models.
        #[arg(long)]
        compare_variants: bool,
    },
    /// PageRank vector, snapshot and rank table.
    Pagerank {
        /// Also run the other method and report the L1 discrepancy.
        #[arg(long)]
        compare_methods: bool,
        /// Rows in the rank table (0 for all N).
        #[arg(long, default_value_t = 1000)]
        top: usize,
    },
    /// Exact nonzero spectrum, with an optional Arnoldi overlay.
    Spectrum {
        /// Arnoldi dimension for the overlay (0 to skip).
        #[arg(long, default_value_t = 0)]
        na: usize,
        #[arg(long, value_enum, default_value_t = StartArg::Uniform)]
        start: StartArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Ritz values and couplings of the Arnoldi iteration.
    Arnoldi {
        #[arg(long, default_value_t = 200)]
        na: usize,
        #[arg(long, value_enum, default_value_t = StartArg::Uniform)]
        start: StartArg,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Fits, stability and branch data from PageRank snapshots.
    Analyze {
        /// PageRank snapshots, any order; sizes must differ.
        #[arg(required = true)]
        inputs: Vec<PathBuf>,
        /// Samples for the branch profile above the sieve cap.
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
    },
    /// Eigenvalues of a perturbed Jordan block.
    DemoJordan {
        #[arg(long, default_value_t = 12)]
        d: usize,
        #[arg(long, default_value_t = 1e-12)]
        eps: f64,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    cli.config.validate()?;
    if let Some(t) = cli.config.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Validation(e.to_string()))?;
    }
    commands::dispatch(&cli.config, &cli.command)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("divrank: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

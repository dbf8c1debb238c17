//! Command-line front-end for `lvs-core`.
//!
//! Every subcommand takes either a single set of files or a set of
//! directories whose files are paired by stem. Per-file problems are
//! reported and skipped; the exit code tells whether any occurred.

pub mod batch;
pub mod commands;
pub mod config;

use std::path::PathBuf;

use anyhow::Result;
use clap::{Args, Parser, Subcommand};

pub use batch::{Failure, Sample};
pub use config::Config;

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARTIAL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "lvs", version, about = "Local vessel salience toolkit")]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    /// `key = value` file with defaults; command-line flags win.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Extract the vessel graph of ground-truth masks as JSON.
    Graph(GraphArgs),
    /// Compute LVS fields (PFM, optional PNG preview).
    Lvs(LvsArgs),
    /// Score predictions: Dice, precision, recall and LSRecall.
    Metrics(MetricsArgs),
    /// Write salience-augmented copies of images.
    Augment(AugmentArgs),
}

#[derive(Debug, Clone, Args)]
pub struct GraphOpts {
    /// Minimum length of a terminal branch.
    #[arg(long)]
    pub prune: Option<f64>,
    /// Nodes joined by an edge at most this long are merged.
    #[arg(long)]
    pub merge_radius: Option<f64>,
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    #[arg(
        long,
        conflicts_with = "mask_dir",
        required_unless_present = "mask_dir"
    )]
    pub mask: Option<PathBuf>,
    #[arg(long)]
    pub mask_dir: Option<PathBuf>,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub graph: GraphOpts,
}

#[derive(Debug, Args)]
pub struct LvsArgs {
    #[arg(long, requires = "mask", conflicts_with = "image_dir")]
    pub image: Option<PathBuf>,
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long, requires = "mask_dir", required_unless_present = "image")]
    pub image_dir: Option<PathBuf>,
    #[arg(long)]
    pub mask_dir: Option<PathBuf>,
    /// Output field for single-file mode.
    #[arg(long, requires = "image")]
    pub out_field: Option<PathBuf>,
    /// PNG preview for single-file mode.
    #[arg(long, requires = "out_field")]
    pub out_viz: Option<PathBuf>,
    /// Output directory: `<stem>.pfm` per sample.
    #[arg(long, required_unless_present = "out_field")]
    pub out_dir: Option<PathBuf>,
    /// Also write `<stem>_lvs.png` previews into the output directory.
    #[arg(long)]
    pub viz: bool,
    /// Background sampling radius.
    #[arg(long)]
    pub r_b: Option<f64>,
    /// Smoothing half-window along the medial axis.
    #[arg(long)]
    pub k: Option<usize>,
    #[command(flatten)]
    pub graph: GraphOpts,
}

#[derive(Debug, Args)]
pub struct MetricsArgs {
    #[arg(long, requires_all = ["pred", "lvs_field"], conflicts_with = "gt_dir")]
    pub gt: Option<PathBuf>,
    #[arg(long)]
    pub pred: Option<PathBuf>,
    #[arg(long)]
    pub lvs_field: Option<PathBuf>,
    #[arg(long, requires_all = ["pred_dir", "lvs_dir"], required_unless_present = "gt")]
    pub gt_dir: Option<PathBuf>,
    #[arg(long)]
    pub pred_dir: Option<PathBuf>,
    #[arg(long)]
    pub lvs_dir: Option<PathBuf>,
    /// Comma-separated salience thresholds (default 0.05, 0.10, ..., 1.0).
    #[arg(long)]
    pub thresholds: Option<String>,
    /// Receives `<stem>.json` per sample and `aggregate.csv`.
    #[arg(long)]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct AugmentArgs {
    #[arg(long, requires = "mask", conflicts_with = "image_dir")]
    pub image: Option<PathBuf>,
    #[arg(long)]
    pub mask: Option<PathBuf>,
    #[arg(long, requires = "mask_dir", required_unless_present = "image")]
    pub image_dir: Option<PathBuf>,
    #[arg(long)]
    pub mask_dir: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Segments per image, `min,max`.
    #[arg(long)]
    pub n: Option<String>,
    /// Faded length, `min,max`.
    #[arg(long)]
    pub l: Option<String>,
    /// Gap length, `min,max`.
    #[arg(long)]
    pub l_d: Option<String>,
    /// Rim intensity tolerance for transplanted patches.
    #[arg(long)]
    pub t_b: Option<f64>,
    /// Augmented copies per input.
    #[arg(long)]
    pub copies: Option<usize>,
    #[arg(long)]
    pub max_attempts: Option<usize>,
    #[arg(long)]
    pub out_dir: PathBuf,
    #[command(flatten)]
    pub graph: GraphOpts,
}

/// Outcome of a batch: written files and per-sample failures.
#[derive(Debug, Default)]
pub struct Report {
    pub written: Vec<PathBuf>,
    pub failures: Vec<Failure>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.failures.is_empty() {
            EXIT_OK
        } else {
            EXIT_PARTIAL
        }
    }
}

/// Runs a parsed command line. `Err` means a usage or setup problem.
pub fn run(cli: Cli) -> Result<Report> {
    let config = match &cli.config {
        Some(path) => Config::load(path)?,
        None => Config::default(),
    };
    let jobs = match cli.jobs {
        Some(j) => Some(j),
        None => config.get::<usize>("jobs")?,
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        builder = builder.num_threads(j.max(1));
    }
    let pool = builder.build()?;
    pool.install(|| match &cli.command {
        Command::Graph(a) => commands::graph::run(a, &config),
        Command::Lvs(a) => commands::lvs::run(a, &config),
        Command::Metrics(a) => commands::metrics::run(a, &config),
        Command::Augment(a) => commands::augment::run(a, &config),
    })
}

//! One module per subcommand, plus the batch plumbing they share.

pub mod augment;
pub mod graph;
pub mod lvs;
pub mod metrics;

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use lvs_core::topology::GraphParams;
use rayon::prelude::*;
use serde::Serialize;

use crate::batch::{pair_dirs, stem_of, Failure, Sample, RASTERS};
use crate::{Config, GraphOpts, Report};

/// Samples from either explicit files or directories paired by stem.
pub(crate) fn collect_samples(
    files: &[Option<&PathBuf>],
    dirs: &[Option<&PathBuf>],
) -> Result<(Vec<Sample>, Vec<Failure>)> {
    let kinds = vec![RASTERS; dirs.len()];
    collect_typed(files, dirs, &kinds)
}

/// As [`collect_samples`], with accepted extensions given per directory.
pub(crate) fn collect_typed(
    files: &[Option<&PathBuf>],
    dirs: &[Option<&PathBuf>],
    kinds: &[&[&str]],
) -> Result<(Vec<Sample>, Vec<Failure>)> {
    if let Some(Some(first)) = files.first() {
        let paths: Vec<PathBuf> = files
            .iter()
            .map(|f| f.cloned().context("missing input file"))
            .collect::<Result<_>>()?;
        return Ok((
            vec![Sample {
                stem: stem_of(first),
                paths,
            }],
            Vec::new(),
        ));
    }
    let dirs: Vec<(&Path, &[&str])> = dirs
        .iter()
        .zip(kinds)
        .map(|(d, &k)| {
            Ok((
                d.map(PathBuf::as_path).context("missing input directory")?,
                k,
            ))
        })
        .collect::<Result<_>>()?;
    pair_dirs(&dirs)
}

/// Runs `work` over every sample in parallel. Results are ordered by stem
/// regardless of scheduling.
pub(crate) fn process<T, F>(
    samples: &[Sample],
    mut failures: Vec<Failure>,
    work: F,
) -> (Vec<(String, T)>, Report)
where
    T: Send,
    F: Fn(&Sample) -> Result<(T, Vec<PathBuf>)> + Sync,
{
    if samples.is_empty() && failures.is_empty() {
        eprintln!("warning: no input files found");
    }
    let results: Vec<_> = samples
        .par_iter()
        .map(|s| (s.stem.clone(), work(s)))
        .collect();
    let mut report = Report::default();
    let mut values = Vec::new();
    for (stem, result) in results {
        match result {
            Ok((value, written)) => {
                report.written.extend(written);
                values.push((stem, value));
            }
            Err(e) => failures.push(Failure {
                stem,
                message: format!("{e:#}"),
            }),
        }
    }
    failures.sort_by(|a, b| a.stem.cmp(&b.stem));
    report.failures = failures;
    (values, report)
}

pub(crate) fn graph_params(opts: &GraphOpts, config: &Config) -> Result<GraphParams> {
    let defaults = GraphParams::default();
    Ok(GraphParams {
        min_branch_len: pick(opts.prune, config.get("prune")?, defaults.min_branch_len),
        merge_radius: pick(
            opts.merge_radius,
            config.get("merge_radius")?,
            defaults.merge_radius,
        ),
    })
}

/// Flag, else config, else default.
pub(crate) fn pick<T>(flag: Option<T>, config: Option<T>, default: T) -> T {
    flag.or(config).unwrap_or(default)
}

pub(crate) fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

pub(crate) fn ensure_dir(dir: &Path) -> Result<()> {
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

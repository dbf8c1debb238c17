//! Input discovery and pairing by file stem.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

/// Extensions accepted for masks and images.
pub const RASTERS: &[&str] = &["png", "pgm", "pfm"];
/// Extensions accepted for salience fields.
pub const FIELDS: &[&str] = &["pfm"];

/// One unit of work: a stem and one path per input role.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub stem: String,
    pub paths: Vec<PathBuf>,
}

/// Per-file failure, reported but not fatal for the rest of a batch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub stem: String,
    pub message: String,
}

pub fn stem_of(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default()
}

/// Files in `dir` with one of `extensions`, keyed by stem.
pub fn list_dir(dir: &Path, extensions: &[&str]) -> Result<BTreeMap<String, PathBuf>> {
    let mut out = BTreeMap::new();
    let entries = std::fs::read_dir(dir).with_context(|| format!("listing {}", dir.display()))?;
    for entry in entries {
        let path = entry?.path();
        let ext = path
            .extension()
            .map(|e| e.to_string_lossy().to_ascii_lowercase())
            .unwrap_or_default();
        if path.is_file() && extensions.contains(&ext.as_str()) {
            out.insert(stem_of(&path), path);
        }
    }
    Ok(out)
}

/// Pairs the files of several directories by stem, sorted by stem. Stems
/// missing from any directory become failures.
pub fn pair_dirs(dirs: &[(&Path, &[&str])]) -> Result<(Vec<Sample>, Vec<Failure>)> {
    let listings = dirs
        .iter()
        .map(|(d, ext)| list_dir(d, ext))
        .collect::<Result<Vec<_>>>()?;
    let mut stems: Vec<&String> = listings.iter().flat_map(|l| l.keys()).collect();
    stems.sort();
    stems.dedup();
    let mut samples = Vec::new();
    let mut failures = Vec::new();
    for stem in stems {
        let found: Vec<Option<&PathBuf>> = listings.iter().map(|l| l.get(stem)).collect();
        if found.iter().all(Option::is_some) {
            samples.push(Sample {
                stem: stem.clone(),
                paths: found.into_iter().flatten().cloned().collect(),
            });
        } else {
            let missing: Vec<String> = found
                .iter()
                .zip(dirs)
                .filter(|(f, _)| f.is_none())
                .map(|(_, (d, _))| d.display().to_string())
                .collect();
            failures.push(Failure {
                stem: stem.clone(),
                message: format!("no matching file in {}", missing.join(", ")),
            });
        }
    }
    Ok((samples, failures))
}

use std::path::Path;

use anyhow::{ensure, Context, Result};
use lvs_core::metrics::{default_thresholds, evaluate, mean_defined, MetricsReport};
use lvs_core::raster::{load_mask, load_scalar_field};
use serde::Serialize;

use super::{collect_typed, ensure_dir, process, write_json};
use crate::batch::{FIELDS, RASTERS};
use crate::config::parse_list;
use crate::{Config, MetricsArgs, Report};

#[derive(Serialize)]
struct SampleReport<'a> {
    sample_id: &'a str,
    #[serde(flatten)]
    report: &'a MetricsReport,
}

pub fn thresholds(args: &MetricsArgs, config: &Config) -> Result<Vec<f64>> {
    let list = match &args.thresholds {
        Some(s) => parse_list(s).context("--thresholds")?,
        None => config
            .get_list("thresholds")?
            .unwrap_or_else(default_thresholds),
    };
    ensure!(!list.is_empty(), "threshold list is empty");
    Ok(list)
}

pub fn run(args: &MetricsArgs, config: &Config) -> Result<Report> {
    let thresholds = thresholds(args, config)?;
    let (samples, failures) = collect_typed(
        &[
            args.gt.as_ref(),
            args.pred.as_ref(),
            args.lvs_field.as_ref(),
        ],
        &[
            args.gt_dir.as_ref(),
            args.pred_dir.as_ref(),
            args.lvs_dir.as_ref(),
        ],
        &[RASTERS, RASTERS, FIELDS],
    )?;
    ensure_dir(&args.out_dir)?;
    let (reports, mut report) = process(&samples, failures, |s| {
        let gt = load_mask(&s.paths[0])?;
        let pred = load_mask(&s.paths[1])?;
        let lvs = load_scalar_field(&s.paths[2])?;
        let r = evaluate(&gt, &pred, &lvs, &thresholds)?;
        let out = args.out_dir.join(format!("{}.json", s.stem));
        write_json(
            &out,
            &SampleReport {
                sample_id: &s.stem,
                report: &r,
            },
        )?;
        Ok((r, vec![out]))
    });
    let csv_path = args.out_dir.join("aggregate.csv");
    write_aggregate(&csv_path, &thresholds, &reports)?;
    report.written.push(csv_path);
    Ok(report)
}

fn cell(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One row per sample (sorted by stem), then a `mean` row over defined
/// values and an `undefined` row counting the samples left out of each mean.
pub fn write_aggregate(
    path: &Path,
    thresholds: &[f64],
    reports: &[(String, MetricsReport)],
) -> Result<()> {
    let mut w =
        csv::Writer::from_path(path).with_context(|| format!("writing {}", path.display()))?;
    let mut header = vec![
        "sample_id".to_string(),
        "dice".into(),
        "precision".into(),
        "recall".into(),
        "unscored_pixels".into(),
    ];
    header.extend(thresholds.iter().map(|t| format!("lsrecall@{t}")));
    w.write_record(&header)?;

    let mut columns: Vec<Vec<Option<f64>>> = vec![Vec::new(); 4 + thresholds.len()];
    for (stem, r) in reports {
        let mut row = vec![
            r.dice,
            r.precision,
            r.recall,
            Some(r.unscored_pixels as f64),
        ];
        row.extend(r.lsrecall.iter().map(|e| e.value));
        let mut record = vec![stem.clone()];
        record.extend(row.iter().map(|v| cell(*v)));
        w.write_record(&record)?;
        for (col, v) in columns.iter_mut().zip(row) {
            col.push(v);
        }
    }
    let summary: Vec<(Option<f64>, usize)> = columns.into_iter().map(mean_defined).collect();
    let mut mean_row = vec!["mean".to_string()];
    mean_row.extend(summary.iter().map(|(m, _)| cell(*m)));
    w.write_record(&mean_row)?;
    let mut undefined_row = vec!["undefined".to_string()];
    undefined_row.extend(summary.iter().map(|(_, n)| n.to_string()));
    w.write_record(&undefined_row)?;
    w.flush()?;
    Ok(())
}

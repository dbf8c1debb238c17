//! Segmentation scores: confusion counts, Dice/precision/recall and recall
//! restricted to low-salience vessel pixels (LSRecall).
//!
//! Ratios with a zero denominator are `None` and serialize as `null`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::raster::{BinaryMask, GrayImage, ScalarField};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("shape mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("correlation needs at least two pixels with non-zero variance in both series")]
    DegenerateVariance,
    #[error("threshold list is empty")]
    NoThresholds,
}

fn check(a: (usize, usize), b: (usize, usize)) -> Result<(), MetricsError> {
    if a == b {
        Ok(())
    } else {
        Err(MetricsError::DimensionMismatch(a.0, a.1, b.0, b.1))
    }
}

fn dims(m: &BinaryMask) -> (usize, usize) {
    (m.width(), m.height())
}

fn ratio(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| num as f64 / den as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct ConfusionCounts {
    pub tp: u64,
    #[serde(rename = "fn")]
    pub fn_: u64,
    pub fp: u64,
    pub tn: u64,
}

impl ConfusionCounts {
    pub fn recall(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fn_)
    }

    pub fn precision(&self) -> Option<f64> {
        ratio(self.tp, self.tp + self.fp)
    }

    pub fn dice(&self) -> Option<f64> {
        ratio(2 * self.tp, 2 * self.tp + self.fp + self.fn_)
    }
}

/// Pixel tally of ground truth `g` against prediction `r`.
pub fn confusion_counts(g: &BinaryMask, r: &BinaryMask) -> Result<ConfusionCounts, MetricsError> {
    check(dims(g), dims(r))?;
    let mut c = ConfusionCounts::default();
    for (&gi, &ri) in g.as_slice().iter().zip(r.as_slice()) {
        match (gi, ri) {
            (true, true) => c.tp += 1,
            (true, false) => c.fn_ += 1,
            (false, true) => c.fp += 1,
            (false, false) => c.tn += 1,
        }
    }
    Ok(c)
}

/// Valid pixels whose salience is at most `t`.
pub fn low_salience_subset(lvs: &ScalarField, t: f64) -> BinaryMask {
    let mut g = BinaryMask::new(lvs.width(), lvs.height());
    for (p, v) in lvs.iter_valid() {
        if v as f64 <= t {
            g.set(p, true);
        }
    }
    g
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LsRecallEntry {
    pub t: f64,
    pub value: Option<f64>,
    pub g_t: u64,
    pub tp_t: u64,
    pub fn_t: u64,
}

/// Recall of `r` over the low-salience set `g_t`.
pub fn lsrecall(g_t: &BinaryMask, r: &BinaryMask) -> Result<(Option<f64>, u64, u64), MetricsError> {
    let c = confusion_counts(g_t, r)?;
    Ok((c.recall(), c.tp, c.fn_))
}

pub fn lsrecall_curve(
    lvs: &ScalarField,
    r: &BinaryMask,
    thresholds: &[f64],
) -> Result<Vec<LsRecallEntry>, MetricsError> {
    if thresholds.is_empty() {
        return Err(MetricsError::NoThresholds);
    }
    check((lvs.width(), lvs.height()), dims(r))?;
    thresholds
        .iter()
        .map(|&t| {
            let (value, tp_t, fn_t) = lsrecall(&low_salience_subset(lvs, t), r)?;
            Ok(LsRecallEntry {
                t,
                value,
                g_t: tp_t + fn_t,
                tp_t,
                fn_t,
            })
        })
        .collect()
}

/// `0.05, 0.10, ..., 1.0`; the last entry is exactly `1.0`.
pub fn default_thresholds() -> Vec<f64> {
    (1..=20).map(|i| i as f64 / 20.0).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub counts: ConfusionCounts,
    pub dice: Option<f64>,
    pub precision: Option<f64>,
    pub recall: Option<f64>,
    pub lsrecall: Vec<LsRecallEntry>,
    /// Ground-truth pixels without a salience value.
    pub unscored_pixels: u64,
}

pub fn evaluate(
    g: &BinaryMask,
    r: &BinaryMask,
    lvs: &ScalarField,
    thresholds: &[f64],
) -> Result<MetricsReport, MetricsError> {
    let counts = confusion_counts(g, r)?;
    let lsrecall = lsrecall_curve(lvs, r, thresholds)?;
    let unscored = g.pixels().filter(|&p| !lvs.is_valid(p)).count() as u64;
    Ok(MetricsReport {
        counts,
        dice: counts.dice(),
        precision: counts.precision(),
        recall: counts.recall(),
        lsrecall,
        unscored_pixels: unscored,
    })
}

/// Mean over the defined values and the number of undefined ones.
pub fn mean_defined(values: impl IntoIterator<Item = Option<f64>>) -> (Option<f64>, usize) {
    let (mut sum, mut n, mut skipped) = (0.0, 0usize, 0usize);
    for v in values {
        match v {
            Some(v) => {
                sum += v;
                n += 1;
            }
            None => skipped += 1,
        }
    }
    ((n > 0).then(|| sum / n as f64), skipped)
}

/// Pearson correlation between image intensity and salience over the valid
/// pixels of `lvs`.
pub fn intensity_lvs_correlation(
    image: &GrayImage,
    lvs: &ScalarField,
) -> Result<f64, MetricsError> {
    check((image.width(), image.height()), (lvs.width(), lvs.height()))?;
    let pairs: Vec<(f64, f64)> = lvs
        .iter_valid()
        .map(|(p, v)| (image.get(p), v as f64))
        .collect();
    pearson(&pairs).ok_or(MetricsError::DegenerateVariance)
}

fn pearson(pairs: &[(f64, f64)]) -> Option<f64> {
    if pairs.len() < 2 {
        return None;
    }
    let n = pairs.len() as f64;
    let mx = pairs.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pairs.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in pairs {
        sxy += (x - mx) * (y - my);
        sxx += (x - mx) * (x - mx);
        syy += (y - my) * (y - my);
    }
    if sxx <= 0.0 || syy <= 0.0 {
        return None;
    }
    Some((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

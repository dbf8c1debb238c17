//! Salience augmentation: fade a stretch of a vessel into the local
//! background and cut it with a transplanted background patch.
//!
//! The ground-truth mask is never changed, so the faded stretch stays
//! labelled as vessel.

mod patch;
mod profile;

pub use patch::{
    attenuate, find_background_patch, local_background_mean, region_contours,
    synthesize_discontinuity, PatchMatch, RegionContours,
};
pub use profile::{
    expand_profile, locate_waypoints, preservation_profile, select_center, MasAssignment,
    PreservationField, Waypoints,
};

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::raster::{BinaryMask, GrayImage, Pixel};
use crate::topology::VesselGraph;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AugmentError {
    #[error("segment of length {length:.2} is too short for l = {l:.2}")]
    SegmentTooShort { length: f64, l: f64 },
    #[error("no background pixel in the window around {0:?}")]
    NoBackgroundInWindow(Pixel),
    #[error("no background patch matches the gap surroundings")]
    NoMatchingPatch,
    #[error("invalid augmentation parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AugmentParams {
    /// Inclusive range for the number of edited segments per image.
    pub n_range: (usize, usize),
    /// Range for the faded length `l`, in pixels.
    pub l_range: (f64, f64),
    /// Range for the gap length `l_d`; every draw satisfies `l_d < l`.
    pub l_d_range: (f64, f64),
    /// Largest accepted rim intensity difference for a transplanted patch.
    pub t_b: f64,
    /// Failed edits tolerated before giving up on reaching `n`.
    pub max_attempts: usize,
}

impl Default for AugmentParams {
    fn default() -> Self {
        Self {
            n_range: (50, 100),
            l_range: (20.0, 100.0),
            l_d_range: (0.0, 30.0),
            t_b: 5.0,
            max_attempts: 200,
        }
    }
}

impl AugmentParams {
    pub fn validate(&self) -> Result<(), AugmentError> {
        let bad = |m: &str| Err(AugmentError::InvalidParams(m.into()));
        let (l0, l1) = self.l_range;
        let (d0, d1) = self.l_d_range;
        if self.n_range.0 > self.n_range.1 {
            return bad("n range is reversed");
        }
        if !(l0.is_finite() && l1.is_finite() && 0.0 <= l0 && l0 <= l1) {
            return bad("l range must be finite, non-negative and ordered");
        }
        if !(d0.is_finite() && d1.is_finite() && 0.0 <= d0 && d0 <= d1) {
            return bad("l_d range must be finite, non-negative and ordered");
        }
        if d0 >= l1 {
            return bad("l_d must be able to stay below l");
        }
        if self.t_b.is_nan() || self.t_b < 0.0 {
            return bad("t_b must be non-negative");
        }
        Ok(())
    }

    fn draw_lengths<R: Rng + ?Sized>(&self, rng: &mut R) -> (f64, f64) {
        let (l0, l1) = self.l_range;
        let (d0, d1) = self.l_d_range;
        let mut l = if l0 < l1 { rng.gen_range(l0..=l1) } else { l0 };
        while l <= d0 {
            l = rng.gen_range(l0..=l1);
        }
        let hi = d1.min(l);
        let l_d = if d0 < hi { rng.gen_range(d0..hi) } else { d0 };
        (l, l_d)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EditStatus {
    /// Faded and cut with a background patch.
    Applied,
    /// Faded, but no matching patch was found.
    AttenuatedOnly,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditRecord {
    pub status: EditStatus,
    pub segment: Option<usize>,
    pub l: f64,
    pub l_d: f64,
    pub center: Option<[usize; 2]>,
    pub background_mean: Option<f64>,
    pub patch_offset: Option<[i64; 2]>,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EditLog {
    /// Number of segments the run aimed for.
    pub target: usize,
    pub edits: Vec<EditRecord>,
}

impl EditLog {
    pub fn edited(&self) -> usize {
        self.edits
            .iter()
            .filter(|e| e.status != EditStatus::Skipped)
            .count()
    }
}

/// Everything produced by one segment edit.
#[derive(Debug, Clone)]
pub struct SegmentEdit {
    pub image: GrayImage,
    pub waypoints: Waypoints,
    pub field: PreservationField,
    pub background_mean: f64,
    /// Image after fading, before any patch copy.
    pub attenuated: GrayImage,
    pub patch: Result<PatchMatch, AugmentError>,
}

/// Fades one segment around path index `pc` and tries to cut it.
#[allow(clippy::too_many_arguments)]
pub fn edit_segment<R: Rng + ?Sized>(
    image: &GrayImage,
    mask: &BinaryMask,
    graph: &VesselGraph,
    assignment: &MasAssignment,
    edge: usize,
    pc: usize,
    l: f64,
    l_d: f64,
    t_b: f64,
    rng: &mut R,
) -> Result<SegmentEdit, AugmentError> {
    let path = &graph.edges[edge].path;
    let center = path[pc];
    let background_mean = local_background_mean(image, mask, center, l.round() as usize)?;
    let waypoints = locate_waypoints(path, pc, l, l_d);
    let factors = preservation_profile(path, &waypoints);
    let field = expand_profile(assignment, edge, &factors);
    let attenuated = attenuate(image, &field, background_mean);
    let region = field.zero_mask();
    let patch = find_background_patch(&attenuated, mask, &region, center, t_b, rng);
    let image = match &patch {
        Ok(m) => synthesize_discontinuity(&attenuated, &field.zero_region(), m.offset),
        Err(_) => attenuated.clone(),
    };
    Ok(SegmentEdit {
        image,
        waypoints,
        field,
        background_mean,
        attenuated,
        patch,
    })
}

/// Edits up to `n ~ U(n_range)` distinct segments of `graph`.
///
/// Each edit draws `l` and `l_d`, then tries the not yet edited segments
/// longer than `l` in random order until one admits a centre. Edits are
/// applied one after another to the same working image. The run stops early
/// once `max_attempts` edits have failed.
pub fn augment_image<R: Rng + ?Sized>(
    image: &GrayImage,
    mask: &BinaryMask,
    graph: &VesselGraph,
    params: &AugmentParams,
    rng: &mut R,
) -> Result<(GrayImage, EditLog), AugmentError> {
    params.validate()?;
    let target = rng.gen_range(params.n_range.0..=params.n_range.1);
    let mut log = EditLog {
        target,
        edits: Vec::new(),
    };
    let mut out = image.clone();
    if target == 0 || graph.edges.is_empty() {
        return Ok((out, log));
    }
    let assignment = MasAssignment::new(graph, mask);
    let lengths: Vec<f64> = graph.edges.iter().map(|e| e.length()).collect();
    let mut used = vec![false; graph.edges.len()];
    let mut failures = 0;

    while log.edited() < target && failures < params.max_attempts {
        let (l, l_d) = params.draw_lengths(rng);
        let mut record = EditRecord {
            status: EditStatus::Skipped,
            segment: None,
            l,
            l_d,
            center: None,
            background_mean: None,
            patch_offset: None,
            note: None,
        };
        let mut candidates: Vec<usize> = (0..graph.edges.len())
            .filter(|&e| !used[e] && lengths[e] > l)
            .collect();
        candidates.shuffle(rng);
        let chosen = candidates.into_iter().find_map(|e| {
            select_center(&graph.edges[e].path, l, rng)
                .ok()
                .map(|pc| (e, pc))
        });
        let Some((edge, pc)) = chosen else {
            record.note = Some("no segment long enough".into());
            log.edits.push(record);
            failures += 1;
            continue;
        };
        record.segment = Some(edge);
        let c = graph.edges[edge].path[pc];
        record.center = Some([c.row, c.col]);
        match edit_segment(
            &out,
            mask,
            graph,
            &assignment,
            edge,
            pc,
            l,
            l_d,
            params.t_b,
            rng,
        ) {
            Ok(edit) => {
                used[edge] = true;
                record.background_mean = Some(edit.background_mean);
                match edit.patch {
                    Ok(m) => {
                        record.status = EditStatus::Applied;
                        record.patch_offset = Some([m.offset.0, m.offset.1]);
                    }
                    Err(e) => {
                        record.status = EditStatus::AttenuatedOnly;
                        record.note = Some(e.to_string());
                    }
                }
                out = edit.image;
            }
            Err(e) => {
                record.note = Some(e.to_string());
                failures += 1;
            }
        }
        log.edits.push(record);
    }
    Ok((out, log))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthetic;
    use crate::topology::{build_graph, GraphParams};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn validation() {
        assert!(AugmentParams::default().validate().is_ok());
        let p = AugmentParams {
            l_range: (10.0, 20.0),
            l_d_range: (20.0, 30.0),
            ..AugmentParams::default()
        };
        assert!(p.validate().is_err());
        let p = AugmentParams {
            n_range: (3, 1),
            ..AugmentParams::default()
        };
        assert!(p.validate().is_err());
        let p = AugmentParams {
            t_b: -1.0,
            ..AugmentParams::default()
        };
        assert!(p.validate().is_err());
    }

    #[test]
    fn draws_respect_ranges() {
        let p = AugmentParams::default();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..5000 {
            let (l, l_d) = p.draw_lengths(&mut rng);
            assert!((20.0..=100.0).contains(&l));
            assert!((0.0..30.0).contains(&l_d));
            assert!(l_d < l);
        }
        let tight = AugmentParams {
            l_range: (20.0, 25.0),
            l_d_range: (0.0, 60.0),
            ..p
        };
        for _ in 0..2000 {
            let (l, l_d) = tight.draw_lengths(&mut rng);
            assert!(l_d < l);
        }
    }

    #[test]
    fn zero_edits_is_identity() {
        let (image, mask) = synthetic::bar_grid(4, 3, 120, 5, 200.0, 50.0);
        let graph = build_graph(&mask, &GraphParams::default());
        let params = AugmentParams {
            n_range: (0, 0),
            ..AugmentParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (out, log) = augment_image(&image, &mask, &graph, &params, &mut rng).unwrap();
        assert_eq!(out, image);
        assert!(log.edits.is_empty());
    }

    #[test]
    fn seeded_runs_repeat() {
        let (image, mask) = synthetic::bar_grid(4, 3, 120, 5, 200.0, 50.0);
        let graph = build_graph(&mask, &GraphParams::default());
        let params = AugmentParams {
            n_range: (4, 8),
            ..AugmentParams::default()
        };
        let run = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            augment_image(&image, &mask, &graph, &params, &mut rng).unwrap()
        };
        let (a, la) = run(5);
        let (b, lb) = run(5);
        assert_eq!(a, b);
        assert_eq!(la, lb);
        assert!(la.edited() >= 4);
        assert!(a
            .as_slice()
            .iter()
            .zip(image.as_slice())
            .any(|(x, y)| x != y));
        // Background is never touched.
        for p in mask.inverted().pixels() {
            assert_eq!(a.get(p), image.get(p));
        }
        let (c, _) = run(6);
        assert_ne!(a, c);
    }

    #[test]
    fn segments_edited_once() {
        let (image, mask) = synthetic::bar_grid(2, 2, 120, 5, 200.0, 50.0);
        let graph = build_graph(&mask, &GraphParams::default());
        let params = AugmentParams {
            n_range: (10, 10),
            max_attempts: 5,
            ..AugmentParams::default()
        };
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let (_, log) = augment_image(&image, &mask, &graph, &params, &mut rng).unwrap();
        assert_eq!(log.edited(), 4);
        let mut segs: Vec<usize> = log
            .edits
            .iter()
            .filter(|e| e.status != EditStatus::Skipped)
            .filter_map(|e| e.segment)
            .collect();
        segs.sort();
        segs.dedup();
        assert_eq!(segs.len(), 4);
        assert_eq!(log.edits.len(), 4 + 5);
    }
}

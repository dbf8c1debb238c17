//! Local vessel salience: per-pixel contrast between a vessel cross-section
//! and the background right next to it, smoothed along the medial axis.

mod contrast;
mod cross_section;

pub use contrast::{local_contrast, smooth_along_mas};
pub use cross_section::{find_cross_section, sample_background, ContourIndex, CrossSection};

use rayon::prelude::*;
use thiserror::Error;

use crate::raster::{nearest_source_map, BinaryMask, GrayImage, Pixel, ScalarField};
use crate::topology::{build_graph, GraphParams, VesselGraph};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SalienceError {
    #[error("no border pixel opposite to {0:?}")]
    NoOppositePixel(Pixel),
    #[error("pixel {0:?} is not part of the vessel mask")]
    OutsideVessel(Pixel),
    #[error("empty vessel or background sample")]
    EmptySample,
    #[error("no medial-axis pixel has a defined salience")]
    NoDefinedValues,
    #[error("image is {image:?} but mask is {mask:?}")]
    DimensionMismatch {
        image: (usize, usize),
        mask: (usize, usize),
    },
    #[error("invalid parameter: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LvsParams {
    /// Radius of the background disks around both cross-section ends.
    pub background_radius: f64,
    /// Half-width of the smoothing window, in medial-axis pixels.
    pub smoothing: usize,
    pub graph: GraphParams,
}

impl Default for LvsParams {
    fn default() -> Self {
        Self {
            background_radius: 4.0,
            smoothing: 15,
            graph: GraphParams::default(),
        }
    }
}

impl LvsParams {
    pub fn validate(&self) -> Result<(), SalienceError> {
        if !(self.background_radius > 0.0 && self.background_radius.is_finite()) {
            return Err(SalienceError::InvalidParams(format!(
                "background radius must be positive, got {}",
                self.background_radius
            )));
        }
        if self.graph.min_branch_len < 0.0 || self.graph.merge_radius < 0.0 {
            return Err(SalienceError::InvalidParams(
                "graph thresholds must be non-negative".into(),
            ));
        }
        Ok(())
    }
}

/// Salience along one edge, in path order.
#[derive(Debug, Clone, PartialEq)]
pub struct MasSalience {
    pub pixels: Vec<Pixel>,
    /// Raw contrast; `None` where no cross-section or background was found.
    pub delta: Vec<Option<f64>>,
    /// Smoothed contrast.
    pub lvs: Vec<Option<f64>>,
}

impl MasSalience {
    pub fn defined(&self) -> impl Iterator<Item = (Pixel, f64)> + '_ {
        self.pixels
            .iter()
            .zip(&self.lvs)
            .filter_map(|(&p, v)| v.map(|v| (p, v)))
    }
}

#[derive(Debug, Clone)]
pub struct LvsResult {
    pub graph: VesselGraph,
    /// One entry per graph edge, same order.
    pub per_edge: Vec<MasSalience>,
    pub field: ScalarField,
}

/// Raw contrast at one medial-axis pixel, `None` when it cannot be measured.
pub fn pixel_contrast(
    p: Pixel,
    image: &GrayImage,
    mask: &BinaryMask,
    index: &ContourIndex,
    background_radius: f64,
) -> Option<f64> {
    let cs = find_cross_section(p, index).ok()?;
    let sb = sample_background(&cs, mask, background_radius);
    local_contrast(image, &cs.vessel_samples, &sb).ok()
}

/// Gives every vessel pixel the value of its nearest medial-axis sample.
///
/// Ties go to the row-major smaller sample pixel; a pixel listed twice keeps
/// its first value. Background pixels are invalid.
pub fn expand_to_vessel(
    values: &[(Pixel, f64)],
    mask: &BinaryMask,
) -> Result<ScalarField, SalienceError> {
    if values.is_empty() {
        return Err(SalienceError::NoDefinedValues);
    }
    let sources: Vec<Pixel> = values.iter().map(|(p, _)| *p).collect();
    let nearest = nearest_source_map(&sources, mask);
    let mut field = ScalarField::new(mask.width(), mask.height());
    for p in mask.pixels() {
        if let Some(i) = nearest[p.row * mask.width() + p.col] {
            field.set(p, values[i].1 as f32);
        }
    }
    Ok(field)
}

/// Full pipeline: graph, cross-sections, contrast, smoothing, expansion.
///
/// A mask without any measurable medial-axis pixel (including an empty mask)
/// yields an all-invalid field.
pub fn compute_lvs(
    image: &GrayImage,
    mask: &BinaryMask,
    params: &LvsParams,
) -> Result<LvsResult, SalienceError> {
    params.validate()?;
    if !image.same_shape(mask) {
        return Err(SalienceError::DimensionMismatch {
            image: (image.width(), image.height()),
            mask: (mask.width(), mask.height()),
        });
    }
    let graph = build_graph(mask, &params.graph);
    let index = ContourIndex::new(mask);
    let per_edge: Vec<MasSalience> = graph
        .edges
        .par_iter()
        .map(|edge| {
            let delta: Vec<Option<f64>> = edge
                .path
                .iter()
                .map(|&p| pixel_contrast(p, image, mask, &index, params.background_radius))
                .collect();
            let lvs = smooth_along_mas(&delta, params.smoothing);
            MasSalience {
                pixels: edge.path.clone(),
                delta,
                lvs,
            }
        })
        .collect();
    let values: Vec<(Pixel, f64)> = per_edge.iter().flat_map(MasSalience::defined).collect();
    let field = match expand_to_vessel(&values, mask) {
        Ok(f) => f,
        Err(SalienceError::NoDefinedValues) => ScalarField::new(mask.width(), mask.height()),
        Err(e) => return Err(e),
    };
    Ok(LvsResult {
        graph,
        per_edge,
        field,
    })
}

pub fn compute_lvs_map(
    image: &GrayImage,
    mask: &BinaryMask,
    params: &LvsParams,
) -> Result<ScalarField, SalienceError> {
    compute_lvs(image, mask, params).map(|r| r.field)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn px(r: usize, c: usize) -> Pixel {
        Pixel::new(r, c)
    }

    fn brute_expand(values: &[(Pixel, f64)], mask: &BinaryMask) -> ScalarField {
        let mut field = ScalarField::new(mask.width(), mask.height());
        for p in mask.pixels() {
            let best = values
                .iter()
                .enumerate()
                .min_by_key(|(i, (q, _))| (p.dist2(*q), *q, *i))
                .unwrap();
            field.set(p, best.1 .1 as f32);
        }
        field
    }

    #[test]
    fn single_source_fills_component() {
        let mask = BinaryMask::from_fn(9, 9, |p| p.dist2(px(4, 4)) <= 9);
        let field = expand_to_vessel(&[(px(4, 4), 0.7)], &mask).unwrap();
        assert_eq!(field.valid_count(), mask.count());
        assert!(field.iter_valid().all(|(_, v)| v == 0.7f32));
        assert_eq!(field.get(px(0, 0)), None);
    }

    #[test]
    fn two_sources_split_bar() {
        let mask = BinaryMask::from_fn(11, 3, |p| p.row == 1);
        let values = [(px(1, 0), 0.2), (px(1, 10), 0.8)];
        let field = expand_to_vessel(&values, &mask).unwrap();
        assert_eq!(field, brute_expand(&values, &mask));
        for c in 0..5 {
            assert_eq!(field.get(px(1, c)), Some(0.2));
        }
        // Equidistant column goes to the row-major smaller source.
        assert_eq!(field.get(px(1, 5)), Some(0.2));
        for c in 6..11 {
            assert_eq!(field.get(px(1, c)), Some(0.8));
        }
    }

    #[test]
    fn expansion_needs_values() {
        let mask = BinaryMask::from_fn(3, 3, |_| true);
        assert_eq!(
            expand_to_vessel(&[], &mask),
            Err(SalienceError::NoDefinedValues)
        );
    }

    #[test]
    fn empty_mask_gives_invalid_field() {
        let image = GrayImage::new(10, 10, 50.0);
        let field =
            compute_lvs_map(&image, &BinaryMask::new(10, 10), &LvsParams::default()).unwrap();
        assert_eq!(field.valid_count(), 0);
    }

    #[test]
    fn rejects_bad_inputs() {
        let image = GrayImage::new(10, 10, 50.0);
        let mask = BinaryMask::new(10, 12);
        assert!(matches!(
            compute_lvs_map(&image, &mask, &LvsParams::default()),
            Err(SalienceError::DimensionMismatch { .. })
        ));
        let params = LvsParams {
            background_radius: 0.0,
            ..LvsParams::default()
        };
        assert!(matches!(
            compute_lvs_map(&image, &BinaryMask::new(10, 10), &params),
            Err(SalienceError::InvalidParams(_))
        ));
    }

    fn bar_scene(vessel: f64, background: f64) -> (GrayImage, BinaryMask) {
        let mask = BinaryMask::from_fn(60, 25, |p| {
            (10..15).contains(&p.row) && (5..55).contains(&p.col)
        });
        let image = GrayImage::from_fn(60, 25, |p| if mask.get(p) { vessel } else { background });
        (image, mask)
    }

    #[test]
    fn uniform_bar_contrast() {
        let (image, mask) = bar_scene(200.0, 50.0);
        let field = compute_lvs_map(&image, &mask, &LvsParams::default()).unwrap();
        assert_eq!(field.valid_count(), mask.count());
        for (_, v) in field.iter_valid() {
            assert!((v as f64 - 0.75).abs() <= 0.02, "{v}");
        }
        let (image, mask) = bar_scene(80.0, 80.0);
        let field = compute_lvs_map(&image, &mask, &LvsParams::default()).unwrap();
        assert!(field.iter_valid().all(|(_, v)| v.abs() <= 0.02));
    }

    #[test]
    fn fading_bar_is_monotone() {
        // Fades between columns 60 and 90, then a plain stretch longer than the window.
        let (image, mask) = crate::synthetic::fading_bar(120, 25, 5, 60, 90, 200.0, 50.0);
        let result = compute_lvs(&image, &mask, &LvsParams::default()).unwrap();
        let field = &result.field;
        let mut prev = f32::INFINITY;
        for c in 5..115 {
            let v = field.get(px(12, c)).unwrap();
            assert!(v <= prev + 1e-6, "column {c}: {v} after {prev}");
            prev = v;
        }
        assert!(prev.abs() <= 0.05);
        assert!(field.get(px(12, 10)).unwrap() > 0.7);
    }

    #[test]
    fn deterministic_and_scale_invariant() {
        let mask = BinaryMask::from_fn(48, 40, |p| {
            let on_line = (p.row as i64 - 20).abs() <= 2 && p.col >= 4 && p.col < 44;
            let branch = (p.col as i64 - 24).abs() <= 1 && p.row >= 20 && p.row < 36;
            on_line || branch
        });
        let image = GrayImage::from_fn(48, 40, |p| {
            let noise = ((p.row * 31 + p.col * 17) % 23) as f64;
            if mask.get(p) {
                150.0 + noise
            } else {
                40.0 + noise
            }
        });
        let params = LvsParams::default();
        let a = compute_lvs_map(&image, &mask, &params).unwrap();
        let b = compute_lvs_map(&image, &mask, &params).unwrap();
        assert_eq!(a, b);
        let scaled = GrayImage::from_fn(48, 40, |p| image.get(p) * 0.5);
        let c = compute_lvs_map(&scaled, &mask, &params).unwrap();
        for (p, v) in a.iter_valid() {
            assert!((v - c.get(p).unwrap()).abs() < 1e-6);
        }
    }

    proptest! {
        #[test]
        fn expansion_matches_brute_force(
            sources in proptest::collection::vec((0usize..15, 0usize..15, -1.0f64..1.0), 1..8),
            bits in proptest::collection::vec(any::<bool>(), 225),
        ) {
            let mask = BinaryMask::from_fn(15, 15, |p| bits[p.row * 15 + p.col]);
            let values: Vec<(Pixel, f64)> = sources.iter().map(|&(r, c, v)| (px(r, c), v)).collect();
            let field = expand_to_vessel(&values, &mask).unwrap();
            prop_assert_eq!(field, brute_expand(&values, &mask));
        }
    }
}

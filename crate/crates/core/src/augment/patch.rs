use rand::Rng;

use crate::raster::{BinaryMask, GrayImage, Pixel, NEIGHBORS_8};

use super::{AugmentError, PreservationField};

/// Mean intensity of the background pixels in the square of half-side
/// `half` around `center`, clipped to the image.
pub fn local_background_mean(
    image: &GrayImage,
    mask: &BinaryMask,
    center: Pixel,
    half: usize,
) -> Result<f64, AugmentError> {
    let r0 = center.row.saturating_sub(half);
    let c0 = center.col.saturating_sub(half);
    let r1 = (center.row + half).min(mask.height() - 1);
    let c1 = (center.col + half).min(mask.width() - 1);
    let (mut sum, mut n) = (0.0, 0usize);
    for row in r0..=r1 {
        for col in c0..=c1 {
            let p = Pixel::new(row, col);
            if !mask.get(p) {
                sum += image.get(p);
                n += 1;
            }
        }
    }
    if n == 0 {
        return Err(AugmentError::NoBackgroundInWindow(center));
    }
    Ok(sum / n as f64)
}

/// Pulls every affected pixel towards `background` by its preservation
/// factor: `f * (I - I_m) + I_m`.
pub fn attenuate(image: &GrayImage, field: &PreservationField, background: f64) -> GrayImage {
    let mut out = image.clone();
    for &(p, f) in &field.affected {
        out.set(p, f * (image.get(p) - background) + background);
    }
    out
}

/// Background ring around a region and the region pixels touching it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionContours {
    /// Background pixels with an 8-neighbor in the region.
    pub outer: Vec<Pixel>,
    /// Region pixels with an 8-neighbor in `outer`.
    pub inner: Vec<Pixel>,
}

pub fn region_contours(region: &BinaryMask, mask: &BinaryMask) -> RegionContours {
    let (w, h) = (mask.width(), mask.height());
    let touches = |p: Pixel, set: &dyn Fn(Pixel) -> bool| {
        NEIGHBORS_8
            .iter()
            .filter_map(|&(dr, dc)| p.offset(dr, dc, w, h))
            .any(set)
    };
    let outer: Vec<Pixel> = mask
        .inverted()
        .pixels()
        .filter(|&p| !region.get(p) && touches(p, &|q| region.get(q)))
        .collect();
    let outer_mask = BinaryMask::from_pixels(w, h, &outer);
    let inner = region
        .pixels()
        .filter(|&p| touches(p, &|q| outer_mask.get(q)))
        .collect();
    RegionContours { outer, inner }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchMatch {
    /// Source minus destination, as `(rows, cols)`.
    pub offset: (i64, i64),
    /// `|mean(outer) - mean(translated inner)|`.
    pub difference: f64,
}

fn mean_at(image: &GrayImage, pixels: &[Pixel], offset: (i64, i64)) -> f64 {
    let sum: f64 = pixels
        .iter()
        .map(|p| {
            image.get(Pixel::new(
                (p.row as i64 + offset.0) as usize,
                (p.col as i64 + offset.1) as usize,
            ))
        })
        .sum();
    sum / pixels.len() as f64
}

/// Looks for a background area shaped like `region` whose rim matches the
/// background around `region`.
///
/// Candidate placements are those where the whole translated region lies on
/// background of `mask` (erosion of the inverted mask by the region). They
/// are visited in a seeded random order and the first one whose translated
/// inner contour has a mean within `t_b` of the outer contour's mean wins,
/// which is a uniform draw among all qualifying placements.
pub fn find_background_patch<R: Rng + ?Sized>(
    image: &GrayImage,
    mask: &BinaryMask,
    region: &BinaryMask,
    anchor_near: Pixel,
    t_b: f64,
    rng: &mut R,
) -> Result<PatchMatch, AugmentError> {
    let pixels: Vec<Pixel> = region.pixels().collect();
    let contours = region_contours(region, mask);
    if pixels.is_empty() || contours.outer.is_empty() || contours.inner.is_empty() {
        return Err(AugmentError::NoMatchingPatch);
    }
    let target = mean_at(image, &contours.outer, (0, 0));
    let anchor = *pixels
        .iter()
        .min_by_key(|p| (p.dist2(anchor_near), **p))
        .expect("non-empty region");
    let rel: Vec<(i64, i64)> = pixels.iter().map(|&p| anchor.vector_to(p)).collect();

    let (w, h) = (mask.width(), mask.height());
    let fits = |q: Pixel| {
        rel.iter().all(|&(dr, dc)| {
            let (r, c) = (q.row as i64 + dr, q.col as i64 + dc);
            r >= 0 && c >= 0 && (r as usize) < h && (c as usize) < w && !mask.get_signed(r, c)
        })
    };

    let mut order: Vec<u32> = (0..(w * h) as u32).collect();
    for i in 0..order.len() {
        let j = rng.gen_range(i..order.len());
        order.swap(i, j);
        let k = order[i] as usize;
        let q = Pixel::new(k / w, k % w);
        if !fits(q) {
            continue;
        }
        let offset = anchor.vector_to(q);
        let difference = (target - mean_at(image, &contours.inner, offset)).abs();
        if difference < t_b {
            return Ok(PatchMatch { offset, difference });
        }
    }
    Err(AugmentError::NoMatchingPatch)
}

/// Copies the pixels at `region + offset` onto `region`.
pub fn synthesize_discontinuity(
    image: &GrayImage,
    region: &[Pixel],
    offset: (i64, i64),
) -> GrayImage {
    let mut out = image.clone();
    for &p in region {
        let src = Pixel::new(
            (p.row as i64 + offset.0) as usize,
            (p.col as i64 + offset.1) as usize,
        );
        out.set(p, image.get(src));
    }
    out
}

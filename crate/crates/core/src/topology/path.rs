//! Arc length along ordered pixel paths.

use crate::raster::Pixel;

use super::TopologyError;

/// Length of one step between 8-adjacent pixels: 1 axially, sqrt(2) diagonally.
#[inline]
pub fn step_length(a: Pixel, b: Pixel) -> f64 {
    (a.dist2(b) as f64).sqrt()
}

/// Running arc length: `out[i]` is the path length from index 0 to `i`.
pub fn cumulative_lengths(path: &[Pixel]) -> Vec<f64> {
    let mut out = Vec::with_capacity(path.len());
    let mut acc = 0.0;
    for (i, &p) in path.iter().enumerate() {
        if i > 0 {
            acc += step_length(path[i - 1], p);
        }
        out.push(acc);
    }
    out
}

/// Path length between indices `i` and `j` (in either order).
pub fn path_length(path: &[Pixel], i: usize, j: usize) -> Result<f64, TopologyError> {
    let len = path.len();
    for idx in [i, j] {
        if idx >= len {
            return Err(TopologyError::IndexOutOfRange { index: idx, len });
        }
    }
    let (lo, hi) = if i <= j { (i, j) } else { (j, i) };
    Ok(path[lo..=hi]
        .windows(2)
        .map(|w| step_length(w[0], w[1]))
        .sum())
}

/// Total arc length of `path`.
pub fn total_length(path: &[Pixel]) -> f64 {
    path.windows(2).map(|w| step_length(w[0], w[1])).sum()
}

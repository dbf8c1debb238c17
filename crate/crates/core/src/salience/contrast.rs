use crate::raster::{GrayImage, Pixel};

use super::SalienceError;

fn mean_intensity(image: &GrayImage, pixels: &[Pixel]) -> f64 {
    pixels.iter().map(|&p| image.get(p)).sum::<f64>() / pixels.len() as f64
}

/// Relative contrast `(I_v - I_b) / max(I_v, I_b)` between the mean
/// intensity of the vessel samples and of the background samples.
///
/// Lies in `[-1, 1]` for non-negative intensities; zero when both means are zero.
pub fn local_contrast(
    image: &GrayImage,
    vessel: &[Pixel],
    background: &[Pixel],
) -> Result<f64, SalienceError> {
    if vessel.is_empty() || background.is_empty() {
        return Err(SalienceError::EmptySample);
    }
    let iv = mean_intensity(image, vessel);
    let ib = mean_intensity(image, background);
    Ok(relative_difference(iv, ib))
}

pub(crate) fn relative_difference(iv: f64, ib: f64) -> f64 {
    let denom = iv.max(ib);
    if denom == 0.0 {
        0.0
    } else {
        (iv - ib) / denom
    }
}

/// Moving average over `[i - k, i + k]` clipped to the segment.
///
/// Undefined entries are skipped and the sum is divided by the number of
/// defined entries actually in the window; a window with none stays undefined.
pub fn smooth_along_mas(deltas: &[Option<f64>], k: usize) -> Vec<Option<f64>> {
    let n = deltas.len();
    (0..n)
        .map(|i| {
            let lo = i.saturating_sub(k);
            let hi = (i + k).min(n - 1);
            let mut defined = deltas[lo..=hi].iter().flatten();
            let first = *defined.next()?;
            let (sum, count) = defined.fold((first, 1usize), |(s, c), &d| (s + d, c + 1));
            Some(sum / count as f64)
        })
        .collect()
}

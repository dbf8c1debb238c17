//! Raster containers shared by every stage of the pipeline.
//!
//! All rasters are stored row-major. Intensities live on a real-valued
//! `[0, 255]` scale regardless of the bit depth of the file they came from.

mod geometry;
mod io;

pub use geometry::{
    disk_pixels, label_components, nearest_source_map, rasterize_line, Connectivity, PointGrid,
    NEIGHBORS_4, NEIGHBORS_8,
};
pub use io::{
    load_gray, load_mask, load_scalar_field, save_gray_png, save_mask_png, save_scalar_field,
    save_scalar_field_png, scalar_field_from_pfm, scalar_field_to_pfm,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RasterError {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("failed to decode image: {0}")]
    Decode(#[from] image::ImageError),
    #[error("unsupported channel count: {0}")]
    UnsupportedChannels(u8),
    #[error("malformed PFM: {0}")]
    Pfm(String),
    #[error("raster dimensions must be positive and match the data length")]
    BadDimensions,
    #[error("intensity {value} at index {index} is outside [0, 255]")]
    IntensityOutOfRange { index: usize, value: f64 },
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
}

/// A pixel position. `row` grows downwards, `col` rightwards.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Pixel {
    pub row: usize,
    pub col: usize,
}

impl Pixel {
    pub const fn new(row: usize, col: usize) -> Self {
        Self { row, col }
    }

    /// Squared Euclidean distance.
    #[inline]
    pub fn dist2(self, other: Pixel) -> i64 {
        let dr = self.row as i64 - other.row as i64;
        let dc = self.col as i64 - other.col as i64;
        dr * dr + dc * dc
    }

    #[inline]
    pub fn dist(self, other: Pixel) -> f64 {
        (self.dist2(other) as f64).sqrt()
    }

    /// `other - self` as a (row, col) vector.
    #[inline]
    pub fn vector_to(self, other: Pixel) -> (i64, i64) {
        (
            other.row as i64 - self.row as i64,
            other.col as i64 - self.col as i64,
        )
    }

    /// Offset by a signed delta, `None` when the result leaves `[0, height) x [0, width)`.
    #[inline]
    pub fn offset(self, dr: i64, dc: i64, width: usize, height: usize) -> Option<Pixel> {
        let r = self.row as i64 + dr;
        let c = self.col as i64 + dc;
        if r < 0 || c < 0 || r >= height as i64 || c >= width as i64 {
            None
        } else {
            Some(Pixel::new(r as usize, c as usize))
        }
    }

    /// True for 8-adjacent or equal pixels.
    #[inline]
    pub fn touches(self, other: Pixel) -> bool {
        self.row.abs_diff(other.row) <= 1 && self.col.abs_diff(other.col) <= 1
    }
}

impl From<(usize, usize)> for Pixel {
    fn from((row, col): (usize, usize)) -> Self {
        Pixel::new(row, col)
    }
}

/// Grayscale image with intensities in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrayImage {
    width: usize,
    height: usize,
    data: Vec<f64>,
}

impl GrayImage {
    /// Uniform image.
    pub fn new(width: usize, height: usize, fill: f64) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        assert!(fill.is_finite() && (0.0..=255.0).contains(&fill));
        Self {
            width,
            height,
            data: vec![fill; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, data: Vec<f64>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 || data.len() != width * height {
            return Err(RasterError::BadDimensions);
        }
        if let Some((index, &value)) = data
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_finite() || **v < 0.0 || **v > 255.0)
        {
            return Err(RasterError::IntensityOutOfRange { index, value });
        }
        Ok(Self {
            width,
            height,
            data,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(Pixel) -> f64) -> Self {
        assert!(width > 0 && height > 0, "image dimensions must be positive");
        let mut data = Vec::with_capacity(width * height);
        for row in 0..height {
            for col in 0..width {
                data.push(f(Pixel::new(row, col)).clamp(0.0, 255.0));
            }
        }
        Self {
            width,
            height,
            data,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, p: Pixel) -> f64 {
        self.data[p.row * self.width + p.col]
    }

    /// Writes `value` clamped to `[0, 255]`.
    #[inline]
    pub fn set(&mut self, p: Pixel, value: f64) {
        debug_assert!(value.is_finite());
        self.data[p.row * self.width + p.col] = value.clamp(0.0, 255.0);
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn same_shape(&self, mask: &BinaryMask) -> bool {
        self.width == mask.width() && self.height == mask.height()
    }
}

/// Boolean raster; `true` marks vessel (foreground) pixels.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BinaryMask {
    width: usize,
    height: usize,
    bits: Vec<bool>,
}

impl BinaryMask {
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "mask dimensions must be positive");
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_vec(width: usize, height: usize, bits: Vec<bool>) -> Result<Self, RasterError> {
        if width == 0 || height == 0 || bits.len() != width * height {
            return Err(RasterError::BadDimensions);
        }
        Ok(Self {
            width,
            height,
            bits,
        })
    }

    pub fn from_fn(width: usize, height: usize, mut f: impl FnMut(Pixel) -> bool) -> Self {
        let mut mask = Self::new(width, height);
        for row in 0..height {
            for col in 0..width {
                let p = Pixel::new(row, col);
                mask.bits[row * width + col] = f(p);
            }
        }
        mask
    }

    /// Mask with the given pixels set. Out-of-bounds pixels are ignored.
    pub fn from_pixels<'a>(
        width: usize,
        height: usize,
        pixels: impl IntoIterator<Item = &'a Pixel>,
    ) -> Self {
        let mut mask = Self::new(width, height);
        for &p in pixels {
            if p.row < height && p.col < width {
                mask.set(p, true);
            }
        }
        mask
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, p: Pixel) -> bool {
        self.bits[p.row * self.width + p.col]
    }

    /// Like [`get`](Self::get) but treats anything outside the raster as background.
    #[inline]
    pub fn get_signed(&self, row: i64, col: i64) -> bool {
        row >= 0
            && col >= 0
            && (row as usize) < self.height
            && (col as usize) < self.width
            && self.bits[row as usize * self.width + col as usize]
    }

    #[inline]
    pub fn set(&mut self, p: Pixel, value: bool) {
        self.bits[p.row * self.width + p.col] = value;
    }

    pub fn as_slice(&self) -> &[bool] {
        &self.bits
    }

    pub fn count(&self) -> usize {
        self.bits.iter().filter(|b| **b).count()
    }

    pub fn is_empty(&self) -> bool {
        !self.bits.iter().any(|b| *b)
    }

    /// Foreground pixels in row-major order.
    pub fn pixels(&self) -> impl Iterator<Item = Pixel> + '_ {
        let width = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, b)| **b)
            .map(move |(i, _)| Pixel::new(i / width, i % width))
    }

    pub fn same_shape(&self, other: &BinaryMask) -> bool {
        self.width == other.width && self.height == other.height
    }

    pub fn inverted(&self) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self.bits.iter().map(|b| !b).collect(),
        }
    }

    /// Number of 8-neighbors set, `p` itself excluded.
    pub fn neighbor_count(&self, p: Pixel) -> usize {
        NEIGHBORS_8
            .iter()
            .filter(|(dr, dc)| self.get_signed(p.row as i64 + dr, p.col as i64 + dc))
            .count()
    }
}

/// Real-valued raster with a per-pixel validity flag.
///
/// Values are single precision so that the on-disk PFM form round-trips
/// exactly. Invalid pixels always hold `0.0` in memory.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    width: usize,
    height: usize,
    value: Vec<f32>,
    valid: Vec<bool>,
}

impl ScalarField {
    /// All-invalid field.
    pub fn new(width: usize, height: usize) -> Self {
        assert!(width > 0 && height > 0, "field dimensions must be positive");
        Self {
            width,
            height,
            value: vec![0.0; width * height],
            valid: vec![false; width * height],
        }
    }

    /// Field valid exactly on the foreground of `mask`.
    pub fn from_mask_fn(mask: &BinaryMask, mut f: impl FnMut(Pixel) -> f32) -> Self {
        let mut field = Self::new(mask.width(), mask.height());
        for p in mask.pixels() {
            field.set(p, f(p));
        }
        field
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    #[inline]
    pub fn get(&self, p: Pixel) -> Option<f32> {
        let i = p.row * self.width + p.col;
        self.valid[i].then_some(self.value[i])
    }

    /// Stores a finite value and marks the pixel valid.
    #[inline]
    pub fn set(&mut self, p: Pixel, value: f32) {
        assert!(value.is_finite(), "scalar field values must be finite");
        let i = p.row * self.width + p.col;
        self.value[i] = value;
        self.valid[i] = true;
    }

    #[inline]
    pub fn invalidate(&mut self, p: Pixel) {
        let i = p.row * self.width + p.col;
        self.value[i] = 0.0;
        self.valid[i] = false;
    }

    pub fn is_valid(&self, p: Pixel) -> bool {
        self.valid[p.row * self.width + p.col]
    }

    pub fn valid_count(&self) -> usize {
        self.valid.iter().filter(|v| **v).count()
    }

    /// Valid pixels with their values, row-major.
    pub fn iter_valid(&self) -> impl Iterator<Item = (Pixel, f32)> + '_ {
        let width = self.width;
        self.valid
            .iter()
            .zip(&self.value)
            .enumerate()
            .filter(|(_, (ok, _))| **ok)
            .map(move |(i, (_, v))| (Pixel::new(i / width, i % width), *v))
    }

    pub fn valid_mask(&self) -> BinaryMask {
        BinaryMask {
            width: self.width,
            height: self.height,
            bits: self.valid.clone(),
        }
    }
}

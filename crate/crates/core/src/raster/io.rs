//! Raster codecs: PNG/PGM input, PNG output, PFM for scalar fields.

use std::fs;
use std::path::Path;

use image::{DynamicImage, ImageFormat, ImageReader};

use super::{BinaryMask, GrayImage, RasterError, ScalarField};

fn decode(path: &Path) -> Result<DynamicImage, RasterError> {
    Ok(ImageReader::open(path)?.with_guessed_format()?.decode()?)
}

/// Loads a single-channel 8- or 16-bit raster onto the `[0, 255]` scale.
pub fn load_gray(path: impl AsRef<Path>) -> Result<GrayImage, RasterError> {
    let img = decode(path.as_ref())?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let data = match img {
        DynamicImage::ImageLuma8(buf) => buf.into_raw().into_iter().map(f64::from).collect(),
        DynamicImage::ImageLuma16(buf) => buf
            .into_raw()
            .into_iter()
            .map(|v| f64::from(v) / 65535.0 * 255.0)
            .collect(),
        other => {
            return Err(RasterError::UnsupportedChannels(
                other.color().channel_count(),
            ))
        }
    };
    GrayImage::from_vec(w, h, data)
}

/// Loads a mask; any nonzero sample is foreground.
pub fn load_mask(path: impl AsRef<Path>) -> Result<BinaryMask, RasterError> {
    let img = decode(path.as_ref())?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let bits = match img {
        DynamicImage::ImageLuma8(buf) => buf.into_raw().into_iter().map(|v| v > 0).collect(),
        DynamicImage::ImageLuma16(buf) => buf.into_raw().into_iter().map(|v| v > 0).collect(),
        other => {
            return Err(RasterError::UnsupportedChannels(
                other.color().channel_count(),
            ))
        }
    };
    BinaryMask::from_vec(w, h, bits)
}

fn write_luma8(
    path: &Path,
    width: usize,
    height: usize,
    bytes: Vec<u8>,
) -> Result<(), RasterError> {
    let buf = image::GrayImage::from_raw(width as u32, height as u32, bytes)
        .ok_or(RasterError::BadDimensions)?;
    buf.save_with_format(path, ImageFormat::Png)?;
    Ok(())
}

/// Writes an 8-bit PNG; intensities are rounded to the nearest integer.
pub fn save_gray_png(image: &GrayImage, path: impl AsRef<Path>) -> Result<(), RasterError> {
    let bytes = image
        .as_slice()
        .iter()
        .map(|v| v.round().clamp(0.0, 255.0) as u8)
        .collect();
    write_luma8(path.as_ref(), image.width(), image.height(), bytes)
}

/// Writes a mask as an 8-bit PNG with foreground at 255.
pub fn save_mask_png(mask: &BinaryMask, path: impl AsRef<Path>) -> Result<(), RasterError> {
    let bytes = mask
        .as_slice()
        .iter()
        .map(|b| if *b { 255 } else { 0 })
        .collect();
    write_luma8(path.as_ref(), mask.width(), mask.height(), bytes)
}

/// 8-bit preview of a field: `v` maps to `clamp((v + 1) / 2, 0, 1) * 255`,
/// invalid pixels are black.
pub fn save_scalar_field_png(
    field: &ScalarField,
    path: impl AsRef<Path>,
) -> Result<(), RasterError> {
    let mut bytes = Vec::with_capacity(field.width() * field.height());
    for row in 0..field.height() {
        for col in 0..field.width() {
            let v = field.get(super::Pixel::new(row, col));
            bytes.push(match v {
                Some(v) => (((f64::from(v) + 1.0) / 2.0).clamp(0.0, 1.0) * 255.0).round() as u8,
                None => 0,
            });
        }
    }
    write_luma8(path.as_ref(), field.width(), field.height(), bytes)
}

/// Encodes a field as a little-endian grayscale PFM (`Pf`, scale `-1.0`).
///
/// Rows are written bottom to top as the format requires; invalid pixels
/// become quiet NaN.
pub fn scalar_field_to_pfm(field: &ScalarField) -> Vec<u8> {
    let (w, h) = (field.width(), field.height());
    let header = format!("Pf\n{w} {h}\n-1.0\n");
    let mut out = Vec::with_capacity(header.len() + 4 * w * h);
    out.extend_from_slice(header.as_bytes());
    for row in (0..h).rev() {
        for col in 0..w {
            let v = field.get(super::Pixel::new(row, col)).unwrap_or(f32::NAN);
            out.extend_from_slice(&v.to_le_bytes());
        }
    }
    out
}

pub fn scalar_field_from_pfm(bytes: &[u8]) -> Result<ScalarField, RasterError> {
    let bad = |msg: &str| RasterError::Pfm(msg.to_string());

    // Header: three whitespace-separated tokens after the magic, then exactly
    // one whitespace byte before the raster.
    let mut pos = 0;
    let mut tokens = Vec::with_capacity(4);
    while tokens.len() < 4 {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        let start = pos;
        while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if start == pos {
            return Err(bad("truncated header"));
        }
        tokens.push(std::str::from_utf8(&bytes[start..pos]).map_err(|_| bad("non-ascii header"))?);
    }
    if pos >= bytes.len() {
        return Err(bad("missing raster data"));
    }
    pos += 1;

    match tokens[0] {
        "Pf" => {}
        "PF" => return Err(RasterError::UnsupportedChannels(3)),
        _ => return Err(bad("bad magic")),
    }
    let w: usize = tokens[1].parse().map_err(|_| bad("bad width"))?;
    let h: usize = tokens[2].parse().map_err(|_| bad("bad height"))?;
    let scale: f32 = tokens[3].parse().map_err(|_| bad("bad scale"))?;
    if w == 0 || h == 0 || scale == 0.0 || !scale.is_finite() {
        return Err(bad("bad dimensions or scale"));
    }
    let little_endian = scale < 0.0;
    let data = &bytes[pos..];
    if data.len() != 4 * w * h {
        return Err(bad("raster size does not match header"));
    }

    let mut field = ScalarField::new(w, h);
    for (i, chunk) in data.chunks_exact(4).enumerate() {
        let raw: [u8; 4] = chunk.try_into().expect("chunks of four");
        let v = if little_endian {
            f32::from_le_bytes(raw)
        } else {
            f32::from_be_bytes(raw)
        };
        let (file_row, col) = (i / w, i % w);
        let p = super::Pixel::new(h - 1 - file_row, col);
        if v.is_finite() {
            field.set(p, v);
        } else if !v.is_nan() {
            return Err(bad("infinite sample"));
        }
    }
    Ok(field)
}

pub fn save_scalar_field(field: &ScalarField, path: impl AsRef<Path>) -> Result<(), RasterError> {
    fs::write(path, scalar_field_to_pfm(field))?;
    Ok(())
}

pub fn load_scalar_field(path: impl AsRef<Path>) -> Result<ScalarField, RasterError> {
    scalar_field_from_pfm(&fs::read(path)?)
}

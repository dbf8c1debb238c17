//! Small constructed scenes for tests, examples and demos.

use crate::raster::{rasterize_line, BinaryMask, GrayImage, Pixel};

/// Horizontal bar of `thickness` rows centered vertically, leaving `margin`
/// pixels on the left and right.
pub fn bar_mask(width: usize, height: usize, thickness: usize, margin: usize) -> BinaryMask {
    let top = (height - thickness) / 2;
    BinaryMask::from_fn(width, height, |p| {
        (top..top + thickness).contains(&p.row) && (margin..width - margin).contains(&p.col)
    })
}

/// Two-level image: `vessel` on the mask, `background` elsewhere.
pub fn paint(mask: &BinaryMask, vessel: f64, background: f64) -> GrayImage {
    GrayImage::from_fn(mask.width(), mask.height(), |p| {
        if mask.get(p) {
            vessel
        } else {
            background
        }
    })
}

/// Bar whose intensity goes from `vessel` down to `background` linearly
/// between columns `fade_start` and `fade_end`, and stays at `background`
/// beyond.
pub fn fading_bar(
    width: usize,
    height: usize,
    thickness: usize,
    fade_start: usize,
    fade_end: usize,
    vessel: f64,
    background: f64,
) -> (GrayImage, BinaryMask) {
    let mask = bar_mask(width, height, thickness, 5);
    let span = (fade_end - fade_start) as f64;
    let image = GrayImage::from_fn(width, height, |p| {
        if !mask.get(p) {
            return background;
        }
        let t = ((p.col as f64 - fade_start as f64) / span).clamp(0.0, 1.0);
        vessel + (background - vessel) * t
    });
    (image, mask)
}

/// `cols * rows` parallel horizontal bars of length `len`, spaced so that
/// every bar has plain background around it.
pub fn bar_grid(
    cols: usize,
    rows: usize,
    len: usize,
    thickness: usize,
    vessel: f64,
    background: f64,
) -> (GrayImage, BinaryMask) {
    let (cell_w, cell_h) = (len + 24, thickness + 18);
    let (w, h) = (cols * cell_w, rows * cell_h);
    let mask = BinaryMask::from_fn(w, h, |p| {
        let (cr, cc) = (p.row % cell_h, p.col % cell_w);
        (9..9 + thickness).contains(&cr) && (12..12 + len).contains(&cc)
    });
    (paint(&mask, vessel, background), mask)
}

/// Pixels within `radius` of the segment `a`-`b`.
pub fn thick_segment(mask: &mut BinaryMask, a: Pixel, b: Pixel, radius: f64) {
    let r = radius.ceil() as i64;
    for c in rasterize_line(a, b) {
        for dr in -r..=r {
            for dc in -r..=r {
                if ((dr * dr + dc * dc) as f64) <= radius * radius {
                    if let Some(q) = c.offset(dr, dc, mask.width(), mask.height()) {
                        mask.set(q, true);
                    }
                }
            }
        }
    }
}

/// Y-shaped vessel: a stem from the bottom meeting two arms that spread to
/// the top corners, all of half-width `radius`.
pub fn y_mask(size: usize, radius: f64) -> BinaryMask {
    let mut mask = BinaryMask::new(size, size);
    let m = size / 2;
    let junction = Pixel::new(m, m);
    let pad = radius.ceil() as usize + 4;
    thick_segment(&mut mask, Pixel::new(size - pad, m), junction, radius);
    thick_segment(&mut mask, junction, Pixel::new(pad, pad), radius);
    thick_segment(&mut mask, junction, Pixel::new(pad, size - pad), radius);
    mask
}

/// One-pixel line along row `row` with a perpendicular stub of
/// `stub` pixels hanging below its middle.
pub fn line_with_stub(width: usize, height: usize, row: usize, stub: usize) -> BinaryMask {
    let mid = width / 2;
    BinaryMask::from_fn(width, height, |p| {
        (p.row == row && (3..width - 3).contains(&p.col))
            || (p.col == mid && p.row > row && p.row <= row + stub)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_layout() {
        let (image, mask) = bar_grid(3, 2, 50, 5, 200.0, 50.0);
        assert_eq!(mask.count(), 6 * 50 * 5);
        assert_eq!(image.width(), 3 * 74);
        assert!(mask.pixels().all(|p| image.get(p) == 200.0));
    }

    #[test]
    fn fade_reaches_background() {
        let (image, mask) = fading_bar(100, 20, 5, 40, 80, 200.0, 50.0);
        assert_eq!(image.get(Pixel::new(10, 20)), 200.0);
        assert_eq!(image.get(Pixel::new(10, 60)), 125.0);
        assert_eq!(image.get(Pixel::new(10, 90)), 50.0);
        assert!(mask.get(Pixel::new(10, 90)));
    }

    #[test]
    fn stub_shape() {
        let m = line_with_stub(30, 10, 3, 2);
        assert_eq!(m.count(), 24 + 2);
    }
}

//! Border following (Suzuki & Abe, 1985) on binary masks.
//!
//! Foreground is traced with 4-connectivity and background with
//! 8-connectivity, so every foreground pixel that has a background pixel
//! anywhere in its 8-neighborhood lies on some traced border.

use crate::raster::{BinaryMask, Pixel};

/// One closed border. Consecutive pixels are 4-adjacent and the last pixel
/// is adjacent to (or equal to) the first; thin parts are visited twice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Contour {
    pub pixels: Vec<Pixel>,
    /// `true` for the border around a hole, `false` for an outer border.
    pub is_hole: bool,
}

// Clockwise: N, E, S, W.
const DIRS: [(i64, i64); 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];
const EAST: usize = 1;

fn direction(from: (i64, i64), to: (i64, i64)) -> usize {
    let d = (to.0 - from.0, to.1 - from.1);
    DIRS.iter().position(|&x| x == d).expect("4-adjacent")
}

/// Traces every outer border and hole border of `mask`, in raster order of
/// their starting pixels.
pub fn trace_contours(mask: &BinaryMask) -> Vec<Contour> {
    let (w, h) = (mask.width() as i64, mask.height() as i64);
    let pw = w + 2;
    let ph = h + 2;
    let mut f = vec![0i32; (pw * ph) as usize];
    for p in mask.pixels() {
        f[((p.row as i64 + 1) * pw + p.col as i64 + 1) as usize] = 1;
    }
    let at = |(r, c): (i64, i64)| (r * pw + c) as usize;
    let mut contours = Vec::new();
    let mut nbd: i32 = 1;

    for i in 1..=h {
        for j in 1..=w {
            let here = f[at((i, j))];
            if here == 0 {
                continue;
            }
            let start = if here == 1 && f[at((i, j - 1))] == 0 {
                Some(((i, j - 1), false))
            } else if here >= 1 && f[at((i, j + 1))] == 0 {
                Some(((i, j + 1), true))
            } else {
                None
            };
            let Some((from, is_hole)) = start else {
                continue;
            };
            nbd += 1;
            let origin = (i, j);
            let to_pixel = |(r, c): (i64, i64)| Pixel::new((r - 1) as usize, (c - 1) as usize);

            // 3.1: clockwise search for the last pixel of the border.
            let d0 = direction(origin, from);
            let first = (0..4)
                .map(|k| (d0 + k) % 4)
                .map(|d| (origin.0 + DIRS[d].0, origin.1 + DIRS[d].1))
                .find(|&q| f[at(q)] != 0);
            let Some(last) = first else {
                f[at(origin)] = -nbd;
                contours.push(Contour {
                    pixels: vec![to_pixel(origin)],
                    is_hole,
                });
                continue;
            };

            let mut pixels = Vec::new();
            let mut prev = last;
            let mut cur = origin;
            loop {
                pixels.push(to_pixel(cur));
                // 3.3: counterclockwise search starting after `prev`.
                let dp = direction(cur, prev);
                let mut east_zero = false;
                let mut next = prev;
                for k in 1..=4 {
                    let d = (dp + 4 - k) % 4;
                    let q = (cur.0 + DIRS[d].0, cur.1 + DIRS[d].1);
                    if f[at(q)] != 0 {
                        next = q;
                        break;
                    }
                    if d == EAST {
                        east_zero = true;
                    }
                }
                // 3.4
                if east_zero {
                    f[at(cur)] = -nbd;
                } else if f[at(cur)] == 1 {
                    f[at(cur)] = nbd;
                }
                // 3.5
                if next == origin && cur == last {
                    break;
                }
                prev = cur;
                cur = next;
            }
            contours.push(Contour { pixels, is_hole });
        }
    }
    contours
}

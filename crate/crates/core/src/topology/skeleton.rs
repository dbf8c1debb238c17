//! Topology-preserving thinning to an 8-connected, one-pixel-wide skeleton.
//!
//! Each iteration makes four directional sub-passes (north, south, east,
//! west). A sub-pass collects the border pixels facing that direction and
//! deletes them one at a time in raster order, re-checking every candidate
//! against the current state. A pixel is deleted only when it is simple
//! (8-connected foreground, 4-connected background; Yokoi connectivity
//! number equal to one) and is not an end point. Because every deletion
//! removes a simple point, the number of components and holes never changes.

use crate::raster::{BinaryMask, Pixel};

/// Thinned medial axes of a mask.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skeleton {
    mask: BinaryMask,
}

impl Skeleton {
    /// Wraps pixels that are already one pixel wide, e.g. a hand-built fixture.
    pub fn from_mask(mask: BinaryMask) -> Self {
        Self { mask }
    }

    pub fn mask(&self) -> &BinaryMask {
        &self.mask
    }

    pub fn into_mask(self) -> BinaryMask {
        self.mask
    }

    pub fn width(&self) -> usize {
        self.mask.width()
    }

    pub fn height(&self) -> usize {
        self.mask.height()
    }

    pub fn contains(&self, p: Pixel) -> bool {
        self.mask.get(p)
    }

    pub fn len(&self) -> usize {
        self.mask.count()
    }

    pub fn is_empty(&self) -> bool {
        self.mask.is_empty()
    }
}

// Neighbor order for the Yokoi number: E, NE, N, NW, W, SW, S, SE.
const YOKOI_ORDER: [(i64, i64); 8] = [
    (0, 1),
    (-1, 1),
    (-1, 0),
    (-1, -1),
    (0, -1),
    (1, -1),
    (1, 0),
    (1, 1),
];

fn neighborhood(mask: &BinaryMask, p: Pixel) -> [bool; 8] {
    let mut n = [false; 8];
    for (slot, (dr, dc)) in n.iter_mut().zip(YOKOI_ORDER) {
        *slot = mask.get_signed(p.row as i64 + dr, p.col as i64 + dc);
    }
    n
}

/// Yokoi 8-connectivity number of the neighborhood `n` (E, NE, N, ... order).
fn yokoi8(n: &[bool; 8]) -> u8 {
    let inv = |k: usize| !n[k % 8] as u8;
    [0usize, 2, 4, 6]
        .iter()
        .map(|&k| inv(k) - inv(k) * inv(k + 1) * inv(k + 2))
        .sum()
}

fn deletable(mask: &BinaryMask, p: Pixel) -> bool {
    let n = neighborhood(mask, p);
    n.iter().filter(|b| **b).count() >= 2 && yokoi8(&n) == 1
}

/// Thins `mask` until no simple, non-end pixel remains.
///
/// Deterministic; the result is a subset of the input with the same number
/// of 8-connected components and 4-connected holes.
pub fn skeletonize(mask: &BinaryMask) -> Skeleton {
    let mut work = mask.clone();
    let (w, h) = (work.width(), work.height());
    // Facing directions: north, south, east, west.
    let faces: [(i64, i64); 4] = [(-1, 0), (1, 0), (0, 1), (0, -1)];
    let mut candidates = Vec::new();
    loop {
        let mut changed = false;
        for (dr, dc) in faces {
            candidates.clear();
            for row in 0..h {
                for col in 0..w {
                    let p = Pixel::new(row, col);
                    if work.get(p) && !work.get_signed(row as i64 + dr, col as i64 + dc) {
                        candidates.push(p);
                    }
                }
            }
            for &p in &candidates {
                if deletable(&work, p) {
                    work.set(p, false);
                    changed = true;
                }
            }
        }
        if !changed {
            break;
        }
    }
    Skeleton { mask: work }
}

//! Discrete geometry on the pixel grid.

use rayon::prelude::*;

use super::{BinaryMask, Pixel};

/// 8-neighborhood offsets as `(d_row, d_col)`, clockwise from north.
pub const NEIGHBORS_8: [(i64, i64); 8] = [
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
];

/// 4-neighborhood offsets, clockwise from north.
pub const NEIGHBORS_4: [(i64, i64); 4] = [(-1, 0), (0, 1), (1, 0), (0, -1)];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Connectivity {
    Four,
    Eight,
}

impl Connectivity {
    pub fn offsets(self) -> &'static [(i64, i64)] {
        match self {
            Connectivity::Four => &NEIGHBORS_4,
            Connectivity::Eight => &NEIGHBORS_8,
        }
    }
}

/// Bresenham line from `a` to `b`, both endpoints included.
///
/// The pixels are always generated from the row-major smaller endpoint, so
/// `rasterize_line(b, a)` is exactly the reverse of `rasterize_line(a, b)`.
pub fn rasterize_line(a: Pixel, b: Pixel) -> Vec<Pixel> {
    let flip = b < a;
    let (start, end) = if flip { (b, a) } else { (a, b) };

    let (mut x, mut y) = (start.col as i64, start.row as i64);
    let (x1, y1) = (end.col as i64, end.row as i64);
    let dx = (x1 - x).abs();
    let dy = -(y1 - y).abs();
    let sx = if x < x1 { 1 } else { -1 };
    let sy = if y < y1 { 1 } else { -1 };
    let mut err = dx + dy;

    let mut line = Vec::with_capacity((dx.max(-dy) + 1) as usize);
    loop {
        line.push(Pixel::new(y as usize, x as usize));
        if x == x1 && y == y1 {
            break;
        }
        let e2 = 2 * err;
        if e2 >= dy {
            err += dy;
            x += sx;
        }
        if e2 <= dx {
            err += dx;
            y += sy;
        }
    }
    if flip {
        line.reverse();
    }
    line
}

/// In-bounds pixels within Euclidean distance `radius` of `center`, row-major.
pub fn disk_pixels(center: Pixel, radius: f64, width: usize, height: usize) -> Vec<Pixel> {
    assert!(radius >= 0.0, "radius must be non-negative");
    let reach = radius.floor() as i64;
    let r2 = radius * radius;
    let mut out = Vec::new();
    for dr in -reach..=reach {
        for dc in -reach..=reach {
            if ((dr * dr + dc * dc) as f64) <= r2 {
                if let Some(p) = center.offset(dr, dc, width, height) {
                    out.push(p);
                }
            }
        }
    }
    out
}

/// Connected-component labels of the foreground, row-major.
///
/// Background pixels get label 0; components are numbered from 1 in the
/// order their first pixel appears in a raster scan.
pub fn label_components(mask: &BinaryMask, connectivity: Connectivity) -> (Vec<u32>, usize) {
    let (w, h) = (mask.width(), mask.height());
    let mut labels = vec![0u32; w * h];
    let mut next = 0u32;
    let mut stack = Vec::new();
    for start in 0..w * h {
        if !mask.as_slice()[start] || labels[start] != 0 {
            continue;
        }
        next += 1;
        labels[start] = next;
        stack.push(start);
        while let Some(i) = stack.pop() {
            let p = Pixel::new(i / w, i % w);
            for &(dr, dc) in connectivity.offsets() {
                if let Some(q) = p.offset(dr, dc, w, h) {
                    let j = q.row * w + q.col;
                    if mask.as_slice()[j] && labels[j] == 0 {
                        labels[j] = next;
                        stack.push(j);
                    }
                }
            }
        }
    }
    (labels, next as usize)
}

const CELL: usize = 8;

/// Uniform-grid spatial index over a fixed point set for exact nearest
/// neighbor queries.
///
/// Ties are broken by the row-major order of the candidate pixel and then by
/// insertion index, so results never depend on grid layout.
#[derive(Debug, Clone)]
pub struct PointGrid {
    points: Vec<Pixel>,
    grid_w: usize,
    grid_h: usize,
    cells: Vec<Vec<u32>>,
}

impl PointGrid {
    /// `width`/`height` bound both the points and every later query.
    pub fn new(points: Vec<Pixel>, width: usize, height: usize) -> Self {
        let grid_w = width.div_ceil(CELL).max(1);
        let grid_h = height.div_ceil(CELL).max(1);
        let mut cells = vec![Vec::new(); grid_w * grid_h];
        for (i, p) in points.iter().enumerate() {
            debug_assert!(p.row < height && p.col < width);
            cells[(p.row / CELL) * grid_w + p.col / CELL].push(i as u32);
        }
        Self {
            points,
            grid_w,
            grid_h,
            cells,
        }
    }

    pub fn points(&self) -> &[Pixel] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Index of the point closest to `q`.
    pub fn nearest(&self, q: Pixel) -> Option<usize> {
        self.nearest_where(q, |_, _| true)
    }

    /// Index of the closest point among those accepted by `accept`.
    pub fn nearest_where(
        &self,
        q: Pixel,
        mut accept: impl FnMut(usize, Pixel) -> bool,
    ) -> Option<usize> {
        if self.points.is_empty() {
            return None;
        }
        let qr = (q.row / CELL) as i64;
        let qc = (q.col / CELL) as i64;
        let max_ring = self.grid_w.max(self.grid_h) as i64;
        let mut best: Option<(i64, Pixel, usize)> = None;

        for ring in 0..=max_ring {
            let mut visit = |cr: i64, cc: i64, best: &mut Option<(i64, Pixel, usize)>| {
                if cr < 0 || cc < 0 || cr >= self.grid_h as i64 || cc >= self.grid_w as i64 {
                    return;
                }
                for &i in &self.cells[cr as usize * self.grid_w + cc as usize] {
                    let i = i as usize;
                    let p = self.points[i];
                    let key = (q.dist2(p), p, i);
                    let better = match best {
                        None => true,
                        Some(b) => key < *b,
                    };
                    if better && accept(i, p) {
                        *best = Some(key);
                    }
                }
            };
            if ring == 0 {
                visit(qr, qc, &mut best);
            } else {
                for cc in qc - ring..=qc + ring {
                    visit(qr - ring, cc, &mut best);
                    visit(qr + ring, cc, &mut best);
                }
                for cr in qr - ring + 1..qr + ring {
                    visit(cr, qc - ring, &mut best);
                    visit(cr, qc + ring, &mut best);
                }
            }
            // Anything in a later ring is at least ring*CELL + 1 away.
            if let Some((d2, _, _)) = best {
                let bound = ring * CELL as i64 + 1;
                if d2 < bound * bound {
                    break;
                }
            }
        }
        best.map(|(_, _, i)| i)
    }
}

/// For every foreground pixel of `mask`, the index into `sources` of the
/// nearest source pixel (Euclidean, ties to the row-major smaller source).
///
/// Repeated source pixels resolve to their first occurrence. Background
/// pixels and masks with no sources map to `None`.
pub fn nearest_source_map(sources: &[Pixel], mask: &BinaryMask) -> Vec<Option<usize>> {
    let (w, h) = (mask.width(), mask.height());
    let mut first_index = std::collections::HashMap::with_capacity(sources.len());
    let mut unique = Vec::with_capacity(sources.len());
    for (i, &p) in sources.iter().enumerate() {
        first_index.entry(p).or_insert_with(|| {
            unique.push(p);
            i
        });
    }
    let grid = PointGrid::new(unique, w, h);
    let mut out = vec![None; w * h];
    out.par_chunks_mut(w).enumerate().for_each(|(row, slots)| {
        for (col, slot) in slots.iter_mut().enumerate() {
            let p = Pixel::new(row, col);
            if mask.get(p) {
                *slot = grid.nearest(p).map(|u| first_index[&grid.points()[u]]);
            }
        }
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn px(r: usize, c: usize) -> Pixel {
        Pixel::new(r, c)
    }

    #[test]
    fn horizontal_line() {
        assert_eq!(
            rasterize_line(px(0, 0), px(0, 3)),
            vec![px(0, 0), px(0, 1), px(0, 2), px(0, 3)]
        );
    }

    #[test]
    fn degenerate_line() {
        assert_eq!(rasterize_line(px(2, 2), px(2, 2)), vec![px(2, 2)]);
    }

    #[test]
    fn diagonal_line() {
        assert_eq!(
            rasterize_line(px(0, 0), px(2, 2)),
            vec![px(0, 0), px(1, 1), px(2, 2)]
        );
    }

    #[test]
    fn disk_radius_zero_and_one() {
        assert_eq!(disk_pixels(px(5, 5), 0.0, 10, 10), vec![px(5, 5)]);
        let unit = disk_pixels(px(5, 5), 1.0, 10, 10);
        assert_eq!(unit, vec![px(4, 5), px(5, 4), px(5, 5), px(5, 6), px(6, 5)]);
    }

    fn brute_disk(center: Pixel, radius: f64, w: usize, h: usize) -> Vec<Pixel> {
        let mut out = Vec::new();
        for r in 0..h {
            for c in 0..w {
                let p = px(r, c);
                if (p.dist2(center) as f64).sqrt() <= radius {
                    out.push(p);
                }
            }
        }
        out
    }

    #[test]
    fn corner_disk_is_clipped_quarter() {
        let disk = disk_pixels(px(0, 0), 4.0, 20, 20);
        let oracle = brute_disk(px(0, 0), 4.0, 20, 20);
        assert_eq!(disk, oracle);
        // Quarter disk of radius 4 including the axes: 17 lattice points.
        assert_eq!(disk.len(), 17);
    }

    #[test]
    fn components_eight_vs_four() {
        let mask = BinaryMask::from_pixels(4, 4, &[px(0, 0), px(1, 1), px(3, 3)]);
        assert_eq!(label_components(&mask, Connectivity::Eight).1, 2);
        assert_eq!(label_components(&mask, Connectivity::Four).1, 3);
    }

    proptest! {
        #[test]
        fn line_is_symmetric_and_eight_connected(
            r0 in 0usize..40, c0 in 0usize..40, r1 in 0usize..40, c1 in 0usize..40
        ) {
            let a = px(r0, c0);
            let b = px(r1, c1);
            let ab = rasterize_line(a, b);
            let mut ba = rasterize_line(b, a);
            ba.reverse();
            prop_assert_eq!(&ab, &ba);
            prop_assert_eq!(ab[0], a);
            prop_assert_eq!(*ab.last().unwrap(), b);
            for w in ab.windows(2) {
                prop_assert!(w[0].touches(w[1]) && w[0] != w[1]);
            }
            let expected = r0.abs_diff(r1).max(c0.abs_diff(c1)) + 1;
            prop_assert_eq!(ab.len(), expected);
        }

        #[test]
        fn disk_matches_exhaustive_scan(
            r in 0usize..12, c in 0usize..15, radius in 0.0f64..7.0
        ) {
            prop_assert_eq!(
                disk_pixels(px(r, c), radius, 15, 12),
                brute_disk(px(r, c), radius, 15, 12)
            );
        }

        #[test]
        fn grid_nearest_matches_linear_scan(
            pts in proptest::collection::vec((0usize..50, 0usize..37), 1..40),
            q in (0usize..50, 0usize..37),
        ) {
            let points: Vec<Pixel> = pts.iter().map(|&(r, c)| px(r, c)).collect();
            let grid = PointGrid::new(points.clone(), 37, 50);
            let q = px(q.0, q.1);
            let brute = (0..points.len())
                .min_by_key(|&i| (q.dist2(points[i]), points[i], i))
                .unwrap();
            prop_assert_eq!(grid.nearest(q), Some(brute));

            let odd = |i: usize| points[i].row % 2 == 1;
            let brute_odd = (0..points.len())
                .filter(|&i| odd(i))
                .min_by_key(|&i| (q.dist2(points[i]), points[i], i));
            prop_assert_eq!(grid.nearest_where(q, |i, _| odd(i)), brute_odd);
        }
    }
}

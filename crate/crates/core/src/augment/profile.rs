use rand::Rng;

use crate::raster::{nearest_source_map, BinaryMask, Pixel};
use crate::topology::{cumulative_lengths, VesselGraph};

use super::AugmentError;

/// Indices into a medial-axis path, ordered `p1 <= pd1 <= pc <= pd2 <= p2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Waypoints {
    pub p1: usize,
    pub pd1: usize,
    pub pc: usize,
    pub pd2: usize,
    pub p2: usize,
}

/// Picks a path index uniformly among those more than `l / 2` away (along
/// the path) from both ends.
pub fn select_center<R: Rng + ?Sized>(
    path: &[Pixel],
    l: f64,
    rng: &mut R,
) -> Result<usize, AugmentError> {
    let cum = cumulative_lengths(path);
    let total = cum.last().copied().unwrap_or(0.0);
    let half = l / 2.0;
    let eligible: Vec<usize> = (0..path.len())
        .filter(|&i| cum[i] > half && total - cum[i] > half)
        .collect();
    if eligible.is_empty() {
        return Err(AugmentError::SegmentTooShort { length: total, l });
    }
    Ok(eligible[rng.gen_range(0..eligible.len())])
}

/// Walks outwards from `pc` to the first indices at path distance of at
/// least `l / 2` and `l_d / 2`. Walks stop at the path ends.
pub fn locate_waypoints(path: &[Pixel], pc: usize, l: f64, l_d: f64) -> Waypoints {
    let cum = cumulative_lengths(path);
    let back = |d: f64| (0..=pc).rev().find(|&i| cum[pc] - cum[i] >= d).unwrap_or(0);
    let forward = |d: f64| {
        (pc..path.len())
            .find(|&i| cum[i] - cum[pc] >= d)
            .unwrap_or(path.len() - 1)
    };
    Waypoints {
        p1: back(l / 2.0),
        pd1: back(l_d / 2.0),
        pc,
        pd2: forward(l_d / 2.0),
        p2: forward(l / 2.0),
    }
}

/// Preservation factor per path index: 1 outside `[p1, p2]`, 0 on
/// `[pd1, pd2]`, linear in path length on both ramps.
pub fn preservation_profile(path: &[Pixel], w: &Waypoints) -> Vec<f64> {
    let cum = cumulative_lengths(path);
    (0..path.len())
        .map(|i| {
            if i < w.p1 || i > w.p2 {
                1.0
            } else if i < w.pd1 {
                (cum[w.pd1] - cum[i]) / (cum[w.pd1] - cum[w.p1])
            } else if i > w.pd2 {
                (cum[i] - cum[w.pd2]) / (cum[w.p2] - cum[w.pd2])
            } else {
                0.0
            }
        })
        .collect()
}

/// Which medial-axis pixel each vessel pixel is closest to, over every edge
/// of a graph.
#[derive(Debug, Clone)]
pub struct MasAssignment {
    width: usize,
    height: usize,
    /// Per edge: vessel pixels and the path index they are closest to.
    members: Vec<Vec<(Pixel, usize)>>,
}

impl MasAssignment {
    /// A pixel shared by several paths belongs to the first edge listing it.
    pub fn new(graph: &VesselGraph, mask: &BinaryMask) -> Self {
        let mut sources = Vec::new();
        let mut owner = Vec::new();
        for (e, edge) in graph.edges.iter().enumerate() {
            for (i, &p) in edge.path.iter().enumerate() {
                sources.push(p);
                owner.push((e, i));
            }
        }
        let nearest = nearest_source_map(&sources, mask);
        let mut members = vec![Vec::new(); graph.edges.len()];
        for p in mask.pixels() {
            if let Some(s) = nearest[p.row * mask.width() + p.col] {
                let (e, i) = owner[s];
                members[e].push((p, i));
            }
        }
        Self {
            width: mask.width(),
            height: mask.height(),
            members,
        }
    }

    pub fn members(&self, edge: usize) -> &[(Pixel, usize)] {
        &self.members[edge]
    }
}

/// Preservation factors of the vessel pixels touched by one edit; every other
/// pixel implicitly has factor 1.
#[derive(Debug, Clone, PartialEq)]
pub struct PreservationField {
    pub width: usize,
    pub height: usize,
    /// Row-major pixels with a factor below 1.
    pub affected: Vec<(Pixel, f64)>,
}

impl PreservationField {
    pub fn factor(&self, p: Pixel) -> f64 {
        self.affected
            .binary_search_by_key(&p, |(q, _)| *q)
            .map_or(1.0, |i| self.affected[i].1)
    }

    /// Pixels with factor exactly 0, row-major.
    pub fn zero_region(&self) -> Vec<Pixel> {
        self.affected
            .iter()
            .filter(|(_, f)| *f == 0.0)
            .map(|(p, _)| *p)
            .collect()
    }

    pub fn zero_mask(&self) -> BinaryMask {
        BinaryMask::from_pixels(self.width, self.height, &self.zero_region())
    }
}

/// Spreads the path factors of `edge` to the vessel pixels closest to it.
pub fn expand_profile(
    assignment: &MasAssignment,
    edge: usize,
    factors: &[f64],
) -> PreservationField {
    let mut affected: Vec<(Pixel, f64)> = assignment
        .members(edge)
        .iter()
        .map(|&(p, i)| (p, factors[i]))
        .filter(|&(_, f)| f < 1.0)
        .collect();
    affected.sort_by_key(|(p, _)| *p);
    PreservationField {
        width: assignment.width,
        height: assignment.height,
        affected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::topology::{Edge, Node, NodeKind};
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn row_path(n: usize) -> Vec<Pixel> {
        (0..n).map(|c| Pixel::new(5, c)).collect()
    }

    fn diagonal_path(n: usize) -> Vec<Pixel> {
        (0..n).map(|i| Pixel::new(i, i)).collect()
    }

    #[test]
    fn center_stays_in_band() {
        let path = row_path(101);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..1000 {
            let c = select_center(&path, 40.0, &mut rng).unwrap();
            assert!((21..=79).contains(&c), "{c}");
            seen.insert(c);
        }
        assert_eq!(seen.len(), 59);
    }

    #[test]
    fn center_needs_length() {
        let path = row_path(41);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(matches!(
            select_center(&path, 40.0, &mut rng),
            Err(AugmentError::SegmentTooShort { .. })
        ));
        assert!(select_center(&path, 50.0, &mut rng).is_err());
        for _ in 0..100 {
            let c = select_center(&path, 0.0, &mut rng).unwrap();
            assert!((1..40).contains(&c));
        }
    }

    #[test]
    fn waypoints_on_straight_path() {
        let path = row_path(101);
        let w = locate_waypoints(&path, 50, 40.0, 0.0);
        assert_eq!((w.p1, w.p2), (30, 70));
        assert_eq!((w.pd1, w.pc, w.pd2), (50, 50, 50));
        let w = locate_waypoints(&path, 50, 40.0, 10.0);
        assert_eq!((w.pd1, w.pd2), (45, 55));
    }

    #[test]
    fn waypoints_on_diagonal_path() {
        let path = diagonal_path(60);
        let w = locate_waypoints(&path, 30, 28.0, 0.0);
        // 14 / sqrt(2) = 9.9, so ten diagonal steps.
        assert_eq!((w.p1, w.p2), (20, 40));
    }

    #[test]
    fn profile_shape() {
        let path = row_path(101);
        let w = locate_waypoints(&path, 50, 40.0, 10.0);
        let f = preservation_profile(&path, &w);
        assert_eq!(f[30], 1.0);
        assert_eq!(f[45], 0.0);
        assert_eq!(f[55], 0.0);
        assert_eq!(f[70], 1.0);
        assert!((f[37] - 8.0 / 15.0).abs() < 1e-12);
        // Ramp 30..45 has its midpoint at 37.5.
        assert!(((f[37] + f[38]) / 2.0 - 0.5).abs() < 1e-12);
        assert!(f[..30].iter().chain(&f[71..]).all(|&v| v == 1.0));
        assert!(f[45..=55].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn v_shaped_without_gap() {
        let path = row_path(101);
        let w = locate_waypoints(&path, 50, 40.0, 0.0);
        let f = preservation_profile(&path, &w);
        assert_eq!(f.iter().filter(|&&v| v == 0.0).count(), 1);
        assert_eq!(f[50], 0.0);
        assert!((f[40] - 0.5).abs() < 1e-12);
        assert!((f[60] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn zero_length_ramp_is_empty() {
        let path = row_path(101);
        // Both half-lengths round up to the same index.
        let w = locate_waypoints(&path, 50, 20.0, 19.5);
        assert_eq!(w.p1, w.pd1);
        let f = preservation_profile(&path, &w);
        assert!(f.iter().all(|v| v.is_finite()));
        assert_eq!(f[w.p1], 0.0);
        assert_eq!(f[w.p1 - 1], 1.0);
    }

    fn bar_graph() -> (VesselGraph, BinaryMask) {
        let mask = BinaryMask::from_fn(40, 11, |p| {
            (3..8).contains(&p.row) && (2..38).contains(&p.col)
        });
        let path: Vec<Pixel> = (4..36).map(|c| Pixel::new(5, c)).collect();
        let graph = VesselGraph {
            nodes: vec![
                Node {
                    position: path[0],
                    kind: NodeKind::Termination,
                },
                Node {
                    position: *path.last().unwrap(),
                    kind: NodeKind::Termination,
                },
            ],
            edges: vec![Edge { a: 0, b: 1, path }],
        };
        (graph, mask)
    }

    #[test]
    fn zero_region_is_cross_section_column() {
        let (graph, mask) = bar_graph();
        let assignment = MasAssignment::new(&graph, &mask);
        let mut factors = vec![1.0; graph.edges[0].path.len()];
        factors[16] = 0.0;
        let field = expand_profile(&assignment, 0, &factors);
        let col = graph.edges[0].path[16].col;
        let expected: Vec<Pixel> = (3..8).map(|r| Pixel::new(r, col)).collect();
        assert_eq!(field.zero_region(), expected);

        let ones = vec![1.0; factors.len()];
        let field = expand_profile(&assignment, 0, &ones);
        assert!(field.affected.is_empty());
        assert_eq!(field.factor(Pixel::new(5, 10)), 1.0);
    }

    proptest! {
        #[test]
        fn expansion_follows_nearest_path_pixel(
            factors in proptest::collection::vec(0.0f64..=1.0, 32)
        ) {
            let (graph, mask) = bar_graph();
            let path = &graph.edges[0].path;
            let assignment = MasAssignment::new(&graph, &mask);
            let field = expand_profile(&assignment, 0, &factors);
            let lo = factors.iter().copied().fold(f64::INFINITY, f64::min);
            for p in mask.pixels() {
                let (i, _) = path
                    .iter()
                    .enumerate()
                    .min_by_key(|(i, q)| (p.dist2(**q), **q, *i))
                    .unwrap();
                prop_assert_eq!(field.factor(p), factors[i]);
                prop_assert!(field.factor(p) >= lo && field.factor(p) <= 1.0);
            }
        }

        #[test]
        fn profile_is_piecewise_linear(
            pc in 30usize..70, l in 20.0f64..58.0, ld_frac in 0.0f64..0.95
        ) {
            let path = diagonal_path(100);
            let l_d = l * ld_frac;
            let w = locate_waypoints(&path, pc, l, l_d);
            prop_assert!(w.p1 <= w.pd1 && w.pd1 <= w.pc && w.pc <= w.pd2 && w.pd2 <= w.p2);
            let f = preservation_profile(&path, &w);
            let step = 2f64.sqrt();
            for i in w.p1..w.pd1 {
                let slope = (f[i] - f[i + 1]) / step;
                let expected = 1.0 / (step * (w.pd1 - w.p1) as f64);
                prop_assert!((slope - expected).abs() < 1e-9);
            }
            for i in w.pd2..w.p2 {
                let slope = (f[i + 1] - f[i]) / step;
                let expected = 1.0 / (step * (w.p2 - w.pd2) as f64);
                prop_assert!((slope - expected).abs() < 1e-9);
            }
            prop_assert!(f.iter().all(|v| (0.0..=1.0).contains(v)));
        }
    }
}

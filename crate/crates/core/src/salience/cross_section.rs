use crate::raster::{
    disk_pixels, label_components, rasterize_line, BinaryMask, Connectivity, Pixel, PointGrid,
};
use crate::topology::trace_contours;

use super::SalienceError;

/// Border pixels of a mask, grouped by 8-connected vessel component, with a
/// spatial index per component.
#[derive(Debug, Clone)]
pub struct ContourIndex {
    width: usize,
    labels: Vec<u32>,
    grids: Vec<PointGrid>,
}

impl ContourIndex {
    pub fn new(mask: &BinaryMask) -> Self {
        let (w, h) = (mask.width(), mask.height());
        let (labels, count) = label_components(mask, Connectivity::Eight);
        let mut seen = vec![false; w * h];
        let mut per_component: Vec<Vec<Pixel>> = vec![Vec::new(); count];
        for contour in trace_contours(mask) {
            for p in contour.pixels {
                let i = p.row * w + p.col;
                if !seen[i] {
                    seen[i] = true;
                    per_component[labels[i] as usize - 1].push(p);
                }
            }
        }
        let grids = per_component
            .into_iter()
            .map(|mut pts| {
                pts.sort();
                PointGrid::new(pts, w, h)
            })
            .collect();
        Self {
            width: w,
            labels,
            grids,
        }
    }

    /// Component id of a vessel pixel, `None` for background.
    pub fn component(&self, p: Pixel) -> Option<usize> {
        match self.labels[p.row * self.width + p.col] {
            0 => None,
            l => Some(l as usize - 1),
        }
    }

    /// Border pixels of a component in row-major order.
    pub fn contour_pixels(&self, component: usize) -> &[Pixel] {
        self.grids[component].points()
    }

    fn grid(&self, component: usize) -> &PointGrid {
        &self.grids[component]
    }
}

/// A vessel cross-section through a medial-axis pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CrossSection {
    pub center: Pixel,
    /// Nearest border pixel.
    pub near: Pixel,
    /// Nearest border pixel on the opposite side of `center`.
    pub far: Pixel,
    /// Line `near -> center` followed by `center -> far`, each pixel once.
    pub vessel_samples: Vec<Pixel>,
}

fn dot(a: (i64, i64), b: (i64, i64)) -> i64 {
    a.0 * b.0 + a.1 * b.1
}

/// Finds the two opposite border pixels around `p`.
///
/// `near` is the closest border pixel of the component containing `p`.
/// `far` is the closest border pixel `q` of the same component with
/// `(near - p) . (q - p) < 0`; ties go to the row-major smaller pixel. When `p`
/// itself lies on the border (vessels one or two pixels wide) `near == p`
/// and `far` is simply the closest other border pixel.
pub fn find_cross_section(p: Pixel, index: &ContourIndex) -> Result<CrossSection, SalienceError> {
    let component = index.component(p).ok_or(SalienceError::OutsideVessel(p))?;
    let grid = index.grid(component);
    let near = grid
        .nearest(p)
        .map(|i| grid.points()[i])
        .ok_or(SalienceError::NoOppositePixel(p))?;
    let far = if near == p {
        grid.nearest_where(p, |_, q| q != p)
    } else {
        let v1 = p.vector_to(near);
        grid.nearest_where(p, |_, q| dot(v1, p.vector_to(q)) < 0)
    }
    .map(|i| grid.points()[i])
    .ok_or(SalienceError::NoOppositePixel(p))?;

    let mut vessel_samples = rasterize_line(near, p);
    vessel_samples.extend(rasterize_line(p, far).into_iter().skip(1));
    vessel_samples.sort();
    vessel_samples.dedup();
    Ok(CrossSection {
        center: p,
        near,
        far,
        vessel_samples,
    })
}

/// Background pixels within `radius` of either end of the cross-section.
/// Row-major, without duplicates; may be empty.
pub fn sample_background(cs: &CrossSection, mask: &BinaryMask, radius: f64) -> Vec<Pixel> {
    let (w, h) = (mask.width(), mask.height());
    let mut out: Vec<Pixel> = disk_pixels(cs.near, radius, w, h)
        .into_iter()
        .chain(disk_pixels(cs.far, radius, w, h))
        .filter(|&q| !mask.get(q))
        .collect();
    out.sort();
    out.dedup();
    out
}

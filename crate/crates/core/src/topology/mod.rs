//! Vessel topology: skeleton, skeleton graph and mask borders.

mod contour;
mod graph;
mod path;
mod skeleton;

pub use contour::{trace_contours, Contour};
pub use graph::{
    extract_graph, merge_nodes, prune_graph, Edge, EdgeJson, GraphJson, Node, NodeJson, NodeKind,
    VesselGraph,
};
pub use path::{cumulative_lengths, path_length, step_length, total_length};
pub use skeleton::{skeletonize, Skeleton};

use thiserror::Error;

use crate::raster::BinaryMask;

#[derive(Debug, Error, PartialEq)]
pub enum TopologyError {
    #[error("path index {index} out of range for path of {len} pixels")]
    IndexOutOfRange { index: usize, len: usize },
}

/// Graph clean-up thresholds, in pixels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GraphParams {
    /// Branches ending in a termination and shorter than this are pruned.
    pub min_branch_len: f64,
    /// Nodes joined by an edge at most this long are merged.
    pub merge_radius: f64,
}

impl Default for GraphParams {
    fn default() -> Self {
        Self {
            min_branch_len: 5.0,
            merge_radius: 3.0,
        }
    }
}

/// Skeletonize, extract, prune, then merge.
pub fn build_graph(mask: &BinaryMask, params: &GraphParams) -> VesselGraph {
    let skeleton = skeletonize(mask);
    let graph = extract_graph(&skeleton);
    let graph = prune_graph(&graph, params.min_branch_len);
    merge_nodes(&graph, params.merge_radius)
}

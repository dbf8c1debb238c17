//! Local vessel salience (LVS) for blood-vessel segmentation.
//!
//! The crate covers four jobs:
//!
//! 1. **topology** – skeletonize a ground-truth mask and turn it into a graph
//!    whose edges carry the ordered medial-axis pixels of each vessel segment.
//! 2. **salience** – measure, for every vessel pixel, how much the vessel
//!    stands out from its immediate background (the LVS index).
//! 3. **metrics** – Dice/precision/recall plus recall restricted to
//!    low-salience pixels (LSRecall).
//! 4. **augment** – fade a vessel segment into its local background and
//!    optionally cut it with a transplanted background patch, producing
//!    training images with realistic low-salience vessels.
//!
//! [`raster`] holds the shared image types and codecs.

pub mod augment;
pub mod metrics;
pub mod raster;
pub mod salience;
pub mod synthetic;
pub mod topology;

pub use raster::{BinaryMask, GrayImage, Pixel, ScalarField};

use thiserror::Error;

/// Any error produced by this crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Raster(#[from] raster::RasterError),
    #[error(transparent)]
    Topology(#[from] topology::TopologyError),
    #[error(transparent)]
    Salience(#[from] salience::SalienceError),
    #[error(transparent)]
    Metrics(#[from] metrics::MetricsError),
    #[error(transparent)]
    Augment(#[from] augment::AugmentError),
}

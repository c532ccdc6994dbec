//! Core algorithms for building and consuming vectorized map pseudo-labels.
//!
//! The crate covers the full label-side pipeline: metric-frame vector
//! geometry, Gaussian-surfel BEV rendering, raster cleanup and
//! vectorization, mask-aware one-to-one / one-to-many assignment,
//! mask-aware losses with analytic gradients, Chamfer-AP evaluation, and a
//! deterministic synthetic scene generator used as the test substrate.
//!
//! Everything here is `no_std` + `alloc`: pure functions over owned value
//! types, no IO. File formats and the command-line front end live in the
//! companion `pseudomap-cli` crate.

#![no_std]
#![deny(unsafe_code)]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod assign;
pub(crate) mod float;
pub mod geometry;
pub mod loss;
pub mod metrics;
pub mod raster;
pub mod rng;
pub mod surfel;
pub mod synth;
pub mod vectorize;

pub use geometry::{BevSpec, ElementKind, MapClass, MapElement, Point2, Pose2, VectorMap};
pub use raster::{BevMask, BitGrid, RasterClass, SemanticRaster};

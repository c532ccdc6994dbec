//! Deterministic synthetic scenes: ground-truth vector maps, their
//! rasterizations, occlusion masks, and multi-trip aggregation. The test
//! substrate for the whole pipeline.

mod occlusion;
mod rasterize;
mod scene;

pub use occlusion::{gen_occlusion, multi_trip_union, paint_grid_from_raster, OcclusionParams};
pub use rasterize::{rasterize_gt, MARKING_WIDTH};
pub use scene::{gen_scene, SceneParams};

use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum SynthError {
    InvalidParams(&'static str),
    SpecMismatch,
}

impl fmt::Display for SynthError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SynthError::InvalidParams(m) => write!(f, "invalid scene parameters: {m}"),
            SynthError::SpecMismatch => write!(f, "masks have different BEV specs"),
        }
    }
}

impl core::error::Error for SynthError {}

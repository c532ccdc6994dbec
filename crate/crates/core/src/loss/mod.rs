//! Mask-aware loss terms with analytic gradients with respect to
//! predicted points and class probabilities.

mod aggregate;
mod dice;
mod direction;
mod focal;
mod pointwise;
mod render;
mod seg;
mod soft_raster;

pub use aggregate::{compute_loss_parts, LossConfig, LossParts};
pub use dice::{dice_loss, dice_value};
pub use direction::direction_loss;
pub use focal::focal_loss;
pub use pointwise::{pointwise_l1, pointwise_l1_points};
pub use render::render_loss;
pub use seg::{masked_bev_seg_loss, maxpool_downsample};
pub use soft_raster::{soft_rasterize, RasterizedElement, SoftRaster};

use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum LossError {
    DimensionMismatch,
    PointCountMismatch,
    TooFewPoints,
    NotDivisible,
    Geometry(crate::geometry::GeometryError),
}

impl fmt::Display for LossError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LossError::DimensionMismatch => write!(f, "raster dimensions do not match"),
            LossError::PointCountMismatch => write!(f, "point counts do not match"),
            LossError::TooFewPoints => write!(f, "too few points"),
            LossError::NotDivisible => write!(f, "grid dimensions not divisible by factor"),
            LossError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for LossError {}

impl From<crate::geometry::GeometryError> for LossError {
    fn from(e: crate::geometry::GeometryError) -> Self {
        LossError::Geometry(e)
    }
}

/// Weights of the loss terms. The totals are exact weighted sums, so
/// scaling every weight scales the total and all gradients linearly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossWeights {
    pub cls: f64,
    pub pt: f64,
    pub rend: f64,
    pub dir: f64,
    pub bev_seg: f64,
}

impl Default for LossWeights {
    fn default() -> Self {
        Self {
            cls: 2.0,
            pt: 5.0,
            rend: 1.0,
            dir: 0.1,
            bev_seg: 1.0,
        }
    }
}

/// Named loss terms, their weighted total, and the gradients.
#[derive(Debug, Clone, PartialEq)]
pub struct LossBreakdown {
    pub cls: f64,
    pub pt: f64,
    pub rend: f64,
    pub dir: f64,
    pub bev_seg: f64,
    pub total: f64,
    /// Per prediction, per point `(d/dx, d/dy)` of the weighted total.
    pub grad_points: Vec<Vec<(f64, f64)>>,
    /// Per prediction gradient of the weighted total with respect to the
    /// class probability vector (three map classes plus background).
    pub grad_class: Vec<Vec<f64>>,
}

/// Combine unweighted parts into the weighted total; linear and exact.
pub fn total_loss(parts: &LossParts, weights: &LossWeights) -> LossBreakdown {
    let total = weights.cls * parts.cls
        + weights.pt * parts.pt
        + weights.rend * parts.rend
        + weights.dir * parts.dir
        + weights.bev_seg * parts.bev_seg;
    let n = parts.grad_pt.len();
    let mut grad_points = Vec::with_capacity(n);
    for i in 0..n {
        let len = parts.grad_pt[i].len();
        let mut g = Vec::with_capacity(len);
        for l in 0..len {
            let (px, py) = parts.grad_pt[i][l];
            let (rx, ry) = parts.grad_rend[i][l];
            let (dx, dy) = parts.grad_dir[i][l];
            g.push((
                weights.pt * px + weights.rend * rx + weights.dir * dx,
                weights.pt * py + weights.rend * ry + weights.dir * dy,
            ));
        }
        grad_points.push(g);
    }
    let grad_class = parts
        .grad_cls
        .iter()
        .map(|g| g.iter().map(|&v| weights.cls * v).collect())
        .collect();
    LossBreakdown {
        cls: parts.cls,
        pt: parts.pt,
        rend: parts.rend,
        dir: parts.dir,
        bev_seg: parts.bev_seg,
        total,
        grad_points,
        grad_class,
    }
}

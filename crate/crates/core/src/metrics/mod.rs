//! Evaluation: Chamfer-distance AP, BEV coverage statistics, and
//! observed-area-only ground-truth masking.

mod ap;
mod coverage;
mod mask_gt;

pub use ap::{chamfer_ap, ApConfig, ClassReport, EvalReport, MatchCounts};
pub use coverage::{coverage_curve, coverage_ratio};
pub use mask_gt::mask_gt;

use core::fmt;

use crate::geometry::GeometryError;

#[derive(Debug, Clone, PartialEq)]
pub enum MetricsError {
    /// Prediction and ground-truth frame lists do not align.
    FrameMismatch,
    InvalidConfig(&'static str),
    Geometry(GeometryError),
}

impl fmt::Display for MetricsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricsError::FrameMismatch => write!(f, "prediction and ground-truth frames differ"),
            MetricsError::InvalidConfig(m) => write!(f, "invalid config: {m}"),
            MetricsError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for MetricsError {}

impl From<GeometryError> for MetricsError {
    fn from(e: GeometryError) -> Self {
        MetricsError::Geometry(e)
    }
}

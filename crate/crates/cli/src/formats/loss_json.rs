//! Loss breakdown JSON with an optional gradient dump.

use std::path::Path;

use pseudomap_core::loss::LossBreakdown;
use serde::{Deserialize, Serialize};

use crate::error::CliResult;
use crate::io_util::{atomic_write, to_json_bytes};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GradientsDto {
    /// Per prediction, per point `[d/dx, d/dy]` of the weighted total.
    pub points: Vec<Vec<[f64; 2]>>,
    /// Per prediction gradient over the class probability vector.
    pub class: Vec<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LossDto {
    pub cls: f64,
    pub pt: f64,
    pub rend: f64,
    pub dir: f64,
    pub bev_seg: f64,
    pub total: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub gradients: Option<GradientsDto>,
}

impl LossDto {
    pub fn from_core(breakdown: &LossBreakdown, with_gradients: bool) -> Self {
        Self {
            cls: breakdown.cls,
            pt: breakdown.pt,
            rend: breakdown.rend,
            dir: breakdown.dir,
            bev_seg: breakdown.bev_seg,
            total: breakdown.total,
            gradients: with_gradients.then(|| GradientsDto {
                points: breakdown
                    .grad_points
                    .iter()
                    .map(|pts| pts.iter().map(|&(x, y)| [x, y]).collect())
                    .collect(),
                class: breakdown.grad_class.clone(),
            }),
        }
    }
}

pub fn write_loss(path: &Path, breakdown: &LossBreakdown, with_gradients: bool) -> CliResult<()> {
    atomic_write(
        path,
        &to_json_bytes(&LossDto::from_core(breakdown, with_gradients)),
    )
}

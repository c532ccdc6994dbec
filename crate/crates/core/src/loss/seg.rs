//! Auxiliary segmentation supervision helpers: masked BCE + Dice on a
//! binary label grid, and max-pool downsampling of label grids.

use super::{dice_loss, LossError, SoftRaster};
use crate::float;
use crate::raster::{BevMask, BitGrid};

const P_EPS: f64 = 1e-7;

/// Mean of binary cross-entropy and Dice over the observed cells. An
/// all-masked mask yields 0 by the empty-sum convention.
pub fn masked_bev_seg_loss(
    pred: &SoftRaster,
    label: &BitGrid,
    mask: Option<&BevMask>,
) -> Result<f64, LossError> {
    if label.width != pred.width || label.height != pred.height {
        return Err(LossError::DimensionMismatch);
    }
    if let Some(m) = mask {
        if m.grid.width != pred.width || m.grid.height != pred.height {
            return Err(LossError::DimensionMismatch);
        }
    }
    let observed = |idx: usize| mask.map(|m| m.grid.bits()[idx]).unwrap_or(true);
    let mut bce = 0.0;
    let mut count = 0usize;
    for idx in 0..pred.values.len() {
        if !observed(idx) {
            continue;
        }
        let p = pred.values[idx].clamp(P_EPS, 1.0 - P_EPS);
        let t = if label.bits()[idx] { 1.0 } else { 0.0 };
        bce -= t * float::ln(p) + (1.0 - t) * float::ln(1.0 - p);
        count += 1;
    }
    if count == 0 {
        return Ok(0.0);
    }
    bce /= count as f64;

    let mut target = SoftRaster::zeros(pred.spec);
    for (v, &b) in target.values.iter_mut().zip(label.bits()) {
        *v = if b { 1.0 } else { 0.0 };
    }
    let (dice, _) = dice_loss(pred, &target, mask)?;
    Ok(0.5 * (bce + dice))
}

/// Block-wise logical OR downsampling, the label-side counterpart of
/// max-pooling a feature map.
pub fn maxpool_downsample(grid: &BitGrid, factor: usize) -> Result<BitGrid, LossError> {
    if factor == 0 || grid.width % factor != 0 || grid.height % factor != 0 {
        return Err(LossError::NotDivisible);
    }
    let (w, h) = (grid.width / factor, grid.height / factor);
    let mut out = BitGrid::new(w, h);
    for row in 0..h {
        for col in 0..w {
            let mut any = false;
            'block: for dr in 0..factor {
                for dc in 0..factor {
                    if grid.get(row * factor + dr, col * factor + dc) {
                        any = true;
                        break 'block;
                    }
                }
            }
            out.set(row, col, any);
        }
    }
    Ok(out)
}

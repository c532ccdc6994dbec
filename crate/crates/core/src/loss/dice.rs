//! Soft Dice loss restricted to observed cells.

use alloc::vec;
use alloc::vec::Vec;

use super::{LossError, SoftRaster};
use crate::raster::BevMask;

const DICE_EPS: f64 = 1.0;

/// `1 - (2 sum(p t) + eps) / (sum(p^2) + sum(t^2) + eps)` over the
/// observed cells of `mask` (all cells when `None`), with the gradient
/// with respect to the prediction values.
pub fn dice_loss(
    pred: &SoftRaster,
    target: &SoftRaster,
    mask: Option<&BevMask>,
) -> Result<(f64, Vec<f64>), LossError> {
    if pred.values.len() != target.values.len()
        || pred.width != target.width
        || pred.height != target.height
    {
        return Err(LossError::DimensionMismatch);
    }
    if let Some(m) = mask {
        if m.grid.width != pred.width || m.grid.height != pred.height {
            return Err(LossError::DimensionMismatch);
        }
    }
    let observed = |idx: usize| mask.map(|m| m.grid.bits()[idx]).unwrap_or(true);

    let mut inter = 0.0;
    let mut sp = 0.0;
    let mut st = 0.0;
    for idx in 0..pred.values.len() {
        if !observed(idx) {
            continue;
        }
        let p = pred.values[idx];
        let t = target.values[idx];
        inter += p * t;
        sp += p * p;
        st += t * t;
    }
    let num = 2.0 * inter + DICE_EPS;
    let den = sp + st + DICE_EPS;
    let loss = 1.0 - num / den;

    let mut grad = vec![0.0; pred.values.len()];
    let den_sq = den * den;
    for idx in 0..pred.values.len() {
        if !observed(idx) {
            continue;
        }
        let p = pred.values[idx];
        let t = target.values[idx];
        grad[idx] = -(2.0 * t * den - num * 2.0 * p) / den_sq;
    }
    Ok((loss, grad))
}

/// Value-only variant used by assignment costs.
pub fn dice_value(pred: &SoftRaster, target: &SoftRaster) -> f64 {
    debug_assert_eq!(pred.values.len(), target.values.len());
    let mut inter = 0.0;
    let mut sp = 0.0;
    let mut st = 0.0;
    for idx in 0..pred.values.len() {
        let p = pred.values[idx];
        let t = target.values[idx];
        inter += p * t;
        sp += p * p;
        st += t * t;
    }
    1.0 - (2.0 * inter + DICE_EPS) / (sp + st + DICE_EPS)
}

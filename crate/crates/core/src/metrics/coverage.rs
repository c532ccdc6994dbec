//! BEV coverage statistics.

use alloc::vec::Vec;

use crate::raster::BevMask;

/// Fraction of observed pixels.
pub fn coverage_ratio(mask: &BevMask) -> f64 {
    let total = mask.grid.width * mask.grid.height;
    if total == 0 {
        return 0.0;
    }
    mask.grid.count_ones() as f64 / total as f64
}

/// For each threshold, the fraction of masks whose coverage ratio strictly
/// exceeds it. Monotone non-increasing in the threshold.
pub fn coverage_curve(masks: &[BevMask], taus: &[f64]) -> Vec<f64> {
    let ratios: Vec<f64> = masks.iter().map(coverage_ratio).collect();
    taus.iter()
        .map(|&tau| {
            if ratios.is_empty() {
                0.0
            } else {
                ratios.iter().filter(|&&m| m > tau).count() as f64 / ratios.len() as f64
            }
        })
        .collect()
}

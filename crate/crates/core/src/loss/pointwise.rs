//! Point-wise L1 loss under the optimal point correspondence.

use alloc::vec::Vec;

use super::LossError;
use crate::geometry::{point_orderings, resample_element, MapElement, Point2};

fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// Minimum over the equivalent orderings of `g_points` of the summed L1
/// point distance, with the L1 subgradient with respect to `q` under the
/// optimal ordering.
pub fn pointwise_l1_points(
    q: &[Point2],
    g_points: &[Point2],
    g_kind: crate::geometry::ElementKind,
) -> Result<(f64, Vec<(f64, f64)>), LossError> {
    if q.len() != g_points.len() {
        return Err(LossError::PointCountMismatch);
    }
    let orderings = point_orderings(g_points, g_kind);
    let mut best_loss = f64::INFINITY;
    let mut best: Option<&Vec<Point2>> = None;
    for ordering in &orderings {
        let loss: f64 = q
            .iter()
            .zip(ordering.iter())
            .map(|(a, b)| a.dist_l1(*b))
            .sum();
        if loss < best_loss {
            best_loss = loss;
            best = Some(ordering);
        }
    }
    let matched = best.expect("orderings never empty");
    let grad = q
        .iter()
        .zip(matched.iter())
        .map(|(a, b)| (sign(a.x - b.x), sign(a.y - b.y)))
        .collect();
    Ok((best_loss, grad))
}

/// Resamples `g` to `q`'s point count according to its kind, then applies
/// [`pointwise_l1_points`].
pub fn pointwise_l1(q: &[Point2], g: &MapElement) -> Result<(f64, Vec<(f64, f64)>), LossError> {
    let g_points = resample_element(g, q.len())?;
    pointwise_l1_points(q, &g_points, g.kind)
}

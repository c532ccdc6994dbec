//! Assembling per-prediction loss terms from a solved assignment.

use alloc::vec;
use alloc::vec::Vec;

use super::{
    direction_loss, focal_loss, pointwise_l1, render_loss, LossError,
};
use crate::assign::{split_by_mask, AssignOutcome, AssignmentResult};
use crate::geometry::{MapClass, MapElement, VectorMap};
use crate::raster::BevMask;

/// Index of the background class in the 4-entry probability vector
/// (three map classes plus background).
pub const BACKGROUND_CLASS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossConfig {
    pub focal_alpha: f64,
    pub focal_gamma: f64,
    /// Soft-rasterization falloff, meters.
    pub sigma: f64,
    /// Polygon band width; `None` means one raster pixel.
    pub line_width: Option<f64>,
    /// Rasterization resolution for the rendering loss, px/m.
    pub render_resolution: f64,
    /// Point count for label resampling in the point-wise loss.
    pub resample_len: usize,
    /// Minimum original vertices for a subsegment to survive masking.
    pub min_run_points: usize,
}

impl Default for LossConfig {
    fn default() -> Self {
        Self {
            focal_alpha: 0.25,
            focal_gamma: 2.0,
            sigma: 0.3,
            line_width: None,
            render_resolution: 2.0,
            resample_len: 20,
            min_run_points: 4,
        }
    }
}

/// Unweighted loss terms and their per-term gradients, one entry per
/// prediction (zeros for excluded predictions).
#[derive(Debug, Clone, PartialEq)]
pub struct LossParts {
    pub cls: f64,
    pub pt: f64,
    pub rend: f64,
    pub dir: f64,
    pub bev_seg: f64,
    pub grad_cls: Vec<Vec<f64>>,
    pub grad_pt: Vec<Vec<(f64, f64)>>,
    pub grad_rend: Vec<Vec<(f64, f64)>>,
    pub grad_dir: Vec<Vec<(f64, f64)>>,
}

/// Probability vector implied by a classed prediction with a scalar
/// confidence: the confidence on its class, the remainder spread over the
/// other entries.
pub fn class_probs_from_confidence(class: MapClass, confidence: f64) -> [f64; 4] {
    let mut p = [(1.0 - confidence) / 3.0; 4];
    p[class.index()] = confidence;
    p
}

fn target_class(outcome: &AssignOutcome, labels: &VectorMap) -> usize {
    match outcome {
        AssignOutcome::OneToOne { label, .. } => labels.elements[*label].class.index(),
        AssignOutcome::OneToMany { labels: ls, .. } => labels.elements[ls[0]].class.index(),
        AssignOutcome::Unassigned => BACKGROUND_CLASS,
    }
}

/// Compute the unweighted mask-aware loss terms for a solved assignment.
///
/// Predictions that are completely masked and not matched one-to-one are
/// excluded entirely. The classification term sums focal losses over the
/// remaining predictions (unassigned ones are supervised toward the
/// background class). The point-wise term sums L1 losses over direct
/// one-to-one matches only. The rendering term averages masked Dice
/// losses over the assigned remainder, with one-to-many targets rendered
/// as the union of their labels. The direction term sums the turning
/// smoothness of each remaining prediction.
pub fn compute_loss_parts(
    preds: &VectorMap,
    labels: &VectorMap,
    mask: &BevMask,
    assignment: &AssignmentResult,
    cfg: &LossConfig,
) -> Result<LossParts, LossError> {
    let n = preds.elements.len();
    assert_eq!(assignment.outcomes.len(), n, "assignment size mismatch");

    let render_spec = {
        let r = crate::assign::CostParams {
            cost_resolution: cfg.render_resolution,
            ..Default::default()
        };
        r.raster_spec(&labels.bev_range)
    };
    // the mask is defined on the label grid; re-bin it onto the render
    // grid by cell-center lookup
    let render_mask = {
        let mut m = BevMask::all_unobserved(render_spec);
        for row in 0..m.grid.height {
            for col in 0..m.grid.width {
                let p = render_spec.pixel_center(row, col);
                m.grid.set(row, col, mask.observed_at(p));
            }
        }
        m
    };

    let mut parts = LossParts {
        cls: 0.0,
        pt: 0.0,
        rend: 0.0,
        dir: 0.0,
        bev_seg: 0.0,
        grad_cls: vec![vec![0.0; 4]; n],
        grad_pt: preds
            .elements
            .iter()
            .map(|q| vec![(0.0, 0.0); q.points.len()])
            .collect(),
        grad_rend: preds
            .elements
            .iter()
            .map(|q| vec![(0.0, 0.0); q.points.len()])
            .collect(),
        grad_dir: preds
            .elements
            .iter()
            .map(|q| vec![(0.0, 0.0); q.points.len()])
            .collect(),
    };

    let mut rendered_count = 0usize;
    let mut rend_sum = 0.0;
    let mut rend_grads: Vec<(usize, Vec<(f64, f64)>)> = Vec::new();

    for (i, q) in preds.elements.iter().enumerate() {
        let outcome = &assignment.outcomes[i];
        let fully_masked =
            split_by_mask(q, mask, cfg.resample_len, cfg.min_run_points).segments.is_empty();
        let included = !(fully_masked && !matches!(outcome, AssignOutcome::OneToOne { .. }));
        if !included {
            continue;
        }

        // classification
        let p_hat = class_probs_from_confidence(q.class, q.confidence.unwrap_or(1.0));
        let (cls, grad_cls) =
            focal_loss(&p_hat, target_class(outcome, labels), cfg.focal_alpha, cfg.focal_gamma);
        parts.cls += cls;
        parts.grad_cls[i] = grad_cls;

        // point-wise, direct matches only
        if let AssignOutcome::OneToOne { label, .. } = outcome {
            let (pt, grad_pt) = pointwise_l1(&q.points, &labels.elements[*label])?;
            parts.pt += pt;
            parts.grad_pt[i] = grad_pt;
        }

        // rendering, any assigned prediction
        let assigned: Vec<&MapElement> = match outcome {
            AssignOutcome::OneToOne { label, .. } => vec![&labels.elements[*label]],
            AssignOutcome::OneToMany { labels: ls, .. } => {
                ls.iter().map(|&j| &labels.elements[j]).collect()
            }
            AssignOutcome::Unassigned => Vec::new(),
        };
        if !assigned.is_empty() {
            let width = cfg.line_width.unwrap_or(1.0 / render_spec.resolution);
            let (rend, grad_rend) = render_loss(
                q,
                &assigned,
                Some(&render_mask),
                &render_spec,
                cfg.sigma,
                width,
            )?;
            rend_sum += rend;
            rend_grads.push((i, grad_rend));
            rendered_count += 1;
        }

        // direction smoothness
        if q.points.len() >= 3 {
            let (dir, grad_dir) = direction_loss(&q.points)?;
            parts.dir += dir;
            parts.grad_dir[i] = grad_dir;
        }
    }

    if rendered_count > 0 {
        let scale = 1.0 / rendered_count as f64;
        parts.rend = rend_sum * scale;
        for (i, grad) in rend_grads {
            parts.grad_rend[i] = grad.into_iter().map(|(x, y)| (x * scale, y * scale)).collect();
        }
    }

    Ok(parts)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::assign::{solve_global, AssignParams};
    use crate::geometry::{BevSpec, Point2};
    use alloc::string::String;

    fn spec() -> BevSpec {
        BevSpec::new(-15.0, 15.0, -15.0, 15.0, 2.0).unwrap()
    }

    fn boundary(x: f64, y0: f64, y1: f64, n: usize, conf: Option<f64>) -> MapElement {
        let pts: Vec<Point2> = (0..n)
            .map(|k| Point2::new(x, y0 + (y1 - y0) * k as f64 / (n - 1) as f64))
            .collect();
        MapElement::polyline(MapClass::Boundary, pts, conf).unwrap()
    }

    fn map_of(elements: Vec<MapElement>) -> VectorMap {
        VectorMap::new(String::from("t"), spec(), elements)
    }

    #[test]
    fn one_to_many_prediction_contributes_no_point_loss() {
        let q = map_of(vec![boundary(0.0, -12.0, 12.0, 20, Some(0.95))]);
        let g = map_of(vec![
            boundary(0.0, -12.0, -2.5, 8, None),
            boundary(0.0, 2.5, 12.0, 8, None),
        ]);
        let mut mask = BevMask::all_observed(spec());
        for row in 0..mask.grid.height {
            for col in 0..mask.grid.width {
                if spec().pixel_center(row, col).dist(Point2::new(0.0, 0.0)) <= 2.0 {
                    mask.grid.set(row, col, false);
                }
            }
        }
        let assignment = solve_global(&q, &g, &mask, &AssignParams::default()).unwrap();
        assert!(matches!(
            assignment.outcomes[0],
            AssignOutcome::OneToMany { .. }
        ));
        let parts =
            compute_loss_parts(&q, &g, &mask, &assignment, &LossConfig::default()).unwrap();
        assert_eq!(parts.pt, 0.0);
        assert!(parts.grad_pt[0].iter().all(|&(x, y)| x == 0.0 && y == 0.0));
        // but it does contribute classification and rendering terms
        assert!(parts.cls > 0.0);
        assert!(parts.rend > 0.0);
    }

    #[test]
    fn fully_masked_unassigned_prediction_excluded() {
        // two predictions: one observed and matched, one fully masked
        let q = map_of(vec![
            boundary(-3.0, -10.0, 10.0, 20, Some(0.9)),
            boundary(10.0, -10.0, 10.0, 20, Some(0.4)),
        ]);
        let g = map_of(vec![boundary(-3.1, -10.0, 10.0, 8, None)]);
        let mut mask = BevMask::all_observed(spec());
        for row in 0..mask.grid.height {
            for col in 0..mask.grid.width {
                if spec().pixel_center(row, col).x > 5.0 {
                    mask.grid.set(row, col, false);
                }
            }
        }
        let assignment = solve_global(&q, &g, &mask, &AssignParams::default()).unwrap();
        assert!(matches!(assignment.outcomes[1], AssignOutcome::Unassigned));
        let parts =
            compute_loss_parts(&q, &g, &mask, &assignment, &LossConfig::default()).unwrap();
        // the masked prediction contributes nothing at all
        assert!(parts.grad_cls[1].iter().all(|&v| v == 0.0));
        assert!(parts.grad_dir[1].iter().all(|&(x, y)| x == 0.0 && y == 0.0));
        assert!(parts.grad_rend[1].iter().all(|&(x, y)| x == 0.0 && y == 0.0));
    }

    #[test]
    fn unassigned_observed_prediction_supervised_toward_background() {
        let q = map_of(vec![
            boundary(-3.0, -10.0, 10.0, 20, Some(0.9)),
            boundary(5.0, -10.0, 10.0, 20, Some(0.8)),
        ]);
        let g = map_of(vec![boundary(-3.1, -10.0, 10.0, 8, None)]);
        let mask = BevMask::all_observed(spec());
        let assignment = solve_global(&q, &g, &mask, &AssignParams::default()).unwrap();
        assert!(matches!(assignment.outcomes[1], AssignOutcome::Unassigned));
        let parts =
            compute_loss_parts(&q, &g, &mask, &assignment, &LossConfig::default()).unwrap();
        // gradient lands on the background entry for the unassigned one
        assert!(parts.grad_cls[1][BACKGROUND_CLASS] != 0.0);
        assert_eq!(parts.grad_cls[1][MapClass::Boundary.index()], 0.0);
    }
}

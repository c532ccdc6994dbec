//! Splitting elements by the BEV observability mask.

use alloc::vec::Vec;

use super::Subsegments;
use crate::geometry::{resample_polyline, resample_ring, ElementKind, MapElement, Point2};
use crate::raster::BevMask;

/// A maximal observed run of original vertices. Ring runs may wrap, and a
/// fully observed ring is its own case so closure survives.
#[derive(Debug, Clone, PartialEq)]
pub enum Run {
    Open(Vec<usize>),
    FullRing,
}

fn edge_observed(a: Point2, b: Point2, mask: &BevMask) -> bool {
    let len = a.dist(b);
    // sample at half-cell pitch so no crossed cell is skipped
    let steps = (len * mask.spec.resolution * 2.0) as usize + 1;
    for k in 1..steps {
        let t = k as f64 / steps as f64;
        if !mask.observed_at(a + (b - a) * t) {
            return false;
        }
    }
    true
}

/// Maximal runs of consecutive vertices whose points and connecting edges
/// all lie in observed cells.
pub fn observed_runs(points: &[Point2], closed: bool, mask: &BevMask) -> Vec<Run> {
    let n = points.len();
    let vertex_ok: Vec<bool> = points.iter().map(|&p| mask.observed_at(p)).collect();
    let edge_count = if closed { n } else { n - 1 };
    let edge_ok: Vec<bool> = (0..edge_count)
        .map(|i| {
            let j = (i + 1) % n;
            vertex_ok[i] && vertex_ok[j] && edge_observed(points[i], points[j], mask)
        })
        .collect();

    if closed && vertex_ok.iter().all(|&v| v) && edge_ok.iter().all(|&e| e) {
        return alloc::vec![Run::FullRing];
    }

    let mut runs = Vec::new();
    if !closed {
        let mut i = 0;
        while i < n {
            if !vertex_ok[i] {
                i += 1;
                continue;
            }
            let mut run = alloc::vec![i];
            while i + 1 < n && edge_ok[i] {
                run.push(i + 1);
                i += 1;
            }
            runs.push(Run::Open(run));
            i += 1;
        }
    } else {
        // arc starts: observed vertex whose incoming edge is broken
        for start in 0..n {
            let prev_edge = (start + n - 1) % n;
            if !vertex_ok[start] || edge_ok[prev_edge] {
                continue;
            }
            let mut run = alloc::vec![start];
            let mut i = start;
            while edge_ok[i] {
                i = (i + 1) % n;
                run.push(i);
            }
            runs.push(Run::Open(run));
        }
        // isolated observed vertices with both edges broken are length-1
        // runs already collected above; nothing else to do
    }
    runs
}

/// Split a prediction into its observed subsegments, resampled to
/// `resample_len` points. Runs with fewer than `min_run_points` original
/// vertices are discarded. Polygons split into open arcs; a fully
/// observed polygon stays one closed segment (ring-resampled).
pub fn split_by_mask(
    q: &MapElement,
    mask: &BevMask,
    resample_len: usize,
    min_run_points: usize,
) -> Subsegments {
    let closed = q.kind == ElementKind::Polygon;
    let mut segments = Vec::new();
    for run in observed_runs(&q.points, closed, mask) {
        match run {
            Run::FullRing => {
                if q.points.len() >= min_run_points {
                    if let Ok(seg) = resample_ring(&q.points, resample_len) {
                        segments.push(seg);
                    }
                }
            }
            Run::Open(indices) => {
                if indices.len() < min_run_points {
                    continue;
                }
                let pts: Vec<Point2> = indices.iter().map(|&i| q.points[i]).collect();
                if let Ok(seg) = resample_polyline(&pts, resample_len) {
                    segments.push(seg);
                }
            }
        }
    }
    Subsegments { segments }
}

/// Mask a ground-truth element for observed-area-only evaluation: the
/// same run semantics as [`split_by_mask`] but keeping original vertices,
/// so a fully observed element comes back unchanged (polygons keep their
/// kind) and partial runs become polyline fragments of the same class.
pub fn mask_element(q: &MapElement, mask: &BevMask, min_run_points: usize) -> Vec<MapElement> {
    let closed = q.kind == ElementKind::Polygon;
    let mut out = Vec::new();
    for run in observed_runs(&q.points, closed, mask) {
        match run {
            Run::FullRing => out.push(q.clone()),
            Run::Open(indices) => {
                if indices.len() < min_run_points {
                    continue;
                }
                if !closed && indices.len() == q.points.len() {
                    out.push(q.clone());
                    continue;
                }
                let pts: Vec<Point2> = indices.iter().map(|&i| q.points[i]).collect();
                out.push(MapElement::fragment(q.class, pts, q.confidence));
            }
        }
    }
    out
}

//! Arc-length-uniform resampling of polylines and rings.

use alloc::vec::Vec;

use super::{ElementKind, GeometryError, MapElement, Point2};

fn cumulative_lengths(points: &[Point2], closed: bool) -> (Vec<f64>, f64) {
    let n = points.len();
    let edge_count = if closed { n } else { n - 1 };
    let mut cum = Vec::with_capacity(edge_count + 1);
    cum.push(0.0);
    let mut total = 0.0;
    for i in 0..edge_count {
        total += points[i].dist(points[(i + 1) % n]);
        cum.push(total);
    }
    (cum, total)
}

fn point_at(points: &[Point2], cum: &[f64], closed: bool, s: f64) -> Point2 {
    let n = points.len();
    // binary search for the edge containing arc position s
    let mut lo = 0usize;
    let mut hi = cum.len() - 1;
    while lo + 1 < hi {
        let mid = (lo + hi) / 2;
        if cum[mid] <= s {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let a = points[lo];
    let b = points[(lo + 1) % n];
    let len = cum[lo + 1] - cum[lo];
    if len <= 0.0 {
        return a;
    }
    let t = ((s - cum[lo]) / len).clamp(0.0, 1.0);
    let _ = closed;
    a + (b - a) * t
}

/// Resample an open polyline to exactly `count` arc-length-uniform points.
/// Both endpoints are preserved exactly.
pub fn resample_polyline(points: &[Point2], count: usize) -> Result<Vec<Point2>, GeometryError> {
    if points.len() < 2 || count < 2 {
        return Err(GeometryError::InvalidElement("resample needs >= 2 points"));
    }
    let (cum, total) = cumulative_lengths(points, false);
    if total <= 0.0 {
        return Err(GeometryError::DegenerateGeometry);
    }
    let mut out = Vec::with_capacity(count);
    out.push(points[0]);
    for k in 1..count - 1 {
        let s = total * (k as f64) / ((count - 1) as f64);
        out.push(point_at(points, &cum, false, s));
    }
    out.push(*points.last().unwrap());
    Ok(out)
}

/// Resample a closed ring (implicit closing edge) to `count` points spread
/// uniformly over the full perimeter, starting at the first point.
pub fn resample_ring(points: &[Point2], count: usize) -> Result<Vec<Point2>, GeometryError> {
    if points.len() < 3 || count < 2 {
        return Err(GeometryError::InvalidElement("ring resample needs >= 3 points"));
    }
    let (cum, total) = cumulative_lengths(points, true);
    if total <= 0.0 {
        return Err(GeometryError::DegenerateGeometry);
    }
    let mut out = Vec::with_capacity(count);
    out.push(points[0]);
    for k in 1..count {
        let s = total * (k as f64) / (count as f64);
        out.push(point_at(points, &cum, true, s));
    }
    Ok(out)
}

/// Resample an element according to its kind: polylines keep their
/// endpoints, polygons are sampled around the whole ring including the
/// closing edge.
pub fn resample_element(e: &MapElement, count: usize) -> Result<Vec<Point2>, GeometryError> {
    match e.kind {
        ElementKind::Polyline => resample_polyline(&e.points, count),
        ElementKind::Polygon => resample_ring(&e.points, count),
    }
}

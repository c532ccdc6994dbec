//! Ramer-Douglas-Peucker simplification with an iteratively growing
//! tolerance until the point budget is met.

use alloc::vec;
use alloc::vec::Vec;

use crate::geometry::Point2;

fn perpendicular_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len = ab.norm();
    if len <= 0.0 {
        return p.dist(a);
    }
    // distance to the infinite line through a-b; RDP anchors are kept, so
    // the segment vs line distinction only matters for degenerate loops
    crate::float::abs((p - a).cross(ab)) / len
}

/// Standard RDP at a fixed tolerance. The output is a subsequence of the
/// input and always keeps both endpoints.
pub fn rdp(points: &[Point2], eps: f64) -> Vec<Point2> {
    if points.len() <= 2 {
        return points.to_vec();
    }
    let mut keep = vec![false; points.len()];
    keep[0] = true;
    keep[points.len() - 1] = true;
    let mut stack = vec![(0usize, points.len() - 1)];
    while let Some((lo, hi)) = stack.pop() {
        if hi <= lo + 1 {
            continue;
        }
        let (a, b) = (points[lo], points[hi]);
        let mut best = lo;
        let mut best_d = -1.0;
        for i in lo + 1..hi {
            let d = perpendicular_distance(points[i], a, b);
            if d > best_d {
                best_d = d;
                best = i;
            }
        }
        if best_d > eps {
            keep[best] = true;
            stack.push((lo, best));
            stack.push((best, hi));
        }
    }
    points
        .iter()
        .zip(&keep)
        .filter(|(_, &k)| k)
        .map(|(&p, _)| p)
        .collect()
}

/// RDP with a tolerance that grows in integer multiples of `eps1` until at
/// most `max_points` survive. Returns the simplified polyline and the
/// final tolerance used.
pub fn rdp_iterative_with_eps(points: &[Point2], eps1: f64, max_points: usize) -> (Vec<Point2>, f64) {
    debug_assert!(eps1 > 0.0 && max_points >= 2);
    let mut t = 1u32;
    loop {
        let eps = eps1 * t as f64;
        let out = rdp(points, eps);
        if out.len() <= max_points {
            return (out, eps);
        }
        t += 1;
    }
}

/// See [`rdp_iterative_with_eps`].
pub fn rdp_iterative(points: &[Point2], eps1: f64, max_points: usize) -> Vec<Point2> {
    rdp_iterative_with_eps(points, eps1, max_points).0
}

/// Iterative RDP on a closed ring: the ring is opened at its first point,
/// simplified with the closure edge made explicit, and re-closed. Returns
/// fewer than 3 points when the ring collapses.
pub fn rdp_ring_iterative(points: &[Point2], eps1: f64, max_points: usize) -> Vec<Point2> {
    debug_assert!(eps1 > 0.0 && max_points >= 2);
    let mut open: Vec<Point2> = points.to_vec();
    open.push(points[0]);
    let mut t = 1u32;
    loop {
        let eps = eps1 * t as f64;
        let mut out = rdp(&open, eps);
        out.pop(); // drop the duplicated closing point
        if out.len() <= max_points {
            return out;
        }
        t += 1;
    }
}

//! Removal of dividers that duplicate boundaries or crossing outlines.

use alloc::vec::Vec;

use crate::float;
use crate::geometry::{point_segment_distance, resample_polyline, MapElement, Point2, PI};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DividerGate {
    /// Maximum distance to the other element, meters.
    pub distance: f64,
    /// Maximum tangent angle difference, radians (undirected lines).
    pub angle: f64,
}

impl Default for DividerGate {
    fn default() -> Self {
        Self {
            distance: 0.5,
            angle: 10.0 * PI / 180.0,
        }
    }
}

/// Undirected angle between two directions, folded into `[0, pi/2]`.
fn line_angle_between(a: Point2, b: Point2) -> f64 {
    let cross = float::abs(a.cross(b));
    let dot = float::abs(a.dot(b));
    float::atan2(cross, dot)
}

/// Tangent directions at each sample of a polyline, central differences in
/// the interior and one-sided at the ends.
fn tangents(samples: &[Point2]) -> Vec<Point2> {
    let n = samples.len();
    (0..n)
        .map(|k| {
            let a = samples[if k == 0 { 0 } else { k - 1 }];
            let b = samples[if k + 1 == n { n - 1 } else { k + 1 }];
            b - a
        })
        .collect()
}

/// A divider is removed when at least half of its resampled points lie
/// within `gate.distance` of some boundary or crossing edge whose
/// direction is parallel within `gate.angle`.
pub fn filter_dividers(
    dividers: Vec<MapElement>,
    others: &[MapElement],
    gate: &DividerGate,
    n_samples: usize,
) -> Vec<MapElement> {
    dividers
        .into_iter()
        .filter(|divider| {
            let samples = match resample_polyline(&divider.points, n_samples.max(2)) {
                Ok(s) => s,
                Err(_) => return true, // degenerate: leave it for later stages
            };
            let dirs = tangents(&samples);
            let mut gated = 0usize;
            for (p, t) in samples.iter().zip(&dirs) {
                let mut hit = false;
                'outer: for other in others {
                    for (a, b) in other.edges() {
                        if point_segment_distance(*p, a, b) <= gate.distance
                            && line_angle_between(*t, b - a) <= gate.angle
                        {
                            hit = true;
                            break 'outer;
                        }
                    }
                }
                if hit {
                    gated += 1;
                }
            }
            2 * gated < samples.len()
        })
        .collect()
}

//! Road-corridor scene generation.

use alloc::format;
use alloc::vec::Vec;

use super::SynthError;
use crate::float;
use crate::geometry::{crop_to_range, BevSpec, MapClass, MapElement, Point2, VectorMap};
use crate::rng::SplitMix64;

/// Longitudinal extent of a crossing, meters.
pub const CROSSING_SPAN: f64 = 3.0;
/// Lateral inset of crossings from the road boundaries, keeping a road
/// strip between crossing and outside so the boundary stays contiguous.
pub const CROSSING_INSET: f64 = 0.5;

const ARC_STEP: f64 = 1.0;

#[derive(Debug, Clone, PartialEq)]
pub struct SceneParams {
    pub seed: u64,
    pub n_lanes: usize,
    /// Lane width in meters.
    pub lane_width: f64,
    /// Corridor curvature in 1/m; 0 is a straight road.
    pub curvature: f64,
    pub n_crossings: usize,
    /// Lane-marking dash pattern `(on, off)` in meters; `off <= 0` draws
    /// solid markings.
    pub dash_pattern: (f64, f64),
}

impl Default for SceneParams {
    fn default() -> Self {
        Self {
            seed: 0,
            n_lanes: 3,
            lane_width: 3.5,
            curvature: 0.0,
            n_crossings: 1,
            dash_pattern: (3.0, 6.0),
        }
    }
}

impl SceneParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        if self.n_lanes < 1 {
            return Err(SynthError::InvalidParams("need at least one lane"));
        }
        if !(self.lane_width > 0.0) {
            return Err(SynthError::InvalidParams("lane width must be positive"));
        }
        if !self.curvature.is_finite() || float::abs(self.curvature) > 0.025 {
            return Err(SynthError::InvalidParams("curvature outside [-0.025, 0.025]"));
        }
        if self.curvature != 0.0 {
            let road_half = self.n_lanes as f64 * self.lane_width / 2.0;
            if 1.0 / float::abs(self.curvature) <= road_half + 2.0 {
                return Err(SynthError::InvalidParams("curvature radius inside the road"));
            }
        }
        if !(self.dash_pattern.0 > 0.0) {
            return Err(SynthError::InvalidParams("dash on-length must be positive"));
        }
        Ok(())
    }

    pub fn road_width(&self) -> f64 {
        self.n_lanes as f64 * self.lane_width
    }
}

/// Point of the corridor at arc position `s` (along the centerline) and
/// signed lateral offset `d` (positive right). A curved corridor is a
/// family of concentric arcs; a straight one a family of parallel lines.
pub(crate) fn corridor_point(curvature: f64, s: f64, d: f64) -> Point2 {
    if float::abs(curvature) < 1e-12 {
        Point2::new(d, s)
    } else {
        let radius = 1.0 / curvature;
        let theta = s / radius;
        Point2::new(
            radius - (radius - d) * float::cos(theta),
            (radius - d) * float::sin(theta),
        )
    }
}

fn offset_polyline(curvature: f64, s0: f64, s1: f64, d: f64) -> Vec<Point2> {
    let len = s1 - s0;
    let steps = (len / ARC_STEP) as usize + 1;
    (0..=steps)
        .map(|k| corridor_point(curvature, s0 + len * k as f64 / steps as f64, d))
        .collect()
}

/// Arc range that guarantees longitudinal coverage of the BEV range plus
/// a margin, conservatively capped for strongly curved corridors.
fn arc_range(params: &SceneParams, spec: &BevSpec) -> (f64, f64) {
    let reach = spec.y_max.max(-spec.y_min) + 5.0;
    if float::abs(params.curvature) < 1e-12 {
        return (-reach, reach);
    }
    let radius = float::abs(1.0 / params.curvature);
    let inner = radius - params.road_width() / 2.0;
    let theta = float::asin((reach / inner).min(1.0)).min(1.2);
    (-(radius * theta), radius * theta)
}

/// Generate a deterministic road-corridor ground-truth map: two
/// boundaries, `n_lanes - 1` dividers split at the crossings, and
/// `n_crossings` rectangles perpendicular to the corridor. Pure function
/// of the seed.
pub fn gen_scene(params: &SceneParams, spec: &BevSpec) -> Result<VectorMap, SynthError> {
    params.validate()?;
    let mut rng = SplitMix64::new(params.seed);
    let kappa = params.curvature;
    let half = params.road_width() / 2.0;
    let (s_lo, s_hi) = arc_range(params, spec);

    // crossing centers in jittered slots, clear of the corridor ends
    let mut crossings_s: Vec<f64> = Vec::new();
    if params.n_crossings > 0 {
        let lo = s_lo + 8.0;
        let hi = s_hi - 8.0;
        if hi > lo {
            let slot = (hi - lo) / params.n_crossings as f64;
            for k in 0..params.n_crossings {
                let center = lo + slot * (k as f64 + 0.5);
                let jitter = rng.range(-0.3, 0.3) * (slot - CROSSING_SPAN).max(0.0);
                crossings_s.push(center + jitter);
            }
        }
    }

    let mut elements: Vec<MapElement> = Vec::new();

    // two road boundaries spanning the full corridor
    for d in [-half, half] {
        let pts = offset_polyline(kappa, s_lo, s_hi, d);
        elements.push(
            MapElement::polyline(MapClass::Boundary, pts, None)
                .expect("boundary construction is valid"),
        );
    }

    // dividers between lanes, split at crossings
    let mut spans: Vec<(f64, f64)> = Vec::new();
    {
        let mut cursor = s_lo;
        for &c in &crossings_s {
            spans.push((cursor, c - CROSSING_SPAN / 2.0));
            cursor = c + CROSSING_SPAN / 2.0;
        }
        spans.push((cursor, s_hi));
    }
    for lane in 1..params.n_lanes {
        let d = -half + lane as f64 * params.lane_width;
        for &(a, b) in &spans {
            if b - a < 2.0 {
                continue;
            }
            let pts = offset_polyline(kappa, a, b, d);
            elements.push(
                MapElement::polyline(MapClass::Divider, pts, None)
                    .expect("divider construction is valid"),
            );
        }
    }

    // rectangular crossings inset from the boundaries
    for &c in &crossings_s {
        let (s0, s1) = (c - CROSSING_SPAN / 2.0, c + CROSSING_SPAN / 2.0);
        let (d0, d1) = (-half + CROSSING_INSET, half - CROSSING_INSET);
        let ring = alloc::vec![
            corridor_point(kappa, s0, d0),
            corridor_point(kappa, s0, d1),
            corridor_point(kappa, s1, d1),
            corridor_point(kappa, s1, d0),
        ];
        elements.push(
            MapElement::polygon(MapClass::PedCrossing, ring, None)
                .expect("crossing construction is valid"),
        );
    }

    let map = VectorMap::new(format!("scene-{}", params.seed), *spec, elements);
    Ok(crop_to_range(&map, spec))
}

//! Ground-truth rasterization, the inverse of vectorization for
//! round-trip testing.

use alloc::vec::Vec;

use crate::float;
use crate::geometry::{point_segment_distance, BevSpec, MapClass, MapElement, Point2, VectorMap};
use crate::raster::{RasterClass, SemanticRaster};

/// Default painted width of a lane marking, meters.
pub const MARKING_WIDTH: f64 = 0.15;

/// Scanline-fill a ring into the raster with the half-open edge rule.
fn fill_ring(raster: &mut SemanticRaster, ring: &[Point2], class: RasterClass) {
    let spec = raster.spec;
    let n = ring.len();
    for row in 0..raster.height {
        let y = spec.pixel_center(row, 0).y;
        let mut xs: Vec<f64> = Vec::new();
        for i in 0..n {
            let a = ring[i];
            let b = ring[(i + 1) % n];
            if (a.y <= y && y < b.y) || (b.y <= y && y < a.y) {
                let t = (y - a.y) / (b.y - a.y);
                xs.push(a.x + t * (b.x - a.x));
            }
        }
        xs.sort_by(f64::total_cmp);
        for pair in xs.chunks_exact(2) {
            let col_lo = float::ceil((pair[0] - spec.x_min) * spec.resolution - 0.5).max(0.0) as usize;
            let col_hi = float::floor((pair[1] - spec.x_min) * spec.resolution - 0.5) as i64;
            if col_hi < 0 {
                continue;
            }
            for col in col_lo..=(col_hi as usize).min(raster.width - 1) {
                raster.set(row, col, class);
            }
        }
    }
}

/// Paint a thick segment, restricted to pixels currently of class `over`.
fn draw_segment(
    raster: &mut SemanticRaster,
    a: Point2,
    b: Point2,
    width: f64,
    class: RasterClass,
    over: RasterClass,
) {
    let spec = raster.spec;
    let r = width / 2.0;
    let x_lo = a.x.min(b.x) - r;
    let x_hi = a.x.max(b.x) + r;
    let y_lo = a.y.min(b.y) - r;
    let y_hi = a.y.max(b.y) + r;
    let col_lo = (((x_lo - spec.x_min) * spec.resolution - 0.5).max(0.0)) as usize;
    let col_hi = float::ceil((x_hi - spec.x_min) * spec.resolution) as i64;
    let row_lo = (((spec.y_max - y_hi) * spec.resolution - 0.5).max(0.0)) as usize;
    let row_hi = float::ceil((spec.y_max - y_lo) * spec.resolution) as i64;
    if col_hi < 0 || row_hi < 0 {
        return;
    }
    for row in row_lo..=(row_hi as usize).min(raster.height - 1) {
        for col in col_lo..=(col_hi as usize).min(raster.width - 1) {
            if raster.get(row, col) != over {
                continue;
            }
            let p = spec.pixel_center(row, col);
            if point_segment_distance(p, a, b) <= r {
                raster.set(row, col, class);
            }
        }
    }
}

/// On-intervals of the dash pattern over `[0, total]`, phase 0 at the
/// element's first point. `off <= 0` yields one solid interval.
fn dash_intervals(total: f64, on: f64, off: f64) -> Vec<(f64, f64)> {
    if off <= 0.0 {
        return alloc::vec![(0.0, total)];
    }
    let period = on + off;
    let mut out = Vec::new();
    let mut start = 0.0;
    while start < total {
        out.push((start, (start + on).min(total)));
        start += period;
    }
    out
}

/// Cut the sub-polyline covering arc interval `[s0, s1]`.
fn sub_polyline(points: &[Point2], s0: f64, s1: f64) -> Vec<Point2> {
    let mut out = Vec::new();
    let mut acc = 0.0;
    for w in points.windows(2) {
        let len = w[0].dist(w[1]);
        if len <= 0.0 {
            continue;
        }
        let seg_start = acc;
        let seg_end = acc + len;
        if seg_end >= s0 && seg_start <= s1 {
            let t0 = ((s0 - seg_start) / len).clamp(0.0, 1.0);
            let t1 = ((s1 - seg_start) / len).clamp(0.0, 1.0);
            let a = w[0] + (w[1] - w[0]) * t0;
            let b = w[0] + (w[1] - w[0]) * t1;
            if out.is_empty() {
                out.push(a);
            }
            out.push(b);
        }
        acc = seg_end;
    }
    out
}

/// Rasterize a ground-truth vector map: road filled between boundary
/// pairs, crossings filled over the road, lane markings dashed along the
/// dividers (drawn only over road pixels), outside elsewhere. Every cell
/// is observed.
///
/// Boundary elements are consumed in consecutive pairs forming the left
/// and right edge of a corridor, which matches the generator's layout.
pub fn rasterize_gt(
    map: &VectorMap,
    spec: &BevSpec,
    dash_pattern: (f64, f64),
    marking_width: f64,
) -> SemanticRaster {
    let mut raster = SemanticRaster::filled(*spec, RasterClass::Outside);

    // road surface between boundary pairs
    let boundaries: Vec<&MapElement> = map
        .elements
        .iter()
        .filter(|e| e.class == MapClass::Boundary)
        .collect();
    for pair in boundaries.chunks_exact(2) {
        let mut ring: Vec<Point2> = pair[0].points.clone();
        ring.extend(pair[1].points.iter().rev().copied());
        fill_ring(&mut raster, &ring, RasterClass::Road);
    }

    // crossings over the road
    for e in &map.elements {
        if e.class == MapClass::PedCrossing {
            fill_ring(&mut raster, &e.points, RasterClass::PedCrossing);
        }
    }

    // dashed markings along dividers, on the road only
    for e in &map.elements {
        if e.class != MapClass::Divider {
            continue;
        }
        let total = e.arc_length();
        for (s0, s1) in dash_intervals(total, dash_pattern.0, dash_pattern.1) {
            let dash = sub_polyline(&e.points, s0, s1);
            for w in dash.windows(2) {
                draw_segment(
                    &mut raster,
                    w[0],
                    w[1],
                    marking_width,
                    RasterClass::LaneMarking,
                    RasterClass::Road,
                );
            }
        }
    }

    raster
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::VectorMap;
    use crate::raster::connected_components;
    use crate::synth::{gen_scene, SceneParams};
    use alloc::string::String;

    fn spec() -> BevSpec {
        BevSpec::new(-15.0, 15.0, -30.0, 30.0, 10.0).unwrap()
    }

    #[test]
    fn empty_map_all_outside() {
        let map = VectorMap::new(String::from("e"), spec(), Vec::new());
        let raster = rasterize_gt(&map, &spec(), (3.0, 6.0), MARKING_WIDTH);
        assert!(raster.classes().iter().all(|&c| c == RasterClass::Outside));
    }

    #[test]
    fn solid_divider_is_one_component() {
        let params = SceneParams {
            n_lanes: 2,
            n_crossings: 0,
            dash_pattern: (3.0, 0.0),
            ..Default::default()
        };
        let map = gen_scene(&params, &spec()).unwrap();
        let raster = rasterize_gt(&map, &spec(), params.dash_pattern, MARKING_WIDTH);
        let marking = raster.class_mask(RasterClass::LaneMarking);
        assert!(marking.any());
        assert_eq!(connected_components(&marking).count(), 1);
    }

    #[test]
    fn dashes_fragment_the_marking() {
        let params = SceneParams {
            n_lanes: 2,
            n_crossings: 0,
            dash_pattern: (3.0, 6.0),
            ..Default::default()
        };
        let map = gen_scene(&params, &spec()).unwrap();
        let raster = rasterize_gt(&map, &spec(), params.dash_pattern, MARKING_WIDTH);
        let marking = raster.class_mask(RasterClass::LaneMarking);
        // 60 m corridor with a 9 m period: several separate dashes
        assert!(connected_components(&marking).count() >= 5);
    }

    #[test]
    fn road_fill_between_boundaries() {
        let params = SceneParams {
            n_lanes: 3,
            n_crossings: 0,
            ..Default::default()
        };
        let map = gen_scene(&params, &spec()).unwrap();
        let raster = rasterize_gt(&map, &spec(), params.dash_pattern, MARKING_WIDTH);
        let half = params.road_width() / 2.0;
        let spec = spec();
        // probe interior and exterior pixels away from markings
        let (r1, c1) = spec.cell_of(Point2::new(half - 0.8, 0.0)).unwrap();
        assert_eq!(raster.get(r1, c1), RasterClass::Road);
        let (r2, c2) = spec.cell_of(Point2::new(half + 1.0, 0.0)).unwrap();
        assert_eq!(raster.get(r2, c2), RasterClass::Outside);
    }

    #[test]
    fn crossing_painted_and_inset() {
        let params = SceneParams {
            seed: 3,
            n_lanes: 2,
            n_crossings: 1,
            ..Default::default()
        };
        let map = gen_scene(&params, &spec()).unwrap();
        let raster = rasterize_gt(&map, &spec(), params.dash_pattern, MARKING_WIDTH);
        let ped = raster.class_mask(RasterClass::PedCrossing);
        assert!(ped.any());
        // a road strip separates the crossing from the outside: for every
        // crossing pixel, its row has road pixels further lateral
        let crossing_cols: Vec<usize> = ped.iter_set().map(|(_, c)| c).collect();
        let min_col = *crossing_cols.iter().min().unwrap();
        let some_row = ped.iter_set().find(|&(_, c)| c == min_col).unwrap().0;
        assert_eq!(raster.get(some_row, min_col - 1), RasterClass::Road);
    }
}

//! Cropping vector maps to a rectangular BEV range.

use alloc::vec::Vec;

use super::{BevSpec, ElementKind, MapElement, Point2, VectorMap};

const STITCH_EPS: f64 = 1e-9;

/// Liang-Barsky clip of segment `a`-`b` against the rectangle. Endpoints
/// that land on a clip plane are snapped exactly onto it.
fn clip_segment(a: Point2, b: Point2, spec: &BevSpec) -> Option<(Point2, Point2)> {
    let d = b - a;
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    // (p, q) per plane: inside when p*t <= q
    let planes = [
        (-d.x, a.x - spec.x_min),
        (d.x, spec.x_max - a.x),
        (-d.y, a.y - spec.y_min),
        (d.y, spec.y_max - a.y),
    ];
    for (p, q) in planes {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let r = q / p;
            if p < 0.0 {
                if r > t1 {
                    return None;
                }
                if r > t0 {
                    t0 = r;
                }
            } else {
                if r < t0 {
                    return None;
                }
                if r < t1 {
                    t1 = r;
                }
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    let mut pa = if t0 > 0.0 { a + d * t0 } else { a };
    let mut pb = if t1 < 1.0 { a + d * t1 } else { b };
    snap_to_bounds(&mut pa, spec);
    snap_to_bounds(&mut pb, spec);
    Some((pa, pb))
}

fn snap_to_bounds(p: &mut Point2, spec: &BevSpec) {
    p.x = p.x.clamp(spec.x_min, spec.x_max);
    p.y = p.y.clamp(spec.y_min, spec.y_max);
}

/// Clip an open polyline; exits split the line into separate fragments.
fn clip_polyline(points: &[Point2], spec: &BevSpec) -> Vec<Vec<Point2>> {
    let mut fragments: Vec<Vec<Point2>> = Vec::new();
    let mut current: Vec<Point2> = Vec::new();
    for w in points.windows(2) {
        match clip_segment(w[0], w[1], spec) {
            Some((a, b)) => {
                if a.dist(b) <= 0.0 {
                    continue;
                }
                let continues = current
                    .last()
                    .map(|last| last.dist(a) <= STITCH_EPS)
                    .unwrap_or(false);
                if continues {
                    current.push(b);
                } else {
                    if current.len() >= 2 {
                        fragments.push(core::mem::take(&mut current));
                    }
                    current.clear();
                    current.push(a);
                    current.push(b);
                }
            }
            None => {
                if current.len() >= 2 {
                    fragments.push(core::mem::take(&mut current));
                }
                current.clear();
            }
        }
    }
    if current.len() >= 2 {
        fragments.push(current);
    }
    fragments
}

/// Sutherland-Hodgman clip of a ring against the rectangle.
fn clip_ring(points: &[Point2], spec: &BevSpec) -> Vec<Point2> {
    // inside tests and intersections per axis-aligned plane
    type Inside = fn(Point2, f64) -> bool;
    type Cross = fn(Point2, Point2, f64) -> Point2;

    fn x_ge(p: Point2, v: f64) -> bool {
        p.x >= v
    }
    fn x_le(p: Point2, v: f64) -> bool {
        p.x <= v
    }
    fn y_ge(p: Point2, v: f64) -> bool {
        p.y >= v
    }
    fn y_le(p: Point2, v: f64) -> bool {
        p.y <= v
    }
    fn cross_x(a: Point2, b: Point2, v: f64) -> Point2 {
        let t = (v - a.x) / (b.x - a.x);
        Point2::new(v, a.y + (b.y - a.y) * t)
    }
    fn cross_y(a: Point2, b: Point2, v: f64) -> Point2 {
        let t = (v - a.y) / (b.y - a.y);
        Point2::new(a.x + (b.x - a.x) * t, v)
    }

    let planes: [(Inside, Cross, f64); 4] = [
        (x_ge, cross_x, spec.x_min),
        (x_le, cross_x, spec.x_max),
        (y_ge, cross_y, spec.y_min),
        (y_le, cross_y, spec.y_max),
    ];

    let mut ring: Vec<Point2> = points.to_vec();
    for (inside, cross, v) in planes {
        if ring.is_empty() {
            return ring;
        }
        let mut out: Vec<Point2> = Vec::with_capacity(ring.len() + 4);
        for i in 0..ring.len() {
            let a = ring[i];
            let b = ring[(i + 1) % ring.len()];
            let a_in = inside(a, v);
            let b_in = inside(b, v);
            match (a_in, b_in) {
                (true, true) => out.push(b),
                (true, false) => out.push(cross(a, b, v)),
                (false, true) => {
                    out.push(cross(a, b, v));
                    out.push(b);
                }
                (false, false) => {}
            }
        }
        ring = out;
    }
    let mut ring: Vec<Point2> = ring
        .into_iter()
        .map(|mut p| {
            snap_to_bounds(&mut p, spec);
            p
        })
        .collect();
    // drop consecutive duplicates including the wrap-around pair
    ring.dedup_by(|a, b| a.dist(*b) <= STITCH_EPS);
    while ring.len() > 1 && ring[0].dist(*ring.last().unwrap()) <= STITCH_EPS {
        ring.pop();
    }
    ring
}

/// Crop every element to the rectangle of `spec`. Polylines split where
/// they exit the range, polygons are clipped by rectangle intersection,
/// and fragments that no longer describe a shape are dropped.
pub fn crop_to_range(map: &VectorMap, spec: &BevSpec) -> VectorMap {
    let mut elements = Vec::new();
    for e in &map.elements {
        match e.kind {
            ElementKind::Polyline => {
                for frag in clip_polyline(&e.points, spec) {
                    if frag.len() >= 2 {
                        elements.push(MapElement {
                            class: e.class,
                            kind: ElementKind::Polyline,
                            points: frag,
                            confidence: e.confidence,
                        });
                    }
                }
            }
            ElementKind::Polygon => {
                let ring = clip_ring(&e.points, spec);
                if ring.len() >= 3 {
                    elements.push(MapElement {
                        class: e.class,
                        kind: ElementKind::Polygon,
                        points: ring,
                        confidence: e.confidence,
                    });
                }
            }
        }
    }
    VectorMap::new(map.frame.clone(), *spec, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MapClass;
    use alloc::string::String;
    use alloc::vec;

    fn spec10() -> BevSpec {
        BevSpec::new(0.0, 10.0, 0.0, 10.0, 1.0).unwrap()
    }

    fn map_of(elements: Vec<MapElement>) -> VectorMap {
        VectorMap::new(String::from("t"), spec10(), elements)
    }

    fn pts(raw: &[(f64, f64)]) -> Vec<Point2> {
        raw.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    #[test]
    fn fully_inside_unchanged() {
        let e = MapElement::polyline(MapClass::Divider, pts(&[(1.0, 1.0), (5.0, 5.0)]), None).unwrap();
        let out = crop_to_range(&map_of(vec![e.clone()]), &spec10());
        assert_eq!(out.elements, vec![e]);
    }

    #[test]
    fn single_exit_clipped_on_boundary() {
        let e =
            MapElement::polyline(MapClass::Boundary, pts(&[(5.0, 5.0), (15.0, 5.0)]), None).unwrap();
        let out = crop_to_range(&map_of(vec![e]), &spec10());
        assert_eq!(out.elements.len(), 1);
        let frag = &out.elements[0].points;
        assert_eq!(frag.len(), 2);
        assert_eq!(frag[0], Point2::new(5.0, 5.0));
        assert_eq!(frag[1], Point2::new(10.0, 5.0));
    }

    #[test]
    fn u_shape_splits_into_two_fragments() {
        // dips below y=0 and comes back
        let e = MapElement::polyline(
            MapClass::Boundary,
            pts(&[(2.0, 4.0), (2.0, -3.0), (6.0, -3.0), (6.0, 4.0)]),
            None,
        )
        .unwrap();
        let out = crop_to_range(&map_of(vec![e]), &spec10());
        assert_eq!(out.elements.len(), 2);
        for el in &out.elements {
            for p in &el.points {
                assert!(p.y >= -1e-9);
            }
        }
        // verify against a half-plane splitting oracle: clip the dense
        // samples by y >= 0 and count the runs
        let dense: Vec<Point2> = {
            let path = pts(&[(2.0, 4.0), (2.0, -3.0), (6.0, -3.0), (6.0, 4.0)]);
            let mut d = Vec::new();
            for w in path.windows(2) {
                for k in 0..100 {
                    d.push(w[0] + (w[1] - w[0]) * (k as f64 / 100.0));
                }
            }
            d.push(*path.last().unwrap());
            d
        };
        let mut runs = 0;
        let mut inside = false;
        for p in &dense {
            let now = p.y >= 0.0;
            if now && !inside {
                runs += 1;
            }
            inside = now;
        }
        assert_eq!(runs, 2);
    }

    #[test]
    fn polygon_clipped_to_rectangle() {
        let e = MapElement::polygon(
            MapClass::PedCrossing,
            pts(&[(8.0, 2.0), (14.0, 2.0), (14.0, 6.0), (8.0, 6.0)]),
            None,
        )
        .unwrap();
        let out = crop_to_range(&map_of(vec![e]), &spec10());
        assert_eq!(out.elements.len(), 1);
        let ring = &out.elements[0].points;
        assert_eq!(ring.len(), 4);
        for p in ring {
            assert!(p.x <= 10.0 + 1e-9);
        }
        // clipped area is 2 x 4
        let area = {
            let mut a = 0.0;
            for i in 0..ring.len() {
                let p = ring[i];
                let q = ring[(i + 1) % ring.len()];
                a += p.cross(q);
            }
            0.5 * a.abs()
        };
        assert!((area - 8.0).abs() < 1e-9);
    }

    #[test]
    fn polygon_fully_outside_dropped() {
        let e = MapElement::polygon(
            MapClass::PedCrossing,
            pts(&[(20.0, 20.0), (22.0, 20.0), (22.0, 22.0)]),
            None,
        )
        .unwrap();
        let out = crop_to_range(&map_of(vec![e]), &spec10());
        assert!(out.elements.is_empty());
    }

    #[test]
    fn output_within_bounds() {
        // zig-zag wandering far outside
        let e = MapElement::polyline(
            MapClass::Divider,
            pts(&[(-5.0, 5.0), (5.0, 15.0), (15.0, 5.0), (5.0, -5.0), (4.0, 3.0)]),
            None,
        )
        .unwrap();
        let out = crop_to_range(&map_of(vec![e]), &spec10());
        assert!(!out.elements.is_empty());
        for el in &out.elements {
            for p in &el.points {
                assert!(p.x >= -1e-9 && p.x <= 10.0 + 1e-9);
                assert!(p.y >= -1e-9 && p.y <= 10.0 + 1e-9);
            }
        }
    }
}

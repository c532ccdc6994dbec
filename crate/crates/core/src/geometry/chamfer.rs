//! Symmetric Chamfer distance between map elements.

use super::{resample_element, GeometryError, MapElement, Point2};

/// Euclidean distance from `p` to the segment `a`-`b`.
pub fn point_segment_distance(p: Point2, a: Point2, b: Point2) -> f64 {
    let ab = b - a;
    let len_sq = ab.dot(ab);
    if len_sq <= 0.0 {
        return p.dist(a);
    }
    let t = ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0);
    p.dist(a + ab * t)
}

fn directed_mean(from: &[Point2], to: &[Point2]) -> f64 {
    let mut sum = 0.0;
    for p in from {
        let mut best = f64::INFINITY;
        for q in to {
            let d = p.dist(*q);
            if d < best {
                best = d;
            }
        }
        sum += best;
    }
    sum / from.len() as f64
}

/// Symmetric mean of directed mean nearest-point distances over
/// `n_samples` arc-length-uniform samples of each element. Each element is
/// sampled according to its own kind, so polygons contribute their closing
/// edge.
pub fn chamfer_distance(
    a: &MapElement,
    b: &MapElement,
    n_samples: usize,
) -> Result<f64, GeometryError> {
    if n_samples < 2 {
        return Err(GeometryError::InvalidElement("chamfer needs n_samples >= 2"));
    }
    let sa = resample_element(a, n_samples)?;
    let sb = resample_element(b, n_samples)?;
    Ok(0.5 * (directed_mean(&sa, &sb) + directed_mean(&sb, &sa)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{equivalent_orderings, MapClass, MapElement};
    use alloc::vec::Vec;

    fn line(raw: &[(f64, f64)]) -> MapElement {
        let pts: Vec<Point2> = raw.iter().map(|&(x, y)| Point2::new(x, y)).collect();
        MapElement::polyline(MapClass::Divider, pts, None).unwrap()
    }

    #[test]
    fn identical_elements_distance_zero() {
        let a = line(&[(0.0, 0.0), (3.0, 4.0), (8.0, 4.0)]);
        assert_eq!(chamfer_distance(&a, &a, 100).unwrap(), 0.0);
    }

    #[test]
    fn parallel_offset_segments() {
        let a = line(&[(0.0, 0.0), (10.0, 0.0)]);
        let b = line(&[(0.0, 1.0), (10.0, 1.0)]);
        let d = chamfer_distance(&a, &b, 100).unwrap();
        assert!((d - 1.0).abs() < 1e-12);
    }

    #[test]
    fn matches_dense_sampling_oracle() {
        // oracle: sample both segments directly and brute-force all
        // 100 x 100 point pairs in each direction
        let n = 100usize;
        let sample = |p0: Point2, p1: Point2| -> Vec<Point2> {
            (0..n)
                .map(|k| p0 + (p1 - p0) * (k as f64 / (n - 1) as f64))
                .collect()
        };
        let sa = sample(Point2::new(0.0, 0.0), Point2::new(10.0, 0.0));
        let sb = sample(Point2::new(0.0, 1.0), Point2::new(10.0, 3.0));
        let directed = |xs: &[Point2], ys: &[Point2]| -> f64 {
            xs.iter()
                .map(|p| {
                    ys.iter()
                        .map(|q| p.dist(*q))
                        .fold(f64::INFINITY, f64::min)
                })
                .sum::<f64>()
                / xs.len() as f64
        };
        let expected = 0.5 * (directed(&sa, &sb) + directed(&sb, &sa));

        let a = line(&[(0.0, 0.0), (10.0, 0.0)]);
        let b = line(&[(0.0, 1.0), (10.0, 3.0)]);
        let got = chamfer_distance(&a, &b, n).unwrap();
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
    }

    #[test]
    fn symmetric_exactly() {
        let a = line(&[(0.0, 0.0), (4.0, 1.0), (9.0, -2.0)]);
        let b = line(&[(1.0, 2.0), (5.0, 2.5)]);
        assert_eq!(
            chamfer_distance(&a, &b, 64).unwrap(),
            chamfer_distance(&b, &a, 64).unwrap()
        );
    }

    #[test]
    fn invariant_under_orderings() {
        let a = line(&[(0.0, 0.0), (4.0, 1.0), (9.0, -2.0)]);
        let b = line(&[(1.0, 2.0), (5.0, 2.5), (7.0, 1.0)]);
        let base = chamfer_distance(&a, &b, 50).unwrap();
        for ordering in equivalent_orderings(&b) {
            let alt = MapElement::polyline(MapClass::Divider, ordering, None).unwrap();
            let d = chamfer_distance(&a, &alt, 50).unwrap();
            assert!((d - base).abs() < 1e-9);
        }
    }

    #[test]
    fn degenerate_propagates() {
        let a = line(&[(0.0, 0.0), (0.0, 0.0)]);
        let b = line(&[(0.0, 0.0), (1.0, 0.0)]);
        assert!(chamfer_distance(&a, &b, 10).is_err());
    }

    #[test]
    fn point_segment_distance_cases() {
        let a = Point2::new(0.0, 0.0);
        let b = Point2::new(10.0, 0.0);
        assert!((point_segment_distance(Point2::new(5.0, 3.0), a, b) - 3.0).abs() < 1e-12);
        assert!((point_segment_distance(Point2::new(-4.0, 3.0), a, b) - 5.0).abs() < 1e-12);
        assert!((point_segment_distance(Point2::new(13.0, 4.0), a, b) - 5.0).abs() < 1e-12);
        // zero-length segment
        assert!((point_segment_distance(Point2::new(1.0, 1.0), a, a) - 2f64.sqrt()).abs() < 1e-12);
    }
}

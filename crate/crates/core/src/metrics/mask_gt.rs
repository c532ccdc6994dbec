//! Restricting ground truth to the observed area for evaluation.

use alloc::vec::Vec;

use crate::assign::mask_element;
use crate::geometry::{MapElement, VectorMap};
use crate::raster::BevMask;

/// Apply the prediction-side splitting semantics to a ground-truth map:
/// each element is cut into its observed runs, fragments with fewer than
/// `min_run_points` original vertices are dropped, and fully observed
/// elements pass through unchanged (so an all-observed mask is an exact
/// identity).
pub fn mask_gt(gts: &VectorMap, mask: &BevMask, min_run_points: usize) -> VectorMap {
    let elements: Vec<MapElement> = gts
        .elements
        .iter()
        .flat_map(|e| mask_element(e, mask, min_run_points))
        .collect();
    VectorMap::new(gts.frame.clone(), gts.bev_range, elements)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BevSpec, MapClass, Point2};
    use alloc::string::String;
    use alloc::vec;

    fn spec() -> BevSpec {
        BevSpec::new(-10.0, 10.0, -10.0, 10.0, 2.0).unwrap()
    }

    fn boundary(n: usize) -> MapElement {
        let pts: Vec<Point2> = (0..n)
            .map(|k| Point2::new(0.0, -8.0 + 16.0 * k as f64 / (n - 1) as f64))
            .collect();
        MapElement::polyline(MapClass::Boundary, pts, None).unwrap()
    }

    #[test]
    fn all_observed_identity() {
        let gts = VectorMap::new(String::from("f"), spec(), vec![boundary(16)]);
        let masked = mask_gt(&gts, &BevMask::all_observed(spec()), 4);
        assert_eq!(masked, gts);
    }

    #[test]
    fn all_masked_empty() {
        let gts = VectorMap::new(String::from("f"), spec(), vec![boundary(16)]);
        let masked = mask_gt(&gts, &BevMask::all_unobserved(spec()), 4);
        assert!(masked.elements.is_empty());
    }

    #[test]
    fn half_masked_boundary_yields_half_fragment() {
        let gts = VectorMap::new(String::from("f"), spec(), vec![boundary(17)]);
        // observe only the lower half plane y < 0
        let mut mask = BevMask::all_unobserved(spec());
        for row in 0..mask.grid.height {
            for col in 0..mask.grid.width {
                if spec().pixel_center(row, col).y < 0.0 {
                    mask.grid.set(row, col, true);
                }
            }
        }
        let masked = mask_gt(&gts, &mask, 4);
        assert_eq!(masked.elements.len(), 1);
        let frag = &masked.elements[0];
        // roughly half the original length
        let len = frag.arc_length();
        assert!((6.0..=8.5).contains(&len), "fragment length {len}");
        for p in &frag.points {
            // vertices survive when their cell center is observed, so the
            // run may reach the cell straddling y = 0
            assert!(p.y < 0.5 / spec().resolution, "vertex at y {}", p.y);
        }
    }
}

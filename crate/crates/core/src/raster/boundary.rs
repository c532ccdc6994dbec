//! Road-boundary extraction and lane-fragment connection.

use super::components::NEIGHBORS_8;
use super::{close, dilate, open, BitGrid, RasterClass, SemanticRaster, StructuringElement};

/// Road pixels 8-adjacent to the (morphologically smoothed) outside class.
///
/// The outside mask is opened then closed with `smooth` before the
/// adjacency test, which straightens noisy frontiers. Pixels that touch
/// only unobserved cells never become boundary, so occlusion cannot
/// fabricate road edges.
pub fn extract_boundary(raster: &SemanticRaster, smooth: &StructuringElement) -> BitGrid {
    let outside = raster.class_mask(RasterClass::Outside);
    let smoothed = close(&open(&outside, smooth), smooth);
    let road = raster.class_mask(RasterClass::Road);
    let (w, h) = (road.width, road.height);
    let mut out = BitGrid::new(w, h);
    for row in 0..h {
        for col in 0..w {
            if !road.get(row, col) {
                continue;
            }
            let touches_outside = NEIGHBORS_8
                .iter()
                .any(|&(dr, dc)| smoothed.get_signed(row as i64 + dr, col as i64 + dc));
            out.set(row, col, touches_outside);
        }
    }
    out
}

/// Bridge nearby lane-marking fragments by dilation, constrained to the
/// road surface: grown pixels are kept only where `allowed` (the road
/// mask) is set, so markings never expand into outside or crossing areas.
pub fn connect_lane_fragments(
    marking: &BitGrid,
    element: &StructuringElement,
    allowed: &BitGrid,
) -> BitGrid {
    let grown = dilate(marking, element);
    let mut out = marking.clone();
    for row in 0..marking.height {
        for col in 0..marking.width {
            if grown.get(row, col) && allowed.get(row, col) {
                out.set(row, col, true);
            }
        }
    }
    out
}

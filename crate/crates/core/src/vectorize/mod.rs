//! Raster-to-vector conversion: the postprocessing pipeline that turns a
//! semantic BEV raster into vectorized pseudo-labels plus the observed
//! mask.

mod contour;
mod filter;
mod rdp;
mod trace;

pub use contour::trace_polygons;
pub use filter::{filter_dividers, DividerGate};
pub use rdp::{rdp, rdp_iterative, rdp_iterative_with_eps, rdp_ring_iterative};
pub use trace::{trace_lines, trace_lines_full};

use alloc::string::String;
use alloc::vec::Vec;

use crate::geometry::{crop_to_range, BevSpec, MapClass, MapElement, Point2, VectorMap};
use crate::raster::{
    connect_lane_fragments, extract_boundary, remove_artifacts, skeletonize, BevMask,
    RasterClass, SemanticRaster, StructuringElement,
};

/// Ordered pixel run over a grid; `closed` marks ring contours.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PixelPath {
    /// `(row, col)` pixels, consecutive entries 8-adjacent.
    pub pixels: Vec<(usize, usize)>,
    pub closed: bool,
}

/// Tunables of the vectorization pipeline. Defaults follow the standard
/// configuration: 20 px/m rasters, 15 px lane dilation kernel, 5 cm
/// simplification step.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorizeParams {
    /// Initial RDP tolerance in meters; grows in integer multiples until
    /// the point budget is met.
    pub rdp_eps: f64,
    /// Maximum points per element.
    pub max_points: usize,
    /// Dilation kernel connecting lane-marking fragments.
    pub lane_kernel: StructuringElement,
    /// Open/close kernel smoothing the outside class before boundary
    /// extraction.
    pub smooth_kernel: StructuringElement,
    /// Components smaller than this are reassigned to their surroundings.
    pub min_area: usize,
    /// Lane markings with a larger inscribed width (pixels) are removed.
    pub thick_max_px: usize,
    /// Skeleton branches shorter than this many pixels are dropped.
    pub min_branch_px: usize,
    /// Processing margin added around the raster, meters.
    pub margin_m: f64,
    pub divider_gate: DividerGate,
    /// Samples per divider for the gate test.
    pub gate_samples: usize,
}

impl Default for VectorizeParams {
    fn default() -> Self {
        Self {
            rdp_eps: 0.05,
            max_points: 20,
            lane_kernel: StructuringElement::square(15),
            smooth_kernel: StructuringElement::square(5),
            min_area: 50,
            thick_max_px: 12,
            min_branch_px: 4,
            margin_m: 2.0,
            divider_gate: DividerGate::default(),
            gate_samples: 100,
        }
    }
}

fn path_to_meters(path: &[(usize, usize)], spec: &BevSpec) -> Vec<Point2> {
    path.iter()
        .map(|&(row, col)| spec.pixel_center(row, col))
        .collect()
}

fn dedup_consecutive(points: &mut Vec<Point2>) {
    points.dedup_by(|a, b| a.dist(*b) <= 1e-12);
}

/// Full raster-to-vector pipeline.
///
/// The raster is padded by `margin_m` of unobserved cells so morphology
/// never clips at the border, cleaned, vectorized, and the results cropped
/// back to the input range. The returned mask marks the observed cells of
/// the cleaned raster inside the original range.
pub fn vectorize_bev(raster: &SemanticRaster, params: &VectorizeParams) -> (VectorMap, BevMask) {
    let spec = raster.spec;
    let padded_spec = spec.expanded(params.margin_m);
    let padded = raster.resampled_to(&padded_spec);

    let cleaned = remove_artifacts(&padded, params.min_area, params.thick_max_px);
    let mask = cleaned.resampled_to(&spec).observed_mask();

    // line-shaped classes
    let boundary_grid = extract_boundary(&cleaned, &params.smooth_kernel);
    let road = cleaned.class_mask(RasterClass::Road);
    let marking = cleaned.class_mask(RasterClass::LaneMarking);
    let divider_grid = connect_lane_fragments(&marking, &params.lane_kernel, &road);

    let mut boundaries: Vec<MapElement> = Vec::new();
    for path in trace_lines(&skeletonize(&boundary_grid), params.min_branch_px) {
        let mut pts = path_to_meters(&path.pixels, &padded_spec);
        dedup_consecutive(&mut pts);
        if pts.len() < 2 {
            continue;
        }
        let simplified = rdp_iterative(&pts, params.rdp_eps, params.max_points);
        if let Ok(e) = MapElement::polyline(MapClass::Boundary, simplified, None) {
            boundaries.push(e);
        }
    }

    let mut dividers: Vec<MapElement> = Vec::new();
    for path in trace_lines(&skeletonize(&divider_grid), params.min_branch_px) {
        let mut pts = path_to_meters(&path.pixels, &padded_spec);
        dedup_consecutive(&mut pts);
        if pts.len() < 2 {
            continue;
        }
        let simplified = rdp_iterative(&pts, params.rdp_eps, params.max_points);
        if let Ok(e) = MapElement::polyline(MapClass::Divider, simplified, None) {
            dividers.push(e);
        }
    }

    // polygon-shaped class
    let ped = cleaned.class_mask(RasterClass::PedCrossing);
    let mut crossings: Vec<MapElement> = Vec::new();
    for path in trace_polygons(&ped) {
        if path.pixels.len() < 3 {
            continue;
        }
        let mut ring = path_to_meters(&path.pixels, &padded_spec);
        dedup_consecutive(&mut ring);
        while ring.len() > 1 && ring[0].dist(*ring.last().unwrap()) <= 1e-12 {
            ring.pop();
        }
        if ring.len() < 3 {
            continue;
        }
        let simplified = rdp_ring_iterative(&ring, params.rdp_eps, params.max_points);
        if simplified.len() < 3 {
            continue;
        }
        if let Ok(e) = MapElement::polygon(MapClass::PedCrossing, simplified, None) {
            crossings.push(e);
        }
    }

    let mut others = boundaries.clone();
    others.extend(crossings.iter().cloned());
    let dividers = filter_dividers(dividers, &others, &params.divider_gate, params.gate_samples);

    let mut elements = boundaries;
    elements.extend(dividers);
    elements.extend(crossings);
    let map = VectorMap::new(String::new(), padded_spec, elements);
    (crop_to_range(&map, &spec), mask)
}

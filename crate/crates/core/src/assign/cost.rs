//! Assignment costs: class, point-wise, and rendering terms.

use alloc::vec::Vec;

use super::AssignError;
use crate::float;
use crate::geometry::{
    point_orderings, resample_element, BevSpec, ElementKind, MapClass, MapElement, Point2,
};
use crate::loss::{dice_value, soft_rasterize, SoftRaster};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostParams {
    pub w_cls: f64,
    pub w_pt: f64,
    pub w_rend: f64,
    /// Gaussian falloff of the cost rasterization, meters.
    pub sigma: f64,
    /// Polygon band width for rasterization; `None` means one pixel.
    pub line_width: Option<f64>,
    /// Finite sentinel marking infeasible pairs; variables at this cost
    /// are dropped before solving.
    pub large_cost: f64,
    /// Resolution of the cost rasters in px/m; coarser than display
    /// rasters since only relative overlap matters.
    pub cost_resolution: f64,
}

impl Default for CostParams {
    fn default() -> Self {
        Self {
            w_cls: 2.0,
            w_pt: 5.0,
            w_rend: 1.0,
            sigma: 0.3,
            line_width: None,
            large_cost: 1e9,
            cost_resolution: 1.0,
        }
    }
}

impl CostParams {
    /// Costs at or above this are treated as infeasible.
    pub fn infeasible_threshold(&self) -> f64 {
        self.large_cost * 0.5
    }

    pub fn band_width(&self, spec: &BevSpec) -> f64 {
        self.line_width.unwrap_or(1.0 / spec.resolution)
    }

    /// Derive the cost-raster grid covering `range` at `cost_resolution`,
    /// expanding the max bounds to whole pixels.
    pub fn raster_spec(&self, range: &BevSpec) -> BevSpec {
        let res = self.cost_resolution;
        let w = float::ceil((range.x_max - range.x_min) * res).max(1.0);
        let h = float::ceil((range.y_max - range.y_min) * res).max(1.0);
        BevSpec::new(
            range.x_min,
            range.x_min + w / res,
            range.y_min,
            range.y_min + h / res,
            res,
        )
        .expect("constructed grid is integral")
    }
}

/// A label prepared for repeated cost evaluation: cached raster and the
/// equivalent orderings of its resampled points.
#[derive(Debug, Clone)]
pub(crate) struct Prepared {
    pub class: MapClass,
    pub raster: SoftRaster,
    pub orderings: Vec<Vec<Point2>>,
}

pub(crate) fn prepare_label(
    g: &MapElement,
    params: &CostParams,
    spec: &BevSpec,
    resample_len: usize,
) -> Result<Prepared, AssignError> {
    let points = resample_element(g, resample_len)?;
    let raster = soft_rasterize(g, spec, params.sigma, params.band_width(spec)).raster;
    Ok(Prepared {
        class: g.class,
        raster,
        orderings: point_orderings(&points, g.kind),
    })
}

/// Rasterize a prediction-side point list (an element or a subsegment).
pub(crate) fn rasterize_points(
    points: &[Point2],
    kind: ElementKind,
    params: &CostParams,
    spec: &BevSpec,
) -> SoftRaster {
    let e = MapElement::fragment(MapClass::Divider, points.to_vec(), None);
    let e = MapElement { kind, ..e };
    soft_rasterize(&e, spec, params.sigma, params.band_width(spec)).raster
}

/// Core one-to-one cost between a prediction-side raster/point list and a
/// prepared label. Cross-class pairs cost the sentinel.
pub(crate) fn cost_points_to_label(
    class: MapClass,
    confidence: f64,
    points: &[Point2],
    raster: &SoftRaster,
    g: &Prepared,
    params: &CostParams,
) -> f64 {
    if class != g.class {
        return params.large_cost;
    }
    let mut pt_cost = f64::INFINITY;
    for ordering in &g.orderings {
        let sum: f64 = points
            .iter()
            .zip(ordering.iter())
            .map(|(a, b)| a.dist_l1(*b))
            .sum();
        let mean = sum / points.len() as f64;
        if mean < pt_cost {
            pt_cost = mean;
        }
    }
    let rend_cost = dice_value(raster, &g.raster);
    params.w_cls * (1.0 - confidence) + params.w_pt * pt_cost + params.w_rend * rend_cost
}

/// One-to-one assignment cost between two elements: class cost
/// `w_cls (1 - confidence)`, point cost `w_pt * min over orderings of the
/// mean L1 distance`, rendering cost `w_rend * dice`. The mask plays no
/// role here.
pub fn cost_o2o(
    q: &MapElement,
    g: &MapElement,
    params: &CostParams,
    range: &BevSpec,
    resample_len: usize,
) -> Result<f64, AssignError> {
    if q.class != g.class {
        return Ok(params.large_cost);
    }
    let spec = params.raster_spec(range);
    let q_points = resample_element(q, resample_len)?;
    let q_raster = rasterize_points(&q_points, q.kind, params, &spec);
    let prepared = prepare_label(g, params, &spec, resample_len)?;
    Ok(cost_points_to_label(
        q.class,
        q.confidence.unwrap_or(1.0),
        &q_points,
        &q_raster,
        &prepared,
        params,
    ))
}

//! Metric-frame vector primitives shared by every other module.
//!
//! Coordinate convention, used everywhere in this project: `x` is lateral
//! (right positive), `y` is longitudinal (forward positive), units are
//! meters in the ego frame. Raster row 0 corresponds to maximum `y`.

mod chamfer;
mod crop;
mod resample;

pub use chamfer::{chamfer_distance, point_segment_distance};
pub use crop::crop_to_range;
pub use resample::{resample_element, resample_polyline, resample_ring};

use crate::float;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Sub};

pub const PI: f64 = core::f64::consts::PI;
pub const TAU: f64 = 2.0 * PI;

#[derive(Debug, Clone, PartialEq)]
pub enum GeometryError {
    /// Zero total arc length where positive length is required.
    DegenerateGeometry,
    InvalidElement(&'static str),
    InvalidSpec(&'static str),
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::DegenerateGeometry => write!(f, "degenerate geometry"),
            GeometryError::InvalidElement(msg) => write!(f, "invalid element: {msg}"),
            GeometryError::InvalidSpec(msg) => write!(f, "invalid BEV spec: {msg}"),
        }
    }
}

impl core::error::Error for GeometryError {}

/// 2D point in meters, ego frame.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dot(self, rhs: Self) -> f64 {
        self.x * rhs.x + self.y * rhs.y
    }

    /// z-component of the 2D cross product.
    pub fn cross(self, rhs: Self) -> f64 {
        self.x * rhs.y - self.y * rhs.x
    }

    pub fn norm(self) -> f64 {
        float::hypot(self.x, self.y)
    }

    pub fn dist(self, rhs: Self) -> f64 {
        (self - rhs).norm()
    }

    pub fn dist_l1(self, rhs: Self) -> f64 {
        float::abs(self.x - rhs.x) + float::abs(self.y - rhs.y)
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Self) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Self) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<f64> for Point2 {
    type Output = Point2;
    fn mul(self, s: f64) -> Point2 {
        Point2::new(self.x * s, self.y * s)
    }
}

/// Wrap an angle to `(-pi, pi]`.
pub fn wrap_angle(a: f64) -> f64 {
    let mut a = a % TAU;
    if a > PI {
        a -= TAU;
    } else if a <= -PI {
        a += TAU;
    }
    a
}

/// 2D rigid pose. `heading` is the rotation of the ego frame relative to
/// the reference frame, in radians, wrapped to `(-pi, pi]`. At heading 0
/// the ego axes coincide with the reference axes; the vehicle's forward
/// direction is ego `+y`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Pose2 {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl Pose2 {
    pub fn new(x: f64, y: f64, heading: f64) -> Self {
        Self {
            x,
            y,
            heading: wrap_angle(heading),
        }
    }

    pub fn identity() -> Self {
        Self {
            x: 0.0,
            y: 0.0,
            heading: 0.0,
        }
    }

    pub fn translation(self) -> Point2 {
        Point2::new(self.x, self.y)
    }

    /// Map a point from this pose's local frame into the reference frame.
    pub fn transform_point(self, p: Point2) -> Point2 {
        let (s, c) = (float::sin(self.heading), float::cos(self.heading));
        Point2::new(c * p.x - s * p.y + self.x, s * p.x + c * p.y + self.y)
    }

    /// Map a reference-frame point into this pose's local frame.
    pub fn inverse_transform_point(self, p: Point2) -> Point2 {
        let (s, c) = (float::sin(self.heading), float::cos(self.heading));
        let dx = p.x - self.x;
        let dy = p.y - self.y;
        Point2::new(c * dx + s * dy, -s * dx + c * dy)
    }

    /// `self ∘ other`: apply `other` first, then `self`.
    pub fn compose(self, other: Pose2) -> Pose2 {
        let t = self.transform_point(other.translation());
        Pose2::new(t.x, t.y, self.heading + other.heading)
    }

    pub fn inverse(self) -> Pose2 {
        let (s, c) = (float::sin(self.heading), float::cos(self.heading));
        Pose2::new(
            -(c * self.x + s * self.y),
            -(-s * self.x + c * self.y),
            -self.heading,
        )
    }
}

/// The three map classes this pipeline produces and evaluates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum MapClass {
    PedCrossing,
    Divider,
    Boundary,
}

impl MapClass {
    pub const ALL: [MapClass; 3] = [MapClass::PedCrossing, MapClass::Divider, MapClass::Boundary];

    pub fn index(self) -> usize {
        match self {
            MapClass::PedCrossing => 0,
            MapClass::Divider => 1,
            MapClass::Boundary => 2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MapClass::PedCrossing => "ped_crossing",
            MapClass::Divider => "divider",
            MapClass::Boundary => "boundary",
        }
    }

    /// Crossings are closed shapes; dividers and boundaries are lines.
    pub fn expected_kind(self) -> ElementKind {
        match self {
            MapClass::PedCrossing => ElementKind::Polygon,
            _ => ElementKind::Polyline,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ElementKind {
    Polyline,
    Polygon,
}

/// A classed polyline or polygon in the metric ego frame.
///
/// Polygons are stored as open rings: the closing edge from the last point
/// back to the first is implicit and the first point is never repeated.
#[derive(Debug, Clone, PartialEq)]
pub struct MapElement {
    pub class: MapClass,
    pub kind: ElementKind,
    pub points: Vec<Point2>,
    /// Prediction confidence; pseudo-labels and ground truth carry `None`.
    pub confidence: Option<f64>,
}

impl MapElement {
    pub fn new(
        class: MapClass,
        kind: ElementKind,
        points: Vec<Point2>,
        confidence: Option<f64>,
    ) -> Result<Self, GeometryError> {
        if kind != class.expected_kind() {
            return Err(GeometryError::InvalidElement(
                "class and kind mismatch (ped_crossing is polygon, divider/boundary polyline)",
            ));
        }
        Self::validate_points(kind, &points)?;
        if let Some(c) = confidence {
            if !(0.0..=1.0).contains(&c) {
                return Err(GeometryError::InvalidElement("confidence outside [0, 1]"));
            }
        }
        Ok(Self {
            class,
            kind,
            points,
            confidence,
        })
    }

    pub fn polyline(
        class: MapClass,
        points: Vec<Point2>,
        confidence: Option<f64>,
    ) -> Result<Self, GeometryError> {
        Self::new(class, ElementKind::Polyline, points, confidence)
    }

    pub fn polygon(
        class: MapClass,
        points: Vec<Point2>,
        confidence: Option<f64>,
    ) -> Result<Self, GeometryError> {
        Self::new(class, ElementKind::Polygon, points, confidence)
    }

    /// Open-polyline fragment of a masked element. Bypasses the class/kind
    /// pairing so that an arc of a crossing can keep its class during
    /// observed-area-only evaluation; never produced by parsers.
    pub(crate) fn fragment(
        class: MapClass,
        points: Vec<Point2>,
        confidence: Option<f64>,
    ) -> MapElement {
        MapElement {
            class,
            kind: ElementKind::Polyline,
            points,
            confidence,
        }
    }

    fn validate_points(kind: ElementKind, points: &[Point2]) -> Result<(), GeometryError> {
        if points.len() < 2 {
            return Err(GeometryError::InvalidElement("fewer than 2 points"));
        }
        if points.iter().any(|p| !p.is_finite()) {
            return Err(GeometryError::InvalidElement("non-finite coordinate"));
        }
        if kind == ElementKind::Polygon {
            if points.len() < 3 {
                return Err(GeometryError::InvalidElement("polygon with fewer than 3 points"));
            }
            if points.first() == points.last() {
                return Err(GeometryError::InvalidElement(
                    "polygon ring must not repeat its first point",
                ));
            }
        }
        Ok(())
    }

    /// Edges in order; for polygons this includes the implicit closing edge.
    pub fn edges(&self) -> impl Iterator<Item = (Point2, Point2)> + '_ {
        let n = self.points.len();
        let count = match self.kind {
            ElementKind::Polyline => n.saturating_sub(1),
            ElementKind::Polygon => n,
        };
        (0..count).map(move |i| (self.points[i], self.points[(i + 1) % n]))
    }

    pub fn arc_length(&self) -> f64 {
        self.edges().map(|(a, b)| a.dist(b)).sum()
    }
}

/// All point sequences equivalent to `e` under its symmetry group:
/// 2 orderings for a polyline (forward, reversed), 2L for a polygon
/// (L cyclic shifts in each orientation).
pub fn equivalent_orderings(e: &MapElement) -> Vec<Vec<Point2>> {
    point_orderings(&e.points, e.kind)
}

/// Same as [`equivalent_orderings`] but over a raw point list.
pub fn point_orderings(points: &[Point2], kind: ElementKind) -> Vec<Vec<Point2>> {
    let n = points.len();
    match kind {
        ElementKind::Polyline => {
            let forward = points.to_vec();
            let mut reversed = forward.clone();
            reversed.reverse();
            alloc::vec![forward, reversed]
        }
        ElementKind::Polygon => {
            let mut out = Vec::with_capacity(2 * n);
            let mut reversed = points.to_vec();
            reversed.reverse();
            for ring in [points, reversed.as_slice()] {
                for shift in 0..n {
                    let mut seq = Vec::with_capacity(n);
                    for k in 0..n {
                        seq.push(ring[(shift + k) % n]);
                    }
                    out.push(seq);
                }
            }
            out
        }
    }
}

/// BEV range and raster resolution. The pixel grid has row 0 at `y_max`;
/// pixel `(row, col)` covers a `1/resolution` square and is addressed by
/// its center.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BevSpec {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    /// Pixels per meter.
    pub resolution: f64,
}

impl BevSpec {
    const GRID_TOL: f64 = 1e-6;

    pub fn new(
        x_min: f64,
        x_max: f64,
        y_min: f64,
        y_max: f64,
        resolution: f64,
    ) -> Result<Self, GeometryError> {
        if !(x_min.is_finite() && x_max.is_finite() && y_min.is_finite() && y_max.is_finite()) {
            return Err(GeometryError::InvalidSpec("non-finite bound"));
        }
        if x_max <= x_min || y_max <= y_min {
            return Err(GeometryError::InvalidSpec("empty range"));
        }
        if !(resolution.is_finite() && resolution > 0.0) {
            return Err(GeometryError::InvalidSpec("resolution must be positive"));
        }
        let spec = Self {
            x_min,
            x_max,
            y_min,
            y_max,
            resolution,
        };
        let w = (x_max - x_min) * resolution;
        let h = (y_max - y_min) * resolution;
        if float::abs(w - float::round(w)) > Self::GRID_TOL
            || float::abs(h - float::round(h)) > Self::GRID_TOL
        {
            return Err(GeometryError::InvalidSpec("range times resolution must be integral"));
        }
        if float::round(w) < 1.0 || float::round(h) < 1.0 {
            return Err(GeometryError::InvalidSpec("grid dimensions must be at least 1"));
        }
        Ok(spec)
    }

    pub fn width_px(&self) -> usize {
        float::round((self.x_max - self.x_min) * self.resolution) as usize
    }

    pub fn height_px(&self) -> usize {
        float::round((self.y_max - self.y_min) * self.resolution) as usize
    }

    /// Meter coordinates of a pixel center.
    pub fn pixel_center(&self, row: usize, col: usize) -> Point2 {
        let step = 1.0 / self.resolution;
        Point2::new(
            self.x_min + (col as f64 + 0.5) * step,
            self.y_max - (row as f64 + 0.5) * step,
        )
    }

    /// Cell containing `p`, if inside the range. Points exactly on the
    /// `x_max`/`y_min` edges fall into the last row/column.
    pub fn cell_of(&self, p: Point2) -> Option<(usize, usize)> {
        if !self.contains(p) {
            return None;
        }
        let col = ((p.x - self.x_min) * self.resolution) as usize;
        let row = ((self.y_max - p.y) * self.resolution) as usize;
        Some((row.min(self.height_px() - 1), col.min(self.width_px() - 1)))
    }

    pub fn contains(&self, p: Point2) -> bool {
        p.x >= self.x_min && p.x <= self.x_max && p.y >= self.y_min && p.y <= self.y_max
    }

    /// Spec grown by at least `margin` meters on every side, rounded up to
    /// whole pixels so the grid stays aligned with the original.
    pub fn expanded(&self, margin: f64) -> BevSpec {
        let margin_px = float::ceil(margin * self.resolution).max(0.0);
        let m = margin_px / self.resolution;
        BevSpec {
            x_min: self.x_min - m,
            x_max: self.x_max + m,
            y_min: self.y_min - m,
            y_max: self.y_max + m,
            resolution: self.resolution,
        }
    }
}

/// A set of map elements in one ego frame: both pseudo-labels and
/// predictions are carried in this form.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorMap {
    pub frame: String,
    pub bev_range: BevSpec,
    pub elements: Vec<MapElement>,
}

impl VectorMap {
    pub fn new(frame: String, bev_range: BevSpec, elements: Vec<MapElement>) -> Self {
        Self {
            frame,
            bev_range,
            elements,
        }
    }

    pub fn class_indices(&self, class: MapClass) -> Vec<usize> {
        self.elements
            .iter()
            .enumerate()
            .filter(|(_, e)| e.class == class)
            .map(|(i, _)| i)
            .collect()
    }
}

//! On-disk JSON schema for vector maps.
//!
//! ```json
//! {
//!   "frame": "scene-1",
//!   "bev_range": {"x_min": -15.0, "x_max": 15.0, "y_min": -30.0,
//!                 "y_max": 30.0, "resolution": 20.0},
//!   "elements": [
//!     {"class": "divider", "kind": "polyline", "confidence": null,
//!      "points": [[0.0, -10.0], [0.0, 10.0]]}
//!   ]
//! }
//! ```
//!
//! Units are meters in the ego frame (x lateral right, y forward).
//! Unknown fields are rejected.

use std::path::Path;

use pseudomap_core::geometry::{BevSpec, ElementKind, MapClass, MapElement, Point2, VectorMap};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io_util::{atomic_write, parse_json, read_string, to_json_bytes};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct BevSpecDto {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub resolution: f64,
}

impl BevSpecDto {
    pub fn to_core(&self) -> CliResult<BevSpec> {
        BevSpec::new(self.x_min, self.x_max, self.y_min, self.y_max, self.resolution)
            .map_err(|e| CliError::validation(e.to_string()))
    }

    pub fn from_core(spec: &BevSpec) -> Self {
        Self {
            x_min: spec.x_min,
            x_max: spec.x_max,
            y_min: spec.y_min,
            y_max: spec.y_max,
            resolution: spec.resolution,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum ClassDto {
    PedCrossing,
    Divider,
    Boundary,
}

impl ClassDto {
    fn to_core(self) -> MapClass {
        match self {
            ClassDto::PedCrossing => MapClass::PedCrossing,
            ClassDto::Divider => MapClass::Divider,
            ClassDto::Boundary => MapClass::Boundary,
        }
    }

    fn from_core(c: MapClass) -> Self {
        match c {
            MapClass::PedCrossing => ClassDto::PedCrossing,
            MapClass::Divider => ClassDto::Divider,
            MapClass::Boundary => ClassDto::Boundary,
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
#[serde(rename_all = "snake_case")]
pub enum KindDto {
    Polyline,
    Polygon,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ElementDto {
    pub class: ClassDto,
    pub kind: KindDto,
    pub confidence: Option<f64>,
    pub points: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct VectorMapDto {
    pub frame: String,
    pub bev_range: BevSpecDto,
    pub elements: Vec<ElementDto>,
}

impl VectorMapDto {
    pub fn to_core(&self) -> CliResult<VectorMap> {
        let spec = self.bev_range.to_core()?;
        let mut elements = Vec::with_capacity(self.elements.len());
        for (idx, e) in self.elements.iter().enumerate() {
            let points: Vec<Point2> = e.points.iter().map(|&[x, y]| Point2::new(x, y)).collect();
            if points.iter().any(|p| !p.is_finite()) {
                return Err(CliError::validation(format!(
                    "element {idx}: non-finite coordinate"
                )));
            }
            let kind = match e.kind {
                KindDto::Polyline => ElementKind::Polyline,
                KindDto::Polygon => ElementKind::Polygon,
            };
            let element = MapElement::new(e.class.to_core(), kind, points, e.confidence)
                .map_err(|err| CliError::validation(format!("element {idx}: {err}")))?;
            elements.push(element);
        }
        Ok(VectorMap::new(self.frame.clone(), spec, elements))
    }

    pub fn from_core(map: &VectorMap) -> Self {
        Self {
            frame: map.frame.clone(),
            bev_range: BevSpecDto::from_core(&map.bev_range),
            elements: map
                .elements
                .iter()
                .map(|e| ElementDto {
                    class: ClassDto::from_core(e.class),
                    kind: match e.kind {
                        ElementKind::Polyline => KindDto::Polyline,
                        ElementKind::Polygon => KindDto::Polygon,
                    },
                    confidence: e.confidence,
                    points: e.points.iter().map(|p| [p.x, p.y]).collect(),
                })
                .collect(),
        }
    }
}

pub fn read_vector_map(path: &Path) -> CliResult<VectorMap> {
    let text = read_string(path)?;
    let dto: VectorMapDto = parse_json(path, &text)?;
    dto.to_core()
        .map_err(|e| match e {
            CliError::Validation(msg) => CliError::Parse {
                path: path.display().to_string(),
                message: msg,
            },
            other => other,
        })
}

pub fn write_vector_map(path: &Path, map: &VectorMap) -> CliResult<()> {
    atomic_write(path, &to_json_bytes(&VectorMapDto::from_core(map)))
}

//! Raster-domain types and cleanup of semantic BEV renderings: artifact
//! removal, morphology, boundary extraction, lane-fragment connection, and
//! skeletonization.

mod artifacts;
mod boundary;
mod components;
mod morphology;
mod skeleton;

pub use artifacts::remove_artifacts;
pub use boundary::{connect_lane_fragments, extract_boundary};
pub use components::{class_components, connected_components, Labeling};
pub use morphology::{close, dilate, erode, morphology, open, MorphMode};
pub use skeleton::skeletonize;

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{BevSpec, GeometryError, Point2};

#[derive(Debug, Clone, PartialEq)]
pub enum RasterError {
    SpecMismatch,
    DimensionMismatch,
    Geometry(GeometryError),
}

impl fmt::Display for RasterError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RasterError::SpecMismatch => write!(f, "rasters have different BEV specs"),
            RasterError::DimensionMismatch => write!(f, "grid dimensions do not match"),
            RasterError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for RasterError {}

impl From<GeometryError> for RasterError {
    fn from(e: GeometryError) -> Self {
        RasterError::Geometry(e)
    }
}

/// Per-pixel semantic class of the BEV raster. The numeric IDs are the
/// on-disk PGM byte values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[repr(u8)]
pub enum RasterClass {
    Unobserved = 0,
    Road = 1,
    /// Everything beyond the drivable surface: curbs, terrain, driveways.
    Outside = 2,
    LaneMarking = 3,
    PedCrossing = 4,
}

impl RasterClass {
    pub const ALL: [RasterClass; 5] = [
        RasterClass::Unobserved,
        RasterClass::Road,
        RasterClass::Outside,
        RasterClass::LaneMarking,
        RasterClass::PedCrossing,
    ];

    /// Classes a surfel can carry; unobserved only arises from low alpha.
    pub const OBSERVABLE: [RasterClass; 4] = [
        RasterClass::Road,
        RasterClass::Outside,
        RasterClass::LaneMarking,
        RasterClass::PedCrossing,
    ];

    pub fn id(self) -> u8 {
        self as u8
    }

    pub fn from_id(id: u8) -> Option<Self> {
        Self::ALL.get(id as usize).copied()
    }

    pub fn as_str(self) -> &'static str {
        match self {
            RasterClass::Unobserved => "unobserved",
            RasterClass::Road => "road",
            RasterClass::Outside => "outside",
            RasterClass::LaneMarking => "lane_marking",
            RasterClass::PedCrossing => "ped_crossing",
        }
    }
}

/// Plain binary grid, row-major, row 0 on top.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BitGrid {
    pub width: usize,
    pub height: usize,
    bits: Vec<bool>,
}

impl BitGrid {
    pub fn new(width: usize, height: usize) -> Self {
        Self {
            width,
            height,
            bits: vec![false; width * height],
        }
    }

    pub fn from_bits(width: usize, height: usize, bits: Vec<bool>) -> Self {
        assert_eq!(bits.len(), width * height);
        Self { width, height, bits }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.bits[row * self.width + col]
    }

    /// `false` outside the grid, so borders behave as background.
    #[inline]
    pub fn get_signed(&self, row: i64, col: i64) -> bool {
        if row < 0 || col < 0 || row >= self.height as i64 || col >= self.width as i64 {
            return false;
        }
        self.bits[row as usize * self.width + col as usize]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        self.bits[row * self.width + col] = value;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn fill(&mut self, value: bool) {
        self.bits.iter_mut().for_each(|b| *b = value);
    }

    pub fn count_ones(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }

    pub fn any(&self) -> bool {
        self.bits.iter().any(|&b| b)
    }

    pub fn iter_set(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let w = self.width;
        self.bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(move |(i, _)| (i / w, i % w))
    }

    pub fn union_with(&mut self, other: &BitGrid) {
        assert_eq!(self.bits.len(), other.bits.len());
        for (a, b) in self.bits.iter_mut().zip(&other.bits) {
            *a |= *b;
        }
    }

    /// Set inclusion: every set bit of `self` is set in `other`.
    pub fn subset_of(&self, other: &BitGrid) -> bool {
        self.bits.iter().zip(&other.bits).all(|(&a, &b)| !a || b)
    }
}

/// Kernel for the morphology operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementShape {
    Square,
    Disk,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuringElement {
    pub shape: ElementShape,
    /// Side (square) or diameter (disk) in pixels; odd so the kernel has a
    /// center pixel.
    pub size: usize,
}

impl StructuringElement {
    pub fn square(size: usize) -> Self {
        assert!(size >= 1 && size % 2 == 1, "kernel size must be odd");
        Self {
            shape: ElementShape::Square,
            size,
        }
    }

    pub fn disk(size: usize) -> Self {
        assert!(size >= 1 && size % 2 == 1, "kernel size must be odd");
        Self {
            shape: ElementShape::Disk,
            size,
        }
    }

    pub fn radius(&self) -> i64 {
        (self.size / 2) as i64
    }

    /// Offsets covered by the kernel, centered at the origin.
    pub fn offsets(&self) -> Vec<(i64, i64)> {
        let r = self.radius();
        let mut out = Vec::new();
        for dr in -r..=r {
            for dc in -r..=r {
                let keep = match self.shape {
                    ElementShape::Square => true,
                    ElementShape::Disk => dr * dr + dc * dc <= r * r,
                };
                if keep {
                    out.push((dr, dc));
                }
            }
        }
        out
    }
}

/// Class-ID grid over a BEV range.
#[derive(Debug, Clone, PartialEq)]
pub struct SemanticRaster {
    pub spec: BevSpec,
    pub width: usize,
    pub height: usize,
    classes: Vec<RasterClass>,
}

impl SemanticRaster {
    pub fn filled(spec: BevSpec, class: RasterClass) -> Self {
        let width = spec.width_px();
        let height = spec.height_px();
        Self {
            spec,
            width,
            height,
            classes: vec![class; width * height],
        }
    }

    pub fn from_classes(spec: BevSpec, classes: Vec<RasterClass>) -> Self {
        let width = spec.width_px();
        let height = spec.height_px();
        assert_eq!(classes.len(), width * height);
        Self {
            spec,
            width,
            height,
            classes,
        }
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> RasterClass {
        self.classes[row * self.width + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, class: RasterClass) {
        self.classes[row * self.width + col] = class;
    }

    pub fn classes(&self) -> &[RasterClass] {
        &self.classes
    }

    /// Binary mask of one class.
    pub fn class_mask(&self, class: RasterClass) -> BitGrid {
        BitGrid::from_bits(
            self.width,
            self.height,
            self.classes.iter().map(|&c| c == class).collect(),
        )
    }

    /// Observed/unobserved mask: every pixel that carries a class.
    pub fn observed_mask(&self) -> BevMask {
        BevMask {
            spec: self.spec,
            grid: BitGrid::from_bits(
                self.width,
                self.height,
                self.classes
                    .iter()
                    .map(|&c| c != RasterClass::Unobserved)
                    .collect(),
            ),
        }
    }

    /// Copy into a larger/smaller aligned spec; uncovered pixels become
    /// `Unobserved`. Both specs must share resolution and pixel alignment.
    pub fn resampled_to(&self, spec: &BevSpec) -> SemanticRaster {
        let mut out = SemanticRaster::filled(*spec, RasterClass::Unobserved);
        // offset of the new grid's origin relative to ours, in pixels
        let dc = libm::round((spec.x_min - self.spec.x_min) * self.spec.resolution) as i64;
        let dr = libm::round((self.spec.y_max - spec.y_max) * self.spec.resolution) as i64;
        for row in 0..out.height {
            let src_r = row as i64 + dr;
            if src_r < 0 || src_r >= self.height as i64 {
                continue;
            }
            for col in 0..out.width {
                let src_c = col as i64 + dc;
                if src_c < 0 || src_c >= self.width as i64 {
                    continue;
                }
                out.set(row, col, self.get(src_r as usize, src_c as usize));
            }
        }
        out
    }
}

/// Per-pixel observed flag over a BEV range.
#[derive(Debug, Clone, PartialEq)]
pub struct BevMask {
    pub spec: BevSpec,
    pub grid: BitGrid,
}

impl BevMask {
    pub fn all_observed(spec: BevSpec) -> Self {
        let mut grid = BitGrid::new(spec.width_px(), spec.height_px());
        grid.fill(true);
        Self { spec, grid }
    }

    pub fn all_unobserved(spec: BevSpec) -> Self {
        Self {
            spec,
            grid: BitGrid::new(spec.width_px(), spec.height_px()),
        }
    }

    pub fn from_grid(spec: BevSpec, grid: BitGrid) -> Self {
        assert_eq!(grid.width, spec.width_px());
        assert_eq!(grid.height, spec.height_px());
        Self { spec, grid }
    }

    /// Whether the cell containing `p` is observed; points outside the
    /// range are unobserved.
    pub fn observed_at(&self, p: Point2) -> bool {
        match self.spec.cell_of(p) {
            Some((row, col)) => self.grid.get(row, col),
            None => false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec4() -> BevSpec {
        BevSpec::new(0.0, 4.0, 0.0, 4.0, 1.0).unwrap()
    }

    #[test]
    fn class_ids_roundtrip() {
        for c in RasterClass::ALL {
            assert_eq!(RasterClass::from_id(c.id()), Some(c));
        }
        assert_eq!(RasterClass::from_id(5), None);
    }

    #[test]
    fn mask_lookup_follows_grid_convention() {
        let mut m = BevMask::all_unobserved(spec4());
        // top-left pixel covers x in [0,1), y in (3,4]
        m.grid.set(0, 0, true);
        assert!(m.observed_at(Point2::new(0.5, 3.5)));
        assert!(!m.observed_at(Point2::new(1.5, 3.5)));
        assert!(!m.observed_at(Point2::new(0.5, 0.5)));
        assert!(!m.observed_at(Point2::new(-1.0, 3.5)));
    }

    #[test]
    fn structuring_element_offsets() {
        assert_eq!(StructuringElement::square(3).offsets().len(), 9);
        // 3x3 disk keeps the plus shape
        assert_eq!(StructuringElement::disk(3).offsets().len(), 5);
        assert_eq!(StructuringElement::square(1).offsets().len(), 1);
    }

    #[test]
    fn raster_resample_round_trip() {
        let spec = spec4();
        let mut r = SemanticRaster::filled(spec, RasterClass::Outside);
        r.set(1, 2, RasterClass::Road);
        let grown_spec = spec.expanded(2.0);
        let grown = r.resampled_to(&grown_spec);
        assert_eq!(grown.get(0, 0), RasterClass::Unobserved);
        assert_eq!(grown.get(3, 4), RasterClass::Road);
        let back = grown.resampled_to(&spec);
        assert_eq!(back, r);
    }
}

//! 8-connected component labeling.

use alloc::vec;
use alloc::vec::Vec;

use super::{BitGrid, RasterClass, SemanticRaster};

pub(crate) const NEIGHBORS_8: [(i64, i64); 8] = [
    (-1, -1),
    (-1, 0),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 0),
    (1, 1),
];

/// Result of component labeling. Label 0 is background; components are
/// numbered 1..=count in raster-scan discovery order.
#[derive(Debug, Clone)]
pub struct Labeling {
    pub width: usize,
    pub height: usize,
    pub labels: Vec<u32>,
    /// Pixel count per component, indexed by label - 1.
    pub sizes: Vec<usize>,
}

impl Labeling {
    pub fn count(&self) -> usize {
        self.sizes.len()
    }

    #[inline]
    pub fn label(&self, row: usize, col: usize) -> u32 {
        self.labels[row * self.width + col]
    }

    /// Pixels of one component in raster-scan order.
    pub fn pixels_of(&self, label: u32) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for row in 0..self.height {
            for col in 0..self.width {
                if self.label(row, col) == label {
                    out.push((row, col));
                }
            }
        }
        out
    }
}

/// Label the 8-connected components of the set pixels, deterministically in
/// raster-scan order, using an explicit-stack flood fill.
pub fn connected_components(grid: &BitGrid) -> Labeling {
    let (w, h) = (grid.width, grid.height);
    let mut labels = vec![0u32; w * h];
    let mut sizes = Vec::new();
    let mut stack: Vec<(usize, usize)> = Vec::new();
    let mut next = 1u32;
    for row in 0..h {
        for col in 0..w {
            if !grid.get(row, col) || labels[row * w + col] != 0 {
                continue;
            }
            let mut size = 0usize;
            labels[row * w + col] = next;
            stack.push((row, col));
            while let Some((r, c)) = stack.pop() {
                size += 1;
                for (dr, dc) in NEIGHBORS_8 {
                    let (nr, nc) = (r as i64 + dr, c as i64 + dc);
                    if nr < 0 || nc < 0 || nr >= h as i64 || nc >= w as i64 {
                        continue;
                    }
                    let (nr, nc) = (nr as usize, nc as usize);
                    if grid.get(nr, nc) && labels[nr * w + nc] == 0 {
                        labels[nr * w + nc] = next;
                        stack.push((nr, nc));
                    }
                }
            }
            sizes.push(size);
            next += 1;
        }
    }
    Labeling {
        width: w,
        height: h,
        labels,
        sizes,
    }
}

/// Components of one semantic class.
pub fn class_components(raster: &SemanticRaster, class: RasterClass) -> Labeling {
    connected_components(&raster.class_mask(class))
}

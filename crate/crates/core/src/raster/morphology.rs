//! Binary Minkowski morphology with background padding at the border.

use super::{BitGrid, ElementShape, StructuringElement};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MorphMode {
    Dilate,
    Erode,
    Open,
    Close,
}

/// 1D max filter along rows then columns; a square kernel is separable so
/// large kernels stay cheap on full-scene rasters.
fn dilate_square(grid: &BitGrid, radius: i64) -> BitGrid {
    let (w, h) = (grid.width, grid.height);
    let mut tmp = BitGrid::new(w, h);
    for row in 0..h {
        for col in 0..w {
            let lo = (col as i64 - radius).max(0) as usize;
            let hi = ((col as i64 + radius) as usize).min(w - 1);
            let mut any = false;
            for c in lo..=hi {
                if grid.get(row, c) {
                    any = true;
                    break;
                }
            }
            tmp.set(row, col, any);
        }
    }
    let mut out = BitGrid::new(w, h);
    for col in 0..w {
        for row in 0..h {
            let lo = (row as i64 - radius).max(0) as usize;
            let hi = ((row as i64 + radius) as usize).min(h - 1);
            let mut any = false;
            for r in lo..=hi {
                if tmp.get(r, col) {
                    any = true;
                    break;
                }
            }
            out.set(row, col, any);
        }
    }
    out
}

/// Separable 1D min filter; windows reaching past the border see
/// background and erode.
fn erode_square(grid: &BitGrid, radius: i64) -> BitGrid {
    let (w, h) = (grid.width, grid.height);
    let mut tmp = BitGrid::new(w, h);
    for row in 0..h {
        for col in 0..w {
            let lo = col as i64 - radius;
            let hi = col as i64 + radius;
            let mut all = lo >= 0 && hi < w as i64;
            if all {
                for c in lo as usize..=hi as usize {
                    if !grid.get(row, c) {
                        all = false;
                        break;
                    }
                }
            }
            tmp.set(row, col, all);
        }
    }
    let mut out = BitGrid::new(w, h);
    for col in 0..w {
        for row in 0..h {
            let lo = row as i64 - radius;
            let hi = row as i64 + radius;
            let mut all = lo >= 0 && hi < h as i64;
            if all {
                for r in lo as usize..=hi as usize {
                    if !tmp.get(r, col) {
                        all = false;
                        break;
                    }
                }
            }
            out.set(row, col, all);
        }
    }
    out
}

pub fn dilate(grid: &BitGrid, element: &StructuringElement) -> BitGrid {
    if element.shape == ElementShape::Square {
        return dilate_square(grid, element.radius());
    }
    let (w, h) = (grid.width, grid.height);
    let offsets = element.offsets();
    let mut out = BitGrid::new(w, h);
    for row in 0..h {
        for col in 0..w {
            let mut any = false;
            for &(dr, dc) in &offsets {
                if grid.get_signed(row as i64 + dr, col as i64 + dc) {
                    any = true;
                    break;
                }
            }
            out.set(row, col, any);
        }
    }
    out
}

/// Erosion with the border padded as background: foreground that reaches
/// the edge erodes away like any other boundary.
pub fn erode(grid: &BitGrid, element: &StructuringElement) -> BitGrid {
    if element.shape == ElementShape::Square {
        return erode_square(grid, element.radius());
    }
    let (w, h) = (grid.width, grid.height);
    let offsets = element.offsets();
    let mut out = BitGrid::new(w, h);
    for row in 0..h {
        for col in 0..w {
            let mut all = true;
            for &(dr, dc) in &offsets {
                if !grid.get_signed(row as i64 + dr, col as i64 + dc) {
                    all = false;
                    break;
                }
            }
            out.set(row, col, all);
        }
    }
    out
}

pub fn open(grid: &BitGrid, element: &StructuringElement) -> BitGrid {
    dilate(&erode(grid, element), element)
}

pub fn close(grid: &BitGrid, element: &StructuringElement) -> BitGrid {
    erode(&dilate(grid, element), element)
}

pub fn morphology(grid: &BitGrid, element: &StructuringElement, mode: MorphMode) -> BitGrid {
    match mode {
        MorphMode::Dilate => dilate(grid, element),
        MorphMode::Erode => erode(grid, element),
        MorphMode::Open => open(grid, element),
        MorphMode::Close => close(grid, element),
    }
}

//! Small-segment reassignment and removal of implausibly thick markings.

use alloc::vec;
use alloc::vec::Vec;

use super::components::{connected_components, NEIGHBORS_8};
use super::{RasterClass, SemanticRaster};

/// Chessboard distance to the nearest pixel outside the mask, two-pass.
/// Background pixels are 0, foreground boundary pixels are 1.
fn chessboard_distance(mask: &[bool], width: usize, height: usize) -> Vec<u32> {
    let big = u32::MAX / 2;
    let mut dist = vec![0u32; width * height];
    for i in 0..mask.len() {
        dist[i] = if mask[i] { big } else { 0 };
    }
    let at = |d: &Vec<u32>, r: i64, c: i64| -> u32 {
        if r < 0 || c < 0 || r >= height as i64 || c >= width as i64 {
            0 // outside the grid counts as background
        } else {
            d[r as usize * width + c as usize]
        }
    };
    // forward pass
    for r in 0..height as i64 {
        for c in 0..width as i64 {
            let i = r as usize * width + c as usize;
            if dist[i] == 0 {
                continue;
            }
            let m = at(&dist, r - 1, c - 1)
                .min(at(&dist, r - 1, c))
                .min(at(&dist, r - 1, c + 1))
                .min(at(&dist, r, c - 1));
            dist[i] = dist[i].min(m + 1);
        }
    }
    // backward pass
    for r in (0..height as i64).rev() {
        for c in (0..width as i64).rev() {
            let i = r as usize * width + c as usize;
            if dist[i] == 0 {
                continue;
            }
            let m = at(&dist, r + 1, c + 1)
                .min(at(&dist, r + 1, c))
                .min(at(&dist, r + 1, c - 1))
                .min(at(&dist, r, c + 1));
            dist[i] = dist[i].min(m + 1);
        }
    }
    dist
}

/// Reassign small misclassified segments and drop implausibly thick lane
/// markings.
///
/// Components (of any class) with fewer than `min_area` pixels are
/// reassigned: enclosed by a single class they take that class; touching
/// several classes they take the majority adjacent class, with ties
/// falling back to `Unobserved`. All decisions are taken against a
/// snapshot of the input so the pass is order-independent. Afterwards,
/// lane-marking components whose maximum inscribed width exceeds
/// `thick_max_px` are reassigned to road.
pub fn remove_artifacts(
    raster: &SemanticRaster,
    min_area: usize,
    thick_max_px: usize,
) -> SemanticRaster {
    let (w, h) = (raster.width, raster.height);
    let mut out = raster.clone();

    for class in RasterClass::ALL {
        let labeling = connected_components(&raster.class_mask(class));
        if labeling.count() == 0 {
            continue;
        }
        // adjacency counts per small component: neighbor pixels per class
        let mut adjacency: Vec<[usize; 5]> = vec![[0; 5]; labeling.count()];
        let mut small: Vec<bool> = labeling.sizes.iter().map(|&s| s < min_area).collect();
        if !small.iter().any(|&s| s) {
            continue;
        }
        for row in 0..h {
            for col in 0..w {
                let label = labeling.label(row, col);
                if label == 0 || !small[(label - 1) as usize] {
                    continue;
                }
                for (dr, dc) in NEIGHBORS_8 {
                    let (nr, nc) = (row as i64 + dr, col as i64 + dc);
                    if nr < 0 || nc < 0 || nr >= h as i64 || nc >= w as i64 {
                        continue;
                    }
                    let neighbor = raster.get(nr as usize, nc as usize);
                    if neighbor != class {
                        adjacency[(label - 1) as usize][neighbor.id() as usize] += 1;
                    }
                }
            }
        }
        // decide the replacement class per small component
        let mut replacement: Vec<Option<RasterClass>> = vec![None; labeling.count()];
        for (idx, counts) in adjacency.iter().enumerate() {
            if !small[idx] {
                continue;
            }
            let touched: Vec<usize> = (0..5).filter(|&c| counts[c] > 0).collect();
            let target = match touched.len() {
                0 => None, // isolated component filling the grid: leave it
                1 => Some(RasterClass::from_id(touched[0] as u8).unwrap()),
                _ => {
                    let best = *touched.iter().max_by_key(|&&c| counts[c]).unwrap();
                    let tied = touched.iter().filter(|&&c| counts[c] == counts[best]).count() > 1;
                    if tied {
                        Some(RasterClass::Unobserved)
                    } else {
                        Some(RasterClass::from_id(best as u8).unwrap())
                    }
                }
            };
            if target.is_none() {
                small[idx] = false;
            }
            replacement[idx] = target;
        }
        for row in 0..h {
            for col in 0..w {
                let label = labeling.label(row, col);
                if label == 0 {
                    continue;
                }
                if let Some(target) = replacement[(label - 1) as usize] {
                    out.set(row, col, target);
                }
            }
        }
    }

    // thick lane markings become road
    let marking = out.class_mask(RasterClass::LaneMarking);
    if marking.any() {
        let dist = chessboard_distance(marking.bits(), w, h);
        let labeling = connected_components(&marking);
        let mut max_dist = vec![0u32; labeling.count()];
        for row in 0..h {
            for col in 0..w {
                let label = labeling.label(row, col);
                if label != 0 {
                    let idx = (label - 1) as usize;
                    max_dist[idx] = max_dist[idx].max(dist[row * w + col]);
                }
            }
        }
        // inscribed width of a component with max chessboard distance d is
        // at least 2d - 1 pixels
        let too_thick: Vec<bool> = max_dist
            .iter()
            .map(|&d| d >= 1 && (2 * d as usize).saturating_sub(1) > thick_max_px)
            .collect();
        if too_thick.iter().any(|&b| b) {
            for row in 0..h {
                for col in 0..w {
                    let label = labeling.label(row, col);
                    if label != 0 && too_thick[(label - 1) as usize] {
                        out.set(row, col, RasterClass::Road);
                    }
                }
            }
        }
    }

    out
}

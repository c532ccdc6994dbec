//! Outer-border following for polygon-shaped classes.

use alloc::vec;
use alloc::vec::Vec;

use super::PixelPath;
use crate::raster::{connected_components, BitGrid};

/// Clockwise Moore neighborhood with rows growing downward:
/// E, SE, S, SW, W, NW, N, NE.
const DIRS: [(i64, i64); 8] = [
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
    (-1, 0),
    (-1, 1),
];

fn dir_index(from: (i64, i64), to: (i64, i64)) -> usize {
    let d = (to.0 - from.0, to.1 - from.1);
    DIRS.iter().position(|&x| x == d).expect("pixels not adjacent")
}

/// Border following around one component, starting at its raster-scan
/// first pixel with the backtrack initialized to its west neighbor.
/// Terminates by Jacob's criterion: the walk returns to the start pixel in
/// the starting state.
fn follow_border(
    is_fg: &dyn Fn(i64, i64) -> bool,
    start: (usize, usize),
    area: usize,
) -> Vec<(usize, usize)> {
    let s = (start.0 as i64, start.1 as i64);
    let b0 = (s.0, s.1 - 1);
    let mut contour = vec![start];
    let mut c = s;
    let mut b = b0;
    let limit = 4 * area + 8;
    for _ in 0..limit {
        let start_dir = (dir_index(c, b) + 1) % 8;
        let mut found = None;
        let mut last_bg = b;
        for k in 0..8 {
            let d = (start_dir + k) % 8;
            let q = (c.0 + DIRS[d].0, c.1 + DIRS[d].1);
            if is_fg(q.0, q.1) {
                found = Some(q);
                break;
            }
            last_bg = q;
        }
        let q = match found {
            Some(q) => q,
            None => return contour, // isolated pixel
        };
        b = last_bg;
        c = q;
        if c == s && b == b0 {
            break;
        }
        contour.push((c.0 as usize, c.1 as usize));
    }
    contour
}

/// Outer borders of every 8-connected component, one closed pixel path per
/// component in raster-scan label order. Holes are ignored.
pub fn trace_polygons(grid: &BitGrid) -> Vec<PixelPath> {
    let labeling = connected_components(grid);
    let mut out = Vec::new();
    for label in 1..=labeling.count() as u32 {
        let pixels = labeling.pixels_of(label);
        let start = pixels[0];
        let is_fg = |r: i64, c: i64| -> bool {
            if r < 0 || c < 0 || r >= grid.height as i64 || c >= grid.width as i64 {
                return false;
            }
            labeling.label(r as usize, c as usize) == label
        };
        let contour = follow_border(&is_fg, start, pixels.len());
        out.push(PixelPath {
            pixels: contour,
            closed: true,
        });
    }
    out
}

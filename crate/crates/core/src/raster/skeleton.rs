//! Zhang-Suen two-subiteration thinning.

use alloc::vec::Vec;

use super::BitGrid;

/// Neighbor ring P2..P9: N, NE, E, SE, S, SW, W, NW.
const RING: [(i64, i64); 8] = [
    (-1, 0),
    (-1, 1),
    (0, 1),
    (1, 1),
    (1, 0),
    (1, -1),
    (0, -1),
    (-1, -1),
];

fn ring_values(grid: &BitGrid, row: usize, col: usize) -> [bool; 8] {
    let mut v = [false; 8];
    for (k, &(dr, dc)) in RING.iter().enumerate() {
        v[k] = grid.get_signed(row as i64 + dr, col as i64 + dc);
    }
    v
}

/// 0->1 transitions walking the ring once.
fn transitions(v: &[bool; 8]) -> usize {
    (0..8).filter(|&k| !v[k] && v[(k + 1) % 8]).count()
}

/// The Zhang-Suen deletability test for one subiteration.
/// `v[0]=P2(N), v[2]=P4(E), v[4]=P6(S), v[6]=P8(W)`.
fn deletable(v: &[bool; 8], step: usize) -> bool {
    let b: usize = v.iter().filter(|&&x| x).count();
    if !(2..=6).contains(&b) || transitions(v) != 1 {
        return false;
    }
    if step == 0 {
        (!v[0] || !v[2] || !v[4]) && (!v[2] || !v[4] || !v[6])
    } else {
        (!v[0] || !v[2] || !v[6]) && (!v[0] || !v[4] || !v[6])
    }
}

/// Thin set pixels to a one-pixel-wide, 8-connected skeleton by iterating
/// the two Zhang-Suen subiterations until a fixpoint.
///
/// Candidates are collected against a snapshot as usual, but each deletion
/// is re-validated on the live grid in raster order before it is applied.
/// Pure parallel deletion erases 2x2 blocks entirely; the re-check keeps
/// every component populated without touching regular configurations.
pub fn skeletonize(grid: &BitGrid) -> BitGrid {
    let mut g = grid.clone();
    let (w, h) = (g.width, g.height);
    let mut candidates: Vec<(usize, usize)> = Vec::new();
    loop {
        let mut changed = false;
        for step in 0..2 {
            candidates.clear();
            for row in 0..h {
                for col in 0..w {
                    if g.get(row, col) && deletable(&ring_values(&g, row, col), step) {
                        candidates.push((row, col));
                    }
                }
            }
            for &(row, col) in &candidates {
                if deletable(&ring_values(&g, row, col), step) {
                    g.set(row, col, false);
                    changed = true;
                }
            }
        }
        if !changed {
            return g;
        }
    }
}

//! Skeleton line tracing with branch handling.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use super::PixelPath;
use crate::raster::{connected_components, BitGrid};

/// Orthogonal neighbors first: BFS then prefers straight continuations
/// over equal-length zigzags through diagonal shortcuts, which keeps
/// junction pixels attached to their branches.
const NEIGHBORS: [(i64, i64); 8] = [
    (-1, 0),
    (0, -1),
    (0, 1),
    (1, 0),
    (-1, -1),
    (-1, 1),
    (1, -1),
    (1, 1),
];

struct PixelSet<'a> {
    alive: &'a BitGrid,
    members: Vec<(usize, usize)>,
}

impl PixelSet<'_> {
    fn neighbors(&self, p: (usize, usize)) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (dr, dc) in NEIGHBORS {
            let (r, c) = (p.0 as i64 + dr, p.1 as i64 + dc);
            if self.alive.get_signed(r, c) {
                out.push((r as usize, c as usize));
            }
        }
        out
    }

    fn degree(&self, p: (usize, usize)) -> usize {
        self.neighbors(p).len()
    }
}

/// BFS over the live pixels from `start`; returns per-pixel distances and
/// predecessors. The fixed neighbor expansion order makes parents, and
/// therefore extracted paths, deterministic.
fn bfs(
    set: &PixelSet<'_>,
    start: (usize, usize),
) -> (
    alloc::collections::BTreeMap<(usize, usize), u32>,
    alloc::collections::BTreeMap<(usize, usize), (usize, usize)>,
) {
    let mut dist = alloc::collections::BTreeMap::new();
    let mut parent = alloc::collections::BTreeMap::new();
    let mut queue = VecDeque::new();
    dist.insert(start, 0u32);
    queue.push_back(start);
    while let Some(p) = queue.pop_front() {
        let d = dist[&p];
        for n in set.neighbors(p) {
            if !dist.contains_key(&n) {
                dist.insert(n, d + 1);
                parent.insert(n, p);
                queue.push_back(n);
            }
        }
    }
    (dist, parent)
}

/// Farthest pixel from `start` among `candidates`, ties broken by
/// lexicographically smallest pixel.
fn farthest(
    dist: &alloc::collections::BTreeMap<(usize, usize), u32>,
    candidates: &[(usize, usize)],
) -> (usize, usize) {
    let mut best = candidates[0];
    let mut best_d = 0;
    for &c in candidates {
        if let Some(&d) = dist.get(&c) {
            if d > best_d || (d == best_d && c < best) {
                best = c;
                best_d = d;
            }
        }
    }
    best
}

/// Walk a cycle starting at its lexicographically smallest pixel, always
/// stepping to the smallest unvisited neighbor. Returns the full tour for
/// simple rings.
fn walk_cycle(set: &PixelSet<'_>, visited: &mut BitGrid) -> Vec<(usize, usize)> {
    let start = *set.members.iter().min().unwrap();
    let mut path = vec![start];
    visited.set(start.0, start.1, true);
    let mut current = start;
    loop {
        let next = set
            .neighbors(current)
            .into_iter()
            .find(|&(r, c)| !visited.get(r, c));
        match next {
            Some(n) => {
                visited.set(n.0, n.1, true);
                path.push(n);
                current = n;
            }
            None => return path,
        }
    }
}

/// Trace every skeleton component into pixel paths.
///
/// Per component the longest endpoint-to-endpoint path (BFS farthest-pair)
/// is extracted first; what remains splits into branch components that are
/// traced recursively. Branches shorter than `min_branch_px` pixels are
/// dropped. Components without endpoints (cycles) are opened at their
/// lexicographically smallest pixel. Returns the paths and the dropped
/// pixels.
pub fn trace_lines_full(skeleton: &BitGrid, min_branch_px: usize) -> (Vec<PixelPath>, Vec<(usize, usize)>) {
    let labeling = connected_components(skeleton);
    let mut paths = Vec::new();
    let mut dropped = Vec::new();
    let mut alive = skeleton.clone();

    // worklist of pixel groups, seeded with whole components in label order
    let mut work: VecDeque<Vec<(usize, usize)>> = VecDeque::new();
    for label in 1..=labeling.count() as u32 {
        work.push_back(labeling.pixels_of(label));
    }

    while let Some(members) = work.pop_front() {
        if members.is_empty() {
            continue;
        }
        if members.len() < min_branch_px {
            for &(r, c) in &members {
                alive.set(r, c, false);
                dropped.push((r, c));
            }
            continue;
        }
        let set = PixelSet {
            alive: &alive,
            members: members.clone(),
        };
        let endpoints: Vec<(usize, usize)> = members
            .iter()
            .copied()
            .filter(|&p| set.degree(p) <= 1)
            .collect();

        let path: Vec<(usize, usize)> = if endpoints.is_empty() {
            // cycle: open it with a deterministic walk
            let mut visited = BitGrid::new(alive.width, alive.height);
            walk_cycle(&set, &mut visited)
        } else {
            let seed = *endpoints.iter().min().unwrap();
            let (dist0, _) = bfs(&set, seed);
            let u = farthest(&dist0, &endpoints);
            let (dist1, parent1) = bfs(&set, u);
            let v = farthest(&dist1, &endpoints);
            let mut p = v;
            let mut path = vec![v];
            while let Some(&q) = parent1.get(&p) {
                path.push(q);
                p = q;
            }
            path.reverse();
            path
        };

        if path.len() == members.len() {
            // consumed the whole group
            for &(r, c) in &path {
                alive.set(r, c, false);
            }
            if path.len() >= min_branch_px {
                paths.push(PixelPath {
                    pixels: path,
                    closed: false,
                });
            } else {
                dropped.extend(path);
            }
            continue;
        }

        for &(r, c) in &path {
            alive.set(r, c, false);
        }
        if path.len() >= min_branch_px {
            paths.push(PixelPath {
                pixels: path,
                closed: false,
            });
        } else {
            dropped.extend(path.iter().copied());
        }

        // split the remainder into new groups via a local flood fill
        let mut in_members = BitGrid::new(alive.width, alive.height);
        let mut remaining = Vec::new();
        for &(r, c) in &members {
            if alive.get(r, c) {
                in_members.set(r, c, true);
                remaining.push((r, c));
            }
        }
        let mut seen = BitGrid::new(alive.width, alive.height);
        for &(r, c) in &remaining {
            if seen.get(r, c) {
                continue;
            }
            let mut group = Vec::new();
            let mut stack = vec![(r, c)];
            seen.set(r, c, true);
            while let Some((gr, gc)) = stack.pop() {
                group.push((gr, gc));
                for (dr, dc) in NEIGHBORS {
                    let (nr, nc) = (gr as i64 + dr, gc as i64 + dc);
                    if nr < 0 || nc < 0 {
                        continue;
                    }
                    let (nr, nc) = (nr as usize, nc as usize);
                    if nr < alive.height
                        && nc < alive.width
                        && in_members.get(nr, nc)
                        && !seen.get(nr, nc)
                    {
                        seen.set(nr, nc, true);
                        stack.push((nr, nc));
                    }
                }
            }
            group.sort_unstable();
            work.push_back(group);
        }
    }

    (paths, dropped)
}

/// See [`trace_lines_full`]; this drops the bookkeeping of removed pixels.
pub fn trace_lines(skeleton: &BitGrid, min_branch_px: usize) -> Vec<PixelPath> {
    trace_lines_full(skeleton, min_branch_px).0
}

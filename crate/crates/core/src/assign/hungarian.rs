//! Hungarian (Jonker-Volgenant style) minimum-cost bipartite assignment.

use alloc::vec;
use alloc::vec::Vec;

/// A minimum-cost matching of `min(rows, cols)` pairs.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    /// `(row, col)` pairs sorted by row.
    pub pairs: Vec<(usize, usize)>,
    /// Sum of matched costs, accumulated in row order.
    pub total: f64,
}

/// Shortest-augmenting-path assignment; requires `rows <= cols`.
/// Deterministic: columns are scanned in index order and improvements are
/// strict, so equal-cost alternatives resolve to the first index.
fn assign_rows(cost: &[Vec<f64>], rows: usize, cols: usize) -> Vec<usize> {
    debug_assert!(rows <= cols);
    // job[w] = row assigned to column w; cols indexed 0..=cols with a
    // virtual column at index cols
    let mut job: Vec<Option<usize>> = vec![None; cols + 1];
    let mut potential_row = vec![0.0f64; rows];
    let mut potential_col = vec![0.0f64; cols + 1];

    for row in 0..rows {
        let mut w_curr = cols;
        job[w_curr] = Some(row);
        let mut min_to = vec![f64::INFINITY; cols + 1];
        let mut prev: Vec<Option<usize>> = vec![None; cols + 1];
        let mut in_tree = vec![false; cols + 1];

        while let Some(j) = job[w_curr] {
            in_tree[w_curr] = true;
            let mut delta = f64::INFINITY;
            let mut w_next = cols;
            for w in 0..cols {
                if in_tree[w] {
                    continue;
                }
                let reduced = cost[j][w] - potential_row[j] - potential_col[w];
                if reduced < min_to[w] {
                    min_to[w] = reduced;
                    prev[w] = Some(w_curr);
                }
                if min_to[w] < delta {
                    delta = min_to[w];
                    w_next = w;
                }
            }
            for w in 0..=cols {
                if in_tree[w] {
                    if let Some(jw) = job[w] {
                        potential_row[jw] += delta;
                    }
                    potential_col[w] -= delta;
                } else {
                    min_to[w] -= delta;
                }
            }
            w_curr = w_next;
        }
        // augment along the alternating path
        while w_curr != cols {
            let w_prev = prev[w_curr].expect("augmenting path is connected");
            job[w_curr] = job[w_prev];
            w_curr = w_prev;
        }
    }

    let mut row_to_col = vec![usize::MAX; rows];
    for w in 0..cols {
        if let Some(j) = job[w] {
            row_to_col[j] = w;
        }
    }
    row_to_col
}

/// Optimal assignment of `min(n, m)` pairs on an `n x m` cost matrix.
/// Entries must be finite (a large sentinel is fine).
pub fn hungarian(cost: &[Vec<f64>]) -> Matching {
    let rows = cost.len();
    if rows == 0 {
        return Matching {
            pairs: Vec::new(),
            total: 0.0,
        };
    }
    let cols = cost[0].len();
    if cols == 0 {
        return Matching {
            pairs: Vec::new(),
            total: 0.0,
        };
    }
    let pairs: Vec<(usize, usize)> = if rows <= cols {
        let assignment = assign_rows(cost, rows, cols);
        (0..rows).map(|r| (r, assignment[r])).collect()
    } else {
        let transposed: Vec<Vec<f64>> = (0..cols)
            .map(|c| (0..rows).map(|r| cost[r][c]).collect())
            .collect();
        let assignment = assign_rows(&transposed, cols, rows);
        let mut p: Vec<(usize, usize)> = (0..cols).map(|c| (assignment[c], c)).collect();
        p.sort_unstable();
        p
    };
    let total = pairs.iter().map(|&(r, c)| cost[r][c]).sum();
    Matching { pairs, total }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    fn brute_force(cost: &[Vec<f64>]) -> f64 {
        // enumerate all injections of rows into columns (rows <= cols)
        let rows = cost.len();
        let cols = cost[0].len();
        fn recurse(cost: &[Vec<f64>], row: usize, used: &mut [bool], acc: f64, best: &mut f64) {
            if row == cost.len() {
                if acc < *best {
                    *best = acc;
                }
                return;
            }
            for col in 0..used.len() {
                if !used[col] {
                    used[col] = true;
                    recurse(cost, row + 1, used, acc + cost[row][col], best);
                    used[col] = false;
                }
            }
        }
        assert!(rows <= cols);
        let mut best = f64::INFINITY;
        recurse(cost, 0, &mut vec![false; cols], 0.0, &mut best);
        best
    }

    #[test]
    fn two_by_two() {
        let m = hungarian(&[vec![1.0, 2.0], vec![3.0, 1.0]]);
        assert_eq!(m.pairs, vec![(0, 0), (1, 1)]);
        assert_eq!(m.total, 2.0);
    }

    #[test]
    fn zero_diagonal() {
        let n = 5;
        let cost: Vec<Vec<f64>> = (0..n)
            .map(|r| (0..n).map(|c| if r == c { 0.0 } else { 1.0 }).collect())
            .collect();
        let m = hungarian(&cost);
        assert_eq!(m.total, 0.0);
        for (r, c) in m.pairs {
            assert_eq!(r, c);
        }
    }

    #[test]
    fn random_six_by_six_matches_permutation_bruteforce() {
        let mut rng = SplitMix64::new(2024);
        for _ in 0..50 {
            let cost: Vec<Vec<f64>> = (0..6)
                .map(|_| (0..6).map(|_| rng.range(0.0, 100.0)).collect())
                .collect();
            let m = hungarian(&cost);
            let expected = brute_force(&cost);
            assert!(
                (m.total - expected).abs() < 1e-9,
                "{} vs {expected}",
                m.total
            );
            // all rows matched to distinct columns
            let mut seen = [false; 6];
            for &(_, c) in &m.pairs {
                assert!(!seen[c]);
                seen[c] = true;
            }
        }
    }

    #[test]
    fn rectangular_both_orientations() {
        let mut rng = SplitMix64::new(7);
        for _ in 0..20 {
            let wide: Vec<Vec<f64>> = (0..3)
                .map(|_| (0..5).map(|_| rng.range(0.0, 10.0)).collect())
                .collect();
            let m = hungarian(&wide);
            assert_eq!(m.pairs.len(), 3);
            assert!((m.total - brute_force(&wide)).abs() < 1e-9);

            let tall: Vec<Vec<f64>> = (0..5)
                .map(|_| (0..3).map(|_| rng.range(0.0, 10.0)).collect())
                .collect();
            let m = hungarian(&tall);
            assert_eq!(m.pairs.len(), 3);
            // compare via the transpose
            let t: Vec<Vec<f64>> = (0..3)
                .map(|c| (0..5).map(|r| tall[r][c]).collect())
                .collect();
            assert!((m.total - brute_force(&t)).abs() < 1e-9);
        }
    }

    #[test]
    fn sentinel_entries_are_avoided_when_possible() {
        let big = 1e9;
        let cost = vec![vec![big, 1.0], vec![2.0, big]];
        let m = hungarian(&cost);
        assert_eq!(m.total, 3.0);
        assert_eq!(m.pairs, vec![(0, 1), (1, 0)]);
    }
}

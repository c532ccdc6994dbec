//! Global hybrid assignment: exact binary branch-and-bound over
//! one-to-one and one-to-many variables, with a Hungarian fast path when
//! no prediction splits into more than one subsegment.

use alloc::vec;
use alloc::vec::Vec;

use super::cost::{cost_points_to_label, prepare_label, rasterize_points, Prepared};
use super::hungarian::hungarian;
use super::subsets::enumerate_subsets;
use super::{split_by_mask, AssignError, AssignOutcome, AssignParams, AssignmentResult};
use crate::geometry::{resample_element, ElementKind, MapClass, Point2, VectorMap};
use crate::loss::SoftRaster;
use crate::raster::BevMask;

const MAX_LABELS: usize = 128;

/// One binary decision variable: assign `pred` to the label set `labels`.
#[derive(Debug, Clone)]
pub(crate) struct Var {
    pub pred: usize,
    pub labels: Vec<usize>,
    /// `(segment, label)` pairs of the local matching; empty for direct
    /// one-to-one variables.
    pub local: Vec<(usize, usize)>,
    pub direct: bool,
    pub cost: f64,
    covers: u128,
}

pub(crate) struct Instance {
    pub n_preds: usize,
    pub n_labels: usize,
    pub vars: Vec<Var>,
    pub seg_counts: Vec<usize>,
    /// Dense lookup of direct / singleton-group variables for the fast path.
    x_idx: Vec<Option<usize>>,
    y_singleton_idx: Vec<Option<usize>>,
    large_cost: f64,
    threshold: f64,
}

struct PreparedPred {
    class: MapClass,
    confidence: f64,
    points: Vec<Point2>,
    raster: SoftRaster,
    segments: Vec<(Vec<Point2>, SoftRaster)>,
}

pub(crate) fn build_instance(
    preds: &VectorMap,
    labels: &VectorMap,
    mask: &BevMask,
    params: &AssignParams,
) -> Result<Instance, AssignError> {
    let n = preds.elements.len();
    let m = labels.elements.len();
    if m > MAX_LABELS {
        return Err(AssignError::TooManyLabels);
    }
    let spec = params.cost.raster_spec(&labels.bev_range);
    let threshold = params.cost.infeasible_threshold();

    let prepared_labels: Vec<Prepared> = labels
        .elements
        .iter()
        .map(|g| prepare_label(g, &params.cost, &spec, params.resample_len))
        .collect::<Result<_, _>>()?;

    let prepared_preds: Vec<PreparedPred> = preds
        .elements
        .iter()
        .map(|q| -> Result<PreparedPred, AssignError> {
            let points = resample_element(q, params.resample_len)?;
            let raster = rasterize_points(&points, q.kind, &params.cost, &spec);
            let segments = split_by_mask(q, mask, params.resample_len, params.min_run_points)
                .segments
                .into_iter()
                .map(|seg| {
                    let r = rasterize_points(&seg, ElementKind::Polyline, &params.cost, &spec);
                    (seg, r)
                })
                .collect();
            Ok(PreparedPred {
                class: q.class,
                confidence: q.confidence.unwrap_or(1.0),
                points,
                raster,
                segments,
            })
        })
        .collect::<Result<_, _>>()?;

    let seg_counts: Vec<usize> = prepared_preds.iter().map(|p| p.segments.len()).collect();

    let mut vars: Vec<Var> = Vec::new();
    let mut x_idx = vec![None; n * m];
    let mut y_singleton_idx = vec![None; n * m];

    // direct one-to-one variables; the mask plays no role here
    for (i, p) in prepared_preds.iter().enumerate() {
        for (j, g) in prepared_labels.iter().enumerate() {
            let cost = cost_points_to_label(
                p.class,
                p.confidence,
                &p.points,
                &p.raster,
                g,
                &params.cost,
            );
            if cost >= threshold {
                continue;
            }
            x_idx[i * m + j] = Some(vars.len());
            vars.push(Var {
                pred: i,
                labels: vec![j],
                local: Vec::new(),
                direct: true,
                cost,
                covers: 1u128 << j,
            });
        }
    }

    // one-to-many variables over same-class subsets with matching
    // cardinality, locally matched by the Hungarian algorithm
    let max_card = params
        .max_card
        .unwrap_or_else(|| seg_counts.iter().copied().max().unwrap_or(0).min(4));
    if max_card >= 1 && m > 0 {
        let subsets = enumerate_subsets(labels, max_card, params.spatial_gate, params.subset_budget)?;
        for subset in subsets {
            let class = labels.elements[subset[0]].class;
            for (i, p) in prepared_preds.iter().enumerate() {
                if p.class != class || p.segments.is_empty() || p.segments.len() != subset.len() {
                    continue;
                }
                let k = subset.len();
                let matrix: Vec<Vec<f64>> = (0..k)
                    .map(|a| {
                        (0..k)
                            .map(|b| {
                                cost_points_to_label(
                                    p.class,
                                    p.confidence,
                                    &p.segments[a].0,
                                    &p.segments[a].1,
                                    &prepared_labels[subset[b]],
                                    &params.cost,
                                )
                            })
                            .collect()
                    })
                    .collect();
                let matching = hungarian(&matrix);
                if matching.total >= threshold {
                    continue;
                }
                let local: Vec<(usize, usize)> = matching
                    .pairs
                    .iter()
                    .map(|&(seg, b)| (seg, subset[b]))
                    .collect();
                let mut covers = 0u128;
                for &j in &subset {
                    covers |= 1u128 << j;
                }
                if k == 1 {
                    y_singleton_idx[i * m + subset[0]] = Some(vars.len());
                }
                vars.push(Var {
                    pred: i,
                    labels: subset.clone(),
                    local,
                    direct: false,
                    cost: matching.total,
                    covers,
                });
            }
        }
    }

    Ok(Instance {
        n_preds: n,
        n_labels: m,
        vars,
        seg_counts,
        x_idx,
        y_singleton_idx,
        large_cost: params.cost.large_cost,
        threshold,
    })
}

/// Depth-first branch-and-bound over the selection of variables, covering
/// labels in index order. The bound apportions each variable's cost evenly
/// over the labels it covers, which never overestimates the remaining
/// cost. Exploration order (cost, direct-first, pred, labels) plus
/// first-found-wins makes the returned optimum deterministic.
fn solve_bnb(inst: &Instance) -> Result<Vec<usize>, AssignError> {
    let m = inst.n_labels;
    if m == 0 {
        return Ok(Vec::new());
    }
    let mut per_label: Vec<Vec<usize>> = vec![Vec::new(); m];
    for (vi, var) in inst.vars.iter().enumerate() {
        for &j in &var.labels {
            per_label[j].push(vi);
        }
    }
    for (j, list) in per_label.iter_mut().enumerate() {
        if list.is_empty() {
            return Err(AssignError::InsufficientPredictions);
        }
        list.sort_by(|&a, &b| {
            let va = &inst.vars[a];
            let vb = &inst.vars[b];
            va.cost
                .total_cmp(&vb.cost)
                .then(vb.direct.cmp(&va.direct))
                .then(va.pred.cmp(&vb.pred))
                .then(va.labels.cmp(&vb.labels))
        });
        let _ = j;
    }
    let min_share: Vec<f64> = (0..m)
        .map(|j| {
            per_label[j]
                .iter()
                .map(|&vi| inst.vars[vi].cost / inst.vars[vi].labels.len() as f64)
                .fold(f64::INFINITY, f64::min)
        })
        .collect();

    struct Search<'a> {
        inst: &'a Instance,
        per_label: &'a [Vec<usize>],
        min_share: &'a [f64],
        full: u128,
        best_cost: f64,
        best: Option<Vec<usize>>,
        used: Vec<bool>,
        selection: Vec<usize>,
    }

    impl Search<'_> {
        fn dfs(&mut self, covered: u128, acc: f64) {
            let mut bound = acc;
            for j in 0..self.min_share.len() {
                if covered & (1u128 << j) == 0 {
                    bound += self.min_share[j];
                }
            }
            if bound >= self.best_cost {
                return;
            }
            if covered == self.full {
                self.best_cost = acc;
                self.best = Some(self.selection.clone());
                return;
            }
            let j = (0..self.min_share.len())
                .find(|&j| covered & (1u128 << j) == 0)
                .expect("uncovered label exists");
            for idx in 0..self.per_label[j].len() {
                let vi = self.per_label[j][idx];
                let var = &self.inst.vars[vi];
                if self.used[var.pred] || var.covers & covered != 0 {
                    continue;
                }
                self.used[var.pred] = true;
                self.selection.push(vi);
                let cost = var.cost;
                let covers = var.covers;
                self.dfs(covered | covers, acc + cost);
                self.selection.pop();
                self.used[var.pred] = false;
            }
        }
    }

    let mut search = Search {
        inst,
        per_label: &per_label,
        min_share: &min_share,
        full: if m == 128 { u128::MAX } else { (1u128 << m) - 1 },
        best_cost: f64::INFINITY,
        best: None,
        used: vec![false; inst.n_preds],
        selection: Vec::new(),
    };
    search.dfs(0, 0.0);
    search.best.ok_or(AssignError::InsufficientPredictions)
}

/// Hungarian fast path, valid when every prediction has at most one
/// subsegment: pad the labels with zero-cost null columns up to the
/// number of predictions and solve one square assignment. Each real entry
/// takes the cheaper of the direct and singleton-group routes, preferring
/// direct on exact ties.
fn solve_padded(inst: &Instance) -> Result<Vec<usize>, AssignError> {
    let (n, m) = (inst.n_preds, inst.n_labels);
    if m == 0 {
        return Ok(Vec::new());
    }
    if n < m {
        return Err(AssignError::InsufficientPredictions);
    }
    let cost: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|col| {
                    if col >= m {
                        return 0.0; // null padding
                    }
                    let x = inst.x_idx[i * m + col].map(|vi| inst.vars[vi].cost);
                    let y = inst.y_singleton_idx[i * m + col].map(|vi| inst.vars[vi].cost);
                    match (x, y) {
                        (Some(a), Some(b)) if b < a => b,
                        (Some(a), _) => a,
                        (None, Some(b)) => b,
                        (None, None) => inst.large_cost,
                    }
                })
                .collect()
        })
        .collect();
    let matching = hungarian(&cost);
    let mut chosen = Vec::new();
    for &(i, col) in &matching.pairs {
        if col >= m {
            continue;
        }
        if cost[i][col] >= inst.threshold {
            return Err(AssignError::InsufficientPredictions);
        }
        let x = inst.x_idx[i * m + col];
        let y = inst.y_singleton_idx[i * m + col];
        let vi = match (x, y) {
            (Some(a), Some(b)) => {
                if inst.vars[b].cost < inst.vars[a].cost {
                    b
                } else {
                    a
                }
            }
            (Some(a), None) => a,
            (None, Some(b)) => b,
            (None, None) => unreachable!("entry below threshold has a variable"),
        };
        chosen.push(vi);
    }
    Ok(chosen)
}

fn assemble(inst: &Instance, mut chosen: Vec<usize>) -> AssignmentResult {
    chosen.sort_by_key(|&vi| inst.vars[vi].pred);
    let mut outcomes = vec![AssignOutcome::Unassigned; inst.n_preds];
    let mut total = 0.0;
    let mut covered = 0u128;
    for &vi in &chosen {
        let var = &inst.vars[vi];
        debug_assert!(var.covers & covered == 0, "label covered twice");
        covered |= var.covers;
        total += var.cost;
        outcomes[var.pred] = if var.direct {
            AssignOutcome::OneToOne {
                label: var.labels[0],
                cost: var.cost,
            }
        } else {
            AssignOutcome::OneToMany {
                labels: var.labels.clone(),
                local: var.local.clone(),
                cost: var.cost,
            }
        };
    }
    debug_assert_eq!(covered.count_ones() as usize, inst.n_labels);
    AssignmentResult {
        outcomes,
        total_cost: total,
    }
}

/// Exact solve via branch and bound, regardless of subsegment structure.
pub fn solve_branch_and_bound(
    preds: &VectorMap,
    labels: &VectorMap,
    mask: &BevMask,
    params: &AssignParams,
) -> Result<AssignmentResult, AssignError> {
    let inst = build_instance(preds, labels, mask, params)?;
    let chosen = solve_bnb(&inst)?;
    Ok(assemble(&inst, chosen))
}

/// Hungarian-with-padding solve; errors with
/// [`AssignError::FastPathInapplicable`] when some prediction splits into
/// more than one subsegment.
pub fn solve_hungarian_padded(
    preds: &VectorMap,
    labels: &VectorMap,
    mask: &BevMask,
    params: &AssignParams,
) -> Result<AssignmentResult, AssignError> {
    let inst = build_instance(preds, labels, mask, params)?;
    if inst.seg_counts.iter().any(|&c| c > 1) {
        return Err(AssignError::FastPathInapplicable);
    }
    let chosen = solve_padded(&inst)?;
    Ok(assemble(&inst, chosen))
}

/// Solve the global assignment, taking the Hungarian fast path whenever
/// no prediction splits into more than one subsegment.
pub fn solve_global(
    preds: &VectorMap,
    labels: &VectorMap,
    mask: &BevMask,
    params: &AssignParams,
) -> Result<AssignmentResult, AssignError> {
    let inst = build_instance(preds, labels, mask, params)?;
    let chosen = if inst.seg_counts.iter().all(|&c| c <= 1) {
        solve_padded(&inst)?
    } else {
        solve_bnb(&inst)?
    };
    Ok(assemble(&inst, chosen))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BevSpec, MapClass, MapElement};
    use alloc::string::String;

    fn spec() -> BevSpec {
        BevSpec::new(-15.0, 15.0, -15.0, 15.0, 2.0).unwrap()
    }

    fn boundary(raw: &[(f64, f64)], conf: Option<f64>) -> MapElement {
        MapElement::polyline(
            MapClass::Boundary,
            raw.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
            conf,
        )
        .unwrap()
    }

    fn map_of(elements: Vec<MapElement>) -> VectorMap {
        VectorMap::new(String::from("t"), spec(), elements)
    }

    fn mask_with_hole(center: Point2, radius: f64) -> BevMask {
        let spec = spec();
        let mut m = BevMask::all_observed(spec);
        for row in 0..m.grid.height {
            for col in 0..m.grid.width {
                if spec.pixel_center(row, col).dist(center) <= radius {
                    m.grid.set(row, col, false);
                }
            }
        }
        m
    }

    fn dense_boundary(x: f64, y0: f64, y1: f64, n: usize, conf: Option<f64>) -> MapElement {
        let pts: Vec<(f64, f64)> = (0..n)
            .map(|k| (x, y0 + (y1 - y0) * k as f64 / (n - 1) as f64))
            .collect();
        boundary(&pts, conf)
    }

    #[test]
    fn occluded_boundary_matches_one_to_many() {
        // one long predicted boundary; the label is split in two by a
        // parked-car-sized hole in the mask
        let q = map_of(vec![dense_boundary(0.0, -12.0, 12.0, 20, Some(0.95))]);
        let g = map_of(vec![
            dense_boundary(0.0, -12.0, -2.5, 8, None),
            dense_boundary(0.0, 2.5, 12.0, 8, None),
        ]);
        let mask = mask_with_hole(Point2::new(0.0, 0.0), 2.0);
        let params = AssignParams::default();

        // the prediction splits into exactly two subsegments
        let segs = split_by_mask(&q.elements[0], &mask, params.resample_len, params.min_run_points);
        assert_eq!(segs.segments.len(), 2);

        let result = solve_global(&q, &g, &mask, &params).unwrap();
        match &result.outcomes[0] {
            AssignOutcome::OneToMany { labels, local, .. } => {
                assert_eq!(labels.as_slice(), &[0, 1]);
                assert_eq!(local.len(), 2);
            }
            other => panic!("expected one-to-many, got {other:?}"),
        }
    }

    #[test]
    fn no_masking_equals_plain_hungarian_objective() {
        let q = map_of(vec![
            dense_boundary(-3.0, -10.0, 10.0, 20, Some(0.9)),
            dense_boundary(3.0, -10.0, 10.0, 20, Some(0.8)),
        ]);
        let g = map_of(vec![
            dense_boundary(3.2, -10.0, 10.0, 12, None),
            dense_boundary(-2.9, -10.0, 10.0, 12, None),
        ]);
        let mask = BevMask::all_observed(spec());
        let params = AssignParams::default();
        let result = solve_global(&q, &g, &mask, &params).unwrap();

        // plain Hungarian on the one-to-one costs
        let mut cost = Vec::new();
        for qi in &q.elements {
            let mut row = Vec::new();
            for gj in &g.elements {
                row.push(
                    super::super::cost_o2o(qi, gj, &params.cost, &g.bev_range, params.resample_len)
                        .unwrap(),
                );
            }
            cost.push(row);
        }
        let plain = hungarian(&cost);
        assert!(
            (result.total_cost - plain.total).abs() < 1e-9,
            "{} vs {}",
            result.total_cost,
            plain.total
        );
        // both predictions matched one-to-one to the nearer label
        match result.outcomes[0] {
            AssignOutcome::OneToOne { label, .. } => assert_eq!(label, 1),
            ref o => panic!("{o:?}"),
        }
    }

    #[test]
    fn unmatched_label_means_insufficient_predictions() {
        // one prediction cannot cover two labels when fully observed
        let q = map_of(vec![dense_boundary(0.0, -10.0, 10.0, 20, Some(0.9))]);
        let g = map_of(vec![
            dense_boundary(0.0, -10.0, 10.0, 12, None),
            dense_boundary(5.0, -10.0, 10.0, 12, None),
        ]);
        let mask = BevMask::all_observed(spec());
        let err = solve_global(&q, &g, &mask, &AssignParams::default()).unwrap_err();
        assert_eq!(err, AssignError::InsufficientPredictions);
    }

    #[test]
    fn fast_path_and_bnb_agree_when_applicable() {
        let q = map_of(vec![
            dense_boundary(-3.0, -10.0, 10.0, 20, Some(0.9)),
            dense_boundary(3.0, -10.0, 10.0, 20, Some(0.7)),
            dense_boundary(8.0, -10.0, 10.0, 20, Some(0.5)),
        ]);
        let g = map_of(vec![
            dense_boundary(3.1, -10.0, 10.0, 12, None),
            dense_boundary(-3.2, -10.0, 10.0, 12, None),
        ]);
        let mask = BevMask::all_observed(spec());
        let params = AssignParams::default();
        let fast = solve_hungarian_padded(&q, &g, &mask, &params).unwrap();
        let exact = solve_branch_and_bound(&q, &g, &mask, &params).unwrap();
        assert_eq!(fast.total_cost, exact.total_cost);
        // exactly one prediction stays unassigned
        let unassigned = fast
            .outcomes
            .iter()
            .filter(|o| matches!(o, AssignOutcome::Unassigned))
            .count();
        assert_eq!(unassigned, 1);
    }

    #[test]
    fn every_label_covered_exactly_once() {
        let q = map_of(vec![
            dense_boundary(-3.0, -10.0, 10.0, 20, Some(0.9)),
            dense_boundary(3.0, -10.0, 10.0, 20, Some(0.8)),
            dense_boundary(0.0, -12.0, 12.0, 20, Some(0.7)),
        ]);
        let g = map_of(vec![
            dense_boundary(0.0, -12.0, -2.5, 8, None),
            dense_boundary(0.0, 2.5, 12.0, 8, None),
            dense_boundary(-3.1, -10.0, 10.0, 8, None),
        ]);
        let mask = mask_with_hole(Point2::new(0.0, 0.0), 2.0);
        let result = solve_global(&q, &g, &mask, &AssignParams::default()).unwrap();
        let mut coverage = vec![0usize; g.elements.len()];
        let mut pred_seen = vec![false; q.elements.len()];
        for (i, o) in result.outcomes.iter().enumerate() {
            match o {
                AssignOutcome::OneToOne { label, .. } => {
                    assert!(!pred_seen[i]);
                    pred_seen[i] = true;
                    coverage[*label] += 1;
                }
                AssignOutcome::OneToMany { labels, .. } => {
                    assert!(!pred_seen[i]);
                    pred_seen[i] = true;
                    for &j in labels {
                        coverage[j] += 1;
                    }
                }
                AssignOutcome::Unassigned => {}
            }
        }
        assert!(coverage.iter().all(|&c| c == 1), "{coverage:?}");
    }
}

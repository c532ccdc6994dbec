//! Candidate label subsets for the one-to-many assignment.

use alloc::vec::Vec;

use super::AssignError;
use crate::geometry::{MapClass, Point2, VectorMap};

#[derive(Debug, Clone, Copy)]
struct Bbox {
    min: Point2,
    max: Point2,
}

impl Bbox {
    fn of(points: &[Point2]) -> Bbox {
        let mut min = points[0];
        let mut max = points[0];
        for p in points {
            min.x = min.x.min(p.x);
            min.y = min.y.min(p.y);
            max.x = max.x.max(p.x);
            max.y = max.y.max(p.y);
        }
        Bbox { min, max }
    }

    /// Euclidean gap between two axis-aligned boxes; 0 when they overlap.
    fn gap(&self, other: &Bbox) -> f64 {
        let dx = (other.min.x - self.max.x).max(self.min.x - other.max.x).max(0.0);
        let dy = (other.min.y - self.max.y).max(self.min.y - other.max.y).max(0.0);
        crate::float::hypot(dx, dy)
    }
}

/// Enumerate same-class label subsets of size 1..=`max_card`, in class
/// order then ascending size then lexicographic index order.
///
/// With a spatial `gate`, a subset qualifies only when all its members'
/// bounding boxes lie pairwise within `gate` meters; singletons are always
/// included. The enumeration fails once more than `budget` subsets exist.
pub fn enumerate_subsets(
    labels: &VectorMap,
    max_card: usize,
    gate: Option<f64>,
    budget: usize,
) -> Result<Vec<Vec<usize>>, AssignError> {
    debug_assert!(max_card >= 1);
    let boxes: Vec<Bbox> = labels.elements.iter().map(|e| Bbox::of(&e.points)).collect();
    let mut out: Vec<Vec<usize>> = Vec::new();
    for class in MapClass::ALL {
        let members = labels.class_indices(class);
        if members.is_empty() {
            continue;
        }
        for size in 1..=max_card.min(members.len()) {
            let mut combo: Vec<usize> = (0..size).collect();
            loop {
                let subset: Vec<usize> = combo.iter().map(|&k| members[k]).collect();
                let admissible = size == 1
                    || match gate {
                        None => true,
                        Some(g) => subset.iter().enumerate().all(|(a, &i)| {
                            subset[a + 1..].iter().all(|&j| boxes[i].gap(&boxes[j]) <= g)
                        }),
                    };
                if admissible {
                    if out.len() >= budget {
                        return Err(AssignError::BudgetExceeded);
                    }
                    out.push(subset);
                }
                // next combination in lexicographic order
                let mut k = size;
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    if combo[k] + (size - k) <= members.len() - 1 {
                        combo[k] += 1;
                        for j in k + 1..size {
                            combo[j] = combo[j - 1] + 1;
                        }
                        break;
                    }
                    if k == 0 {
                        combo.clear();
                        break;
                    }
                }
                if combo.is_empty() {
                    break;
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{BevSpec, MapElement};
    use alloc::string::String;
    use alloc::vec;

    fn spec() -> BevSpec {
        BevSpec::new(-50.0, 50.0, -50.0, 50.0, 1.0).unwrap()
    }

    fn divider_at(x: f64) -> MapElement {
        MapElement::polyline(
            MapClass::Divider,
            vec![Point2::new(x, -5.0), Point2::new(x, 5.0)],
            None,
        )
        .unwrap()
    }

    #[test]
    fn three_labels_max_two_gives_six() {
        let map = VectorMap::new(
            String::from("t"),
            spec(),
            vec![divider_at(0.0), divider_at(1.0), divider_at(2.0)],
        );
        let subsets = enumerate_subsets(&map, 2, None, 1000).unwrap();
        assert_eq!(subsets.len(), 6);
        assert_eq!(
            subsets,
            vec![
                vec![0],
                vec![1],
                vec![2],
                vec![0, 1],
                vec![0, 2],
                vec![1, 2]
            ]
        );
    }

    #[test]
    fn classes_never_mix() {
        let boundary = MapElement::polyline(
            MapClass::Boundary,
            vec![Point2::new(5.0, -5.0), Point2::new(5.0, 5.0)],
            None,
        )
        .unwrap();
        let map = VectorMap::new(
            String::from("t"),
            spec(),
            vec![divider_at(0.0), boundary, divider_at(1.0)],
        );
        let subsets = enumerate_subsets(&map, 3, None, 1000).unwrap();
        for s in &subsets {
            let classes: Vec<MapClass> = s.iter().map(|&i| map.elements[i].class).collect();
            assert!(classes.windows(2).all(|w| w[0] == w[1]));
        }
        // 3 singletons + 1 divider pair
        assert_eq!(subsets.len(), 4);
    }

    #[test]
    fn gated_is_subset_of_ungated_and_keeps_singletons() {
        let map = VectorMap::new(
            String::from("t"),
            spec(),
            vec![
                divider_at(0.0),
                divider_at(2.0),
                divider_at(40.0), // far away
            ],
        );
        let ungated = enumerate_subsets(&map, 2, None, 1000).unwrap();
        let gated = enumerate_subsets(&map, 2, Some(5.0), 1000).unwrap();
        for s in &gated {
            assert!(ungated.contains(s));
        }
        // the far divider only appears as a singleton
        assert!(gated.contains(&vec![2]));
        assert!(!gated.contains(&vec![0, 2]));
        assert!(gated.contains(&vec![0, 1]));
    }

    #[test]
    fn budget_enforced() {
        let elements: Vec<MapElement> = (0..20).map(|k| divider_at(k as f64)).collect();
        let map = VectorMap::new(String::from("t"), spec(), elements);
        let err = enumerate_subsets(&map, 3, None, 100).unwrap_err();
        assert_eq!(err, AssignError::BudgetExceeded);
    }
}

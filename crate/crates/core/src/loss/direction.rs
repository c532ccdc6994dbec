//! Turning-angle smoothness: a self-supervised regularizer on predicted
//! polylines.

use alloc::vec;
use alloc::vec::Vec;

use super::LossError;
use crate::geometry::Point2;

const LEN_EPS: f64 = 1e-12;

/// Mean over interior vertices of `1 - cos(theta)`, `theta` the turning
/// angle between consecutive edges, with the analytic gradient. Vertices
/// adjacent to zero-length edges contribute nothing.
pub fn direction_loss(points: &[Point2]) -> Result<(f64, Vec<(f64, f64)>), LossError> {
    if points.len() < 3 {
        return Err(LossError::TooFewPoints);
    }
    let n = points.len();
    let interior = (n - 2) as f64;
    let mut loss = 0.0;
    let mut grad = vec![(0.0, 0.0); n];
    for k in 1..n - 1 {
        let u = points[k] - points[k - 1];
        let v = points[k + 1] - points[k];
        let lu = u.norm();
        let lv = v.norm();
        if lu < LEN_EPS || lv < LEN_EPS {
            continue;
        }
        let inv = 1.0 / (lu * lv);
        let cos = u.dot(v) * inv;
        loss += 1.0 - cos;
        // d cos / du = v/(|u||v|) - cos * u/|u|^2, likewise for v
        let dcos_du = Point2::new(
            v.x * inv - cos * u.x / (lu * lu),
            v.y * inv - cos * u.y / (lu * lu),
        );
        let dcos_dv = Point2::new(
            u.x * inv - cos * v.x / (lv * lv),
            u.y * inv - cos * v.y / (lv * lv),
        );
        // loss term is -cos; u = p_k - p_{k-1}, v = p_{k+1} - p_k
        let scale = -1.0 / interior;
        grad[k - 1].0 -= scale * dcos_du.x;
        grad[k - 1].1 -= scale * dcos_du.y;
        grad[k].0 += scale * (dcos_du.x - dcos_dv.x);
        grad[k].1 += scale * (dcos_du.y - dcos_dv.y);
        grad[k + 1].0 += scale * dcos_dv.x;
        grad[k + 1].1 += scale * dcos_dv.y;
    }
    Ok((loss / interior, grad))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::float;
    use crate::rng::SplitMix64;

    fn pts(raw: &[(f64, f64)]) -> Vec<Point2> {
        raw.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    #[test]
    fn collinear_is_zero() {
        let (loss, grad) = direction_loss(&pts(&[(0.0, 0.0), (1.0, 1.0), (3.0, 3.0), (7.0, 7.0)]))
            .unwrap();
        assert!(loss.abs() < 1e-12);
        for (gx, gy) in grad {
            assert!(gx.abs() < 1e-9 && gy.abs() < 1e-9);
        }
    }

    #[test]
    fn right_angle_unit_contribution() {
        // single interior vertex turning 90 degrees: 1 - cos(90) = 1
        let (loss, _) = direction_loss(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0)])).unwrap();
        assert!((loss - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zero_length_edge_skipped() {
        let (loss, _) =
            direction_loss(&pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 0.0), (2.0, 5.0)])).unwrap();
        assert!(loss.is_finite());
    }

    #[test]
    fn rotation_invariance() {
        let mut rng = SplitMix64::new(12);
        let points: Vec<Point2> = (0..8)
            .map(|_| Point2::new(rng.range(-5.0, 5.0), rng.range(-5.0, 5.0)))
            .collect();
        let (base, _) = direction_loss(&points).unwrap();
        for _ in 0..5 {
            let theta = rng.range(-3.0, 3.0);
            let (s, c) = (float::sin(theta), float::cos(theta));
            let rotated: Vec<Point2> = points
                .iter()
                .map(|p| Point2::new(c * p.x - s * p.y, s * p.x + c * p.y))
                .collect();
            let (r, _) = direction_loss(&rotated).unwrap();
            assert!((base - r).abs() < 1e-9);
        }
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let mut rng = SplitMix64::new(77);
        let h = 1e-5;
        let mut done = 0;
        while done < 40 {
            let n = 3 + rng.below(6);
            let points: Vec<Point2> = (0..n)
                .map(|_| Point2::new(rng.range(-5.0, 5.0), rng.range(-5.0, 5.0)))
                .collect();
            // keep away from degenerate edges
            if points.windows(2).any(|w| w[0].dist(w[1]) < 0.05) {
                continue;
            }
            let (_, grad) = direction_loss(&points).unwrap();
            for pi in 0..n {
                for axis in 0..2 {
                    let mut pp = points.clone();
                    let mut pm = points.clone();
                    if axis == 0 {
                        pp[pi].x += h;
                        pm[pi].x -= h;
                    } else {
                        pp[pi].y += h;
                        pm[pi].y -= h;
                    }
                    let (lp, _) = direction_loss(&pp).unwrap();
                    let (lm, _) = direction_loss(&pm).unwrap();
                    let fd = (lp - lm) / (2.0 * h);
                    let an = if axis == 0 { grad[pi].0 } else { grad[pi].1 };
                    let denom = an.abs().max(fd.abs()).max(1e-6);
                    assert!(
                        (an - fd).abs() / denom < 1e-4,
                        "point {pi} axis {axis}: {an} vs {fd}"
                    );
                }
            }
            done += 1;
        }
    }

    #[test]
    fn too_few_points_rejected() {
        assert!(direction_loss(&pts(&[(0.0, 0.0), (1.0, 0.0)])).is_err());
    }
}

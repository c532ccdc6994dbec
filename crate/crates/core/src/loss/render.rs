//! Rendering loss: masked Dice between a prediction's rasterization and
//! the union raster of its assigned labels.

use alloc::vec::Vec;

use super::{dice_loss, soft_rasterize, LossError, SoftRaster};
use crate::geometry::{BevSpec, MapElement};
use crate::raster::BevMask;

/// Rasterize the assigned labels into one union raster (pixel-wise max),
/// rasterize the prediction, and take the masked Dice loss. The gradient
/// is with respect to the prediction's points.
pub fn render_loss(
    q: &MapElement,
    assigned: &[&MapElement],
    mask: Option<&BevMask>,
    spec: &BevSpec,
    sigma: f64,
    band_width: f64,
) -> Result<(f64, Vec<(f64, f64)>), LossError> {
    let mut target = SoftRaster::zeros(*spec);
    for g in assigned {
        let r = soft_rasterize(g, spec, sigma, band_width);
        target.max_with(&r.raster);
    }
    let pred = soft_rasterize(q, spec, sigma, band_width);
    let (loss, grad_values) = dice_loss(&pred.raster, &target, mask)?;
    Ok((loss, pred.grad_points(&grad_values)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{MapClass, Point2};
    use crate::rng::SplitMix64;

    fn spec() -> BevSpec {
        BevSpec::new(0.0, 10.0, 0.0, 10.0, 2.0).unwrap()
    }

    fn line(raw: &[(f64, f64)]) -> MapElement {
        MapElement::polyline(
            MapClass::Boundary,
            raw.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn identical_label_near_zero() {
        let q = line(&[(1.0, 1.0), (9.0, 9.0)]);
        let g = q.clone();
        let (loss, _) = render_loss(&q, &[&g], None, &spec(), 0.3, 0.0).unwrap();
        assert!(loss < 1e-2, "loss {loss}");
    }

    #[test]
    fn fragment_union_beats_single_fragment() {
        // the prediction spans the full line; two labels cover its halves
        let q = line(&[(1.0, 5.0), (9.0, 5.0)]);
        let left = line(&[(1.0, 5.0), (5.0, 5.0)]);
        let right = line(&[(5.0, 5.0), (9.0, 5.0)]);
        let spec = spec();
        let (both, _) = render_loss(&q, &[&left, &right], None, &spec, 0.3, 0.0).unwrap();
        let (only_left, _) = render_loss(&q, &[&left], None, &spec, 0.3, 0.0).unwrap();
        let (only_right, _) = render_loss(&q, &[&right], None, &spec, 0.3, 0.0).unwrap();
        assert!(both < only_left, "{both} vs {only_left}");
        assert!(both < only_right, "{both} vs {only_right}");
    }

    #[test]
    fn masked_region_ignored() {
        let spec = spec();
        let q = line(&[(1.0, 5.0), (9.0, 5.0)]);
        let g = line(&[(1.0, 5.0), (5.0, 5.0)]);
        // mask away the right half where the label is missing
        let mut mask = BevMask::all_observed(spec);
        for row in 0..mask.grid.height {
            for col in 10..mask.grid.width {
                mask.grid.set(row, col, false);
            }
        }
        let (masked, _) = render_loss(&q, &[&g], Some(&mask), &spec, 0.3, 0.0).unwrap();
        let (unmasked, _) = render_loss(&q, &[&g], None, &spec, 0.3, 0.0).unwrap();
        assert!(masked < unmasked);
        assert!(masked < 0.05, "masked loss {masked}");
    }

    #[test]
    fn gradient_matches_finite_differences() {
        let spec = spec();
        let sigma = 0.5;
        let mut rng = SplitMix64::new(19);
        let h = 1e-5;
        for _ in 0..5 {
            let base: Vec<(f64, f64)> = (0..4)
                .map(|_| (rng.range(1.5, 8.5), rng.range(1.5, 8.5)))
                .collect();
            let g = line(&[(2.0, 2.0), (8.0, 8.0)]);
            let q = line(&base);
            let (_, grad) = render_loss(&q, &[&g], None, &spec, sigma, 0.0).unwrap();
            for pi in 0..base.len() {
                for axis in 0..2 {
                    let mut bp = base.clone();
                    let mut bm = base.clone();
                    if axis == 0 {
                        bp[pi].0 += h;
                        bm[pi].0 -= h;
                    } else {
                        bp[pi].1 += h;
                        bm[pi].1 -= h;
                    }
                    let (lp, _) = render_loss(&line(&bp), &[&g], None, &spec, sigma, 0.0).unwrap();
                    let (lm, _) = render_loss(&line(&bm), &[&g], None, &spec, sigma, 0.0).unwrap();
                    let fd = (lp - lm) / (2.0 * h);
                    let an = if axis == 0 { grad[pi].0 } else { grad[pi].1 };
                    let denom = an.abs().max(fd.abs()).max(1e-7);
                    assert!(
                        (an - fd).abs() / denom < 2e-3,
                        "point {pi} axis {axis}: {an} vs {fd}"
                    );
                }
            }
        }
    }
}

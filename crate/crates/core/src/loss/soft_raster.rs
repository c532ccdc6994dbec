//! Differentiable soft rasterization of map elements.

use alloc::vec;
use alloc::vec::Vec;

use crate::float;
use crate::geometry::{BevSpec, ElementKind, MapElement, Point2};

/// Per-pixel float occupancy in `[0, 1]` over a BEV range.
#[derive(Debug, Clone, PartialEq)]
pub struct SoftRaster {
    pub spec: BevSpec,
    pub width: usize,
    pub height: usize,
    pub values: Vec<f64>,
}

impl SoftRaster {
    pub fn zeros(spec: BevSpec) -> Self {
        let width = spec.width_px();
        let height = spec.height_px();
        Self {
            spec,
            width,
            height,
            values: vec![0.0; width * height],
        }
    }

    /// Pixel-wise maximum, used to merge several label rasters into one
    /// target while keeping values in `[0, 1]`.
    pub fn max_with(&mut self, other: &SoftRaster) {
        assert_eq!(self.values.len(), other.values.len());
        for (a, &b) in self.values.iter_mut().zip(&other.values) {
            if b > *a {
                *a = b;
            }
        }
    }
}

/// Closest-segment record for one pixel.
#[derive(Debug, Clone, Copy)]
struct PixelHit {
    seg: u32,
    t: f64,
    dist: f64,
}

/// A rasterized element together with everything needed to push gradients
/// from pixel values back to the element's points.
#[derive(Debug, Clone)]
pub struct RasterizedElement {
    pub raster: SoftRaster,
    points: Vec<Point2>,
    /// Whether the segment list wraps around (polygon rings).
    pub closed: bool,
    sigma: f64,
    /// Half-width of the flat band (polygons); zero for polylines.
    half_band: f64,
    hits: Vec<PixelHit>,
}

impl RasterizedElement {
    /// Chain upstream per-pixel gradients into per-point gradients via the
    /// closest-segment projection. At Voronoi boundaries the lower segment
    /// index wins (a subgradient choice); on the flat band interior the
    /// gradient is zero.
    pub fn grad_points(&self, upstream: &[f64]) -> Vec<(f64, f64)> {
        assert_eq!(upstream.len(), self.raster.values.len());
        let n = self.points.len();
        let mut grad = vec![(0.0, 0.0); n];
        let sigma_sq = self.sigma * self.sigma;
        for (idx, &up) in upstream.iter().enumerate() {
            if up == 0.0 {
                continue;
            }
            let hit = self.hits[idx];
            let d_eff = hit.dist - self.half_band;
            if d_eff <= 0.0 {
                continue; // plateau: value is exactly 1 here
            }
            let value = self.raster.values[idx];
            let p = self.raster.spec.pixel_center(idx / self.raster.width, idx % self.raster.width);
            let a_idx = hit.seg as usize;
            let b_idx = (a_idx + 1) % n;
            let a = self.points[a_idx];
            let b = self.points[b_idx];
            let proj = a + (b - a) * hit.t;
            if hit.dist < 1e-12 {
                continue; // at the curve itself the gradient vanishes
            }
            // d value / d endpoint, via the envelope theorem (t fixed)
            let coef = up * value * d_eff / (sigma_sq * hit.dist);
            let dir = p - proj;
            grad[a_idx].0 += coef * (1.0 - hit.t) * dir.x;
            grad[a_idx].1 += coef * (1.0 - hit.t) * dir.y;
            grad[b_idx].0 += coef * hit.t * dir.x;
            grad[b_idx].1 += coef * hit.t * dir.y;
        }
        grad
    }
}

fn closest_on_segment(p: Point2, a: Point2, b: Point2) -> (f64, f64) {
    let ab = b - a;
    let len_sq = ab.dot(ab);
    let t = if len_sq <= 0.0 {
        0.0
    } else {
        ((p - a).dot(ab) / len_sq).clamp(0.0, 1.0)
    };
    (t, p.dist(a + ab * t))
}

/// Rasterize an element as `exp(-d^2 / (2 sigma^2))` of the distance to the
/// polyline; polygon boundaries are widened to a flat band of `width`
/// meters before the Gaussian falloff.
pub fn soft_rasterize(
    e: &MapElement,
    spec: &BevSpec,
    sigma: f64,
    width: f64,
) -> RasterizedElement {
    debug_assert!(sigma > 0.0);
    let closed = e.kind == ElementKind::Polygon;
    let half_band = if closed { width * 0.5 } else { 0.0 };
    let n = e.points.len();
    let seg_count = if closed { n } else { n - 1 };
    let mut raster = SoftRaster::zeros(*spec);
    let mut hits = Vec::with_capacity(raster.values.len());
    for row in 0..raster.height {
        for col in 0..raster.width {
            let p = spec.pixel_center(row, col);
            let mut best = PixelHit {
                seg: 0,
                t: 0.0,
                dist: f64::INFINITY,
            };
            for seg in 0..seg_count {
                let a = e.points[seg];
                let b = e.points[(seg + 1) % n];
                let (t, dist) = closest_on_segment(p, a, b);
                if dist < best.dist {
                    best = PixelHit {
                        seg: seg as u32,
                        t,
                        dist,
                    };
                }
            }
            let d_eff = (best.dist - half_band).max(0.0);
            raster.values[row * raster.width + col] =
                float::exp(-d_eff * d_eff / (2.0 * sigma * sigma));
            hits.push(best);
        }
    }
    RasterizedElement {
        raster,
        points: e.points.clone(),
        closed,
        sigma,
        half_band,
        hits,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::MapClass;

    fn spec() -> BevSpec {
        BevSpec::new(0.0, 8.0, 0.0, 8.0, 2.0).unwrap()
    }

    fn line(raw: &[(f64, f64)]) -> MapElement {
        MapElement::polyline(
            MapClass::Divider,
            raw.iter().map(|&(x, y)| Point2::new(x, y)).collect(),
            None,
        )
        .unwrap()
    }

    #[test]
    fn on_element_value_is_one() {
        let spec = spec();
        let e = line(&[(0.25, 4.25), (7.75, 4.25)]); // passes through pixel centers
        let r = soft_rasterize(&e, &spec, 0.3, 0.0);
        let p = spec.cell_of(Point2::new(4.25, 4.25)).unwrap();
        assert!((r.raster.values[p.0 * r.raster.width + p.1] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn three_sigma_value() {
        let sigma = 0.5f64;
        let e = line(&[(0.0, 1.0), (8.0, 1.0)]);
        let r = soft_rasterize(&e, &spec(), sigma, 0.0);
        // pixel at y=2.75 is 1.75 m = 3.5 sigma away
        let (row, col) = spec().cell_of(Point2::new(4.25, 2.75)).unwrap();
        let expected = float::exp(-0.5 * float::sq(1.75 / sigma));
        let got = r.raster.values[row * r.raster.width + col];
        assert!((got - expected).abs() < 1e-12);
        // and exp(-4.5) at exactly 3 sigma, checked analytically
        assert!((float::exp(-4.5) - 0.011109).abs() < 1e-6);
    }

    #[test]
    fn polygon_band_plateau() {
        let ring = MapElement::polygon(
            MapClass::PedCrossing,
            alloc::vec![
                Point2::new(2.0, 2.0),
                Point2::new(6.0, 2.0),
                Point2::new(6.0, 6.0),
                Point2::new(2.0, 6.0),
            ],
            None,
        )
        .unwrap();
        let r = soft_rasterize(&ring, &spec(), 0.3, 0.5);
        // pixel centers within 0.25 m of the ring are saturated
        let (row, col) = spec().cell_of(Point2::new(4.25, 2.25)).unwrap();
        assert!((r.raster.values[row * r.raster.width + col] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn values_bounded() {
        let e = line(&[(1.0, 1.0), (3.0, 7.0), (7.0, 5.0)]);
        let r = soft_rasterize(&e, &spec(), 0.4, 0.0);
        for &v in &r.raster.values {
            assert!((0.0..=1.0).contains(&v));
        }
    }

    #[test]
    fn jacobian_matches_finite_differences() {
        let spec = spec();
        let base = [(1.3, 1.7), (4.1, 3.9), (6.7, 6.1)];
        let sigma = 0.6;
        let h = 1e-5;
        let e = line(&base);
        let r = soft_rasterize(&e, &spec, sigma, 0.0);

        // probe a handful of pixels with distinct nearest segments
        let mut rng = crate::rng::SplitMix64::new(3);
        let mut checked = 0;
        while checked < 10 {
            let row = rng.below(r.raster.height);
            let col = rng.below(r.raster.width);
            let idx = row * r.raster.width + col;
            let hit = r.hits[idx];
            if hit.dist < 0.05 || hit.dist > 3.0 * sigma {
                continue;
            }
            // margin from Voronoi boundaries: second-nearest must be
            // clearly farther
            let p = spec.pixel_center(row, col);
            let mut dists: alloc::vec::Vec<f64> = (0..2)
                .map(|s| closest_on_segment(p, e.points[s], e.points[s + 1]).1)
                .collect();
            dists.sort_by(f64::total_cmp);
            if dists[1] - dists[0] < 1e-3 {
                continue;
            }
            // one-hot upstream at this pixel: grad of the pixel value
            let mut upstream = alloc::vec![0.0; r.raster.values.len()];
            upstream[idx] = 1.0;
            let analytic = r.grad_points(&upstream);

            for pi in 0..base.len() {
                for axis in 0..2 {
                    let mut plus = base;
                    let mut minus = base;
                    if axis == 0 {
                        plus[pi].0 += h;
                        minus[pi].0 -= h;
                    } else {
                        plus[pi].1 += h;
                        minus[pi].1 -= h;
                    }
                    let vp = soft_rasterize(&line(&plus), &spec, sigma, 0.0).raster.values[idx];
                    let vm = soft_rasterize(&line(&minus), &spec, sigma, 0.0).raster.values[idx];
                    let fd = (vp - vm) / (2.0 * h);
                    let an = if axis == 0 {
                        analytic[pi].0
                    } else {
                        analytic[pi].1
                    };
                    let denom = float::abs(an).max(float::abs(fd)).max(1e-8);
                    assert!(
                        float::abs(an - fd) / denom < 1e-4 || float::abs(an - fd) < 1e-9,
                        "pixel ({row},{col}) point {pi} axis {axis}: analytic {an} fd {fd}"
                    );
                }
            }
            checked += 1;
        }
    }

    #[test]
    fn closed_flag_tracks_kind() {
        let ring = MapElement::polygon(
            MapClass::PedCrossing,
            alloc::vec![
                Point2::new(2.0, 2.0),
                Point2::new(5.0, 2.0),
                Point2::new(5.0, 5.0),
            ],
            None,
        )
        .unwrap();
        let r = soft_rasterize(&ring, &spec(), 0.3, 0.0);
        assert!(r.closed);
        // the closing edge contributes: a pixel center on the hypotenuse
        // saturates
        let (row, col) = spec().cell_of(Point2::new(3.25, 3.25)).unwrap();
        assert!(r.raster.values[row * r.raster.width + col] > 0.99);
    }
}

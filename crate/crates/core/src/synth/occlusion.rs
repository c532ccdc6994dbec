//! Synthetic occlusion masks and multi-trip aggregation.

use alloc::vec::Vec;

use super::SynthError;
use crate::float;
use crate::geometry::{BevSpec, Point2, Pose2};
use crate::raster::{BevMask, RasterClass, SemanticRaster};
use crate::rng::SplitMix64;
use crate::surfel::SurfelGrid;

#[derive(Debug, Clone, PartialEq)]
pub struct OcclusionParams {
    pub seed: u64,
    /// Number of random occluder disks (parked-car stand-ins).
    pub n_blobs: usize,
    /// Disk radius range in meters.
    pub blob_radius: (f64, f64),
    /// Camera fan opening angle, radians.
    pub frustum_fov: f64,
    /// Camera fan range in meters; may be infinite.
    pub frustum_range: f64,
}

impl Default for OcclusionParams {
    fn default() -> Self {
        Self {
            seed: 0,
            n_blobs: 3,
            blob_radius: (1.0, 2.5),
            frustum_fov: 2.0,
            frustum_range: 35.0,
        }
    }
}

impl OcclusionParams {
    pub fn validate(&self) -> Result<(), SynthError> {
        if !(self.blob_radius.0 > 0.0 && self.blob_radius.1 >= self.blob_radius.0) {
            return Err(SynthError::InvalidParams("blob radii must be positive"));
        }
        if !(self.frustum_fov >= 0.0) || self.frustum_range < 0.0 {
            return Err(SynthError::InvalidParams("frustum parameters must be non-negative"));
        }
        Ok(())
    }
}

/// Observed region: inside the camera fan from `pose` (opening
/// `frustum_fov` about the heading direction, out to `frustum_range`),
/// minus the random occluder disks. Deterministic per seed.
pub fn gen_occlusion(
    params: &OcclusionParams,
    pose: &Pose2,
    spec: &BevSpec,
) -> Result<BevMask, SynthError> {
    params.validate()?;
    let mut rng = SplitMix64::new(params.seed);
    let blobs: Vec<(Point2, f64)> = (0..params.n_blobs)
        .map(|_| {
            let cx = rng.range(spec.x_min, spec.x_max);
            let cy = rng.range(spec.y_min, spec.y_max);
            let r = rng.range(params.blob_radius.0, params.blob_radius.1);
            (Point2::new(cx, cy), r)
        })
        .collect();

    let origin = pose.translation();
    let forward = Point2::new(-float::sin(pose.heading), float::cos(pose.heading));
    let half_fov = params.frustum_fov / 2.0;

    let mut mask = BevMask::all_unobserved(*spec);
    for row in 0..mask.grid.height {
        for col in 0..mask.grid.width {
            let p = spec.pixel_center(row, col);
            let rel = p - origin;
            let dist = rel.norm();
            if dist > params.frustum_range {
                continue;
            }
            if dist > 0.0 {
                let angle = float::atan2(float::abs(rel.cross(forward)), rel.dot(forward));
                if angle > half_fov {
                    continue;
                }
            }
            if blobs.iter().any(|&(c, r)| p.dist(c) <= r) {
                continue;
            }
            mask.grid.set(row, col, true);
        }
    }
    Ok(mask)
}

/// Pixel-wise OR of per-trip masks; they must share one spec.
pub fn multi_trip_union(masks: &[BevMask]) -> Result<BevMask, SynthError> {
    let first = masks.first().ok_or(SynthError::InvalidParams("no masks"))?;
    let mut out = first.clone();
    for m in &masks[1..] {
        if m.spec != first.spec {
            return Err(SynthError::SpecMismatch);
        }
        out.grid.union_with(&m.grid);
    }
    Ok(out)
}

/// Paint a surfel grid from a ground-truth raster: each surfel takes the
/// one-hot class, palette color, and full opacity of the cell under its
/// center (in the raster's ego frame given by `pose`); centers outside or
/// on unobserved cells become transparent. Stands in for the out-of-scope
/// photometric optimization when demonstrating the renderer.
pub fn paint_grid_from_raster(grid: &mut SurfelGrid, raster: &SemanticRaster, pose: &Pose2) {
    for s in grid.surfels.iter_mut() {
        let ego = pose.inverse_transform_point(Point2::new(s.center[0], s.center[1]));
        let class = raster
            .spec
            .cell_of(ego)
            .map(|(r, c)| raster.get(r, c))
            .unwrap_or(RasterClass::Unobserved);
        match class {
            RasterClass::Unobserved => {
                s.opacity = 0.0;
            }
            observable => {
                let idx = RasterClass::OBSERVABLE
                    .iter()
                    .position(|&c| c == observable)
                    .expect("observable class");
                let mut probs = [0.0; 4];
                probs[idx] = 1.0;
                s.class_probs = probs;
                s.opacity = 1.0;
                s.color = class_color(observable);
            }
        }
    }
}

/// Display palette, also used by the CLI's debug renders.
pub fn class_color(class: RasterClass) -> [f64; 3] {
    match class {
        RasterClass::Unobserved => [0.0, 0.0, 0.0],
        RasterClass::Road => [0.45, 0.45, 0.45],
        RasterClass::Outside => [0.65, 0.80, 0.88],
        RasterClass::LaneMarking => [0.13, 0.18, 0.60],
        RasterClass::PedCrossing => [0.25, 0.50, 0.95],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::coverage_ratio;

    fn spec() -> BevSpec {
        BevSpec::new(-10.0, 10.0, -10.0, 10.0, 2.0).unwrap()
    }

    #[test]
    fn full_fov_infinite_range_no_blobs_sees_everything() {
        let params = OcclusionParams {
            n_blobs: 0,
            frustum_fov: 2.0 * core::f64::consts::PI,
            frustum_range: f64::INFINITY,
            ..Default::default()
        };
        let mask = gen_occlusion(&params, &Pose2::identity(), &spec()).unwrap();
        assert_eq!(coverage_ratio(&mask), 1.0);
    }

    #[test]
    fn zero_range_sees_nothing() {
        let params = OcclusionParams {
            n_blobs: 0,
            frustum_fov: 2.0 * core::f64::consts::PI,
            frustum_range: 0.0,
            ..Default::default()
        };
        let mask = gen_occlusion(&params, &Pose2::identity(), &spec()).unwrap();
        assert_eq!(mask.grid.count_ones(), 0);
    }

    #[test]
    fn observed_region_inside_frustum() {
        let params = OcclusionParams {
            seed: 5,
            n_blobs: 4,
            frustum_fov: 1.5,
            frustum_range: 8.0,
            ..Default::default()
        };
        let pose = Pose2::new(0.0, -5.0, 0.2);
        let mask = gen_occlusion(&params, &pose, &spec()).unwrap();
        let unblobbed = gen_occlusion(
            &OcclusionParams {
                n_blobs: 0,
                ..params.clone()
            },
            &pose,
            &spec(),
        )
        .unwrap();
        assert!(mask.grid.subset_of(&unblobbed.grid));
        // frustum geometry: all observed pixels within range and fov
        let forward = Point2::new(-libm::sin(0.2), libm::cos(0.2));
        for (row, col) in mask.grid.iter_set() {
            let rel = spec().pixel_center(row, col) - pose.translation();
            assert!(rel.norm() <= 8.0 + 1e-9);
            let angle = libm::atan2(libm::fabs(rel.cross(forward)), rel.dot(forward));
            assert!(angle <= 0.75 + 1e-9);
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let params = OcclusionParams {
            seed: 12,
            ..Default::default()
        };
        let a = gen_occlusion(&params, &Pose2::identity(), &spec()).unwrap();
        let b = gen_occlusion(&params, &Pose2::identity(), &spec()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn union_algebra() {
        let mk = |seed: u64| {
            gen_occlusion(
                &OcclusionParams {
                    seed,
                    ..Default::default()
                },
                &Pose2::identity(),
                &spec(),
            )
            .unwrap()
        };
        let (a, b, c) = (mk(1), mk(2), mk(3));
        // commutative, associative, idempotent
        assert_eq!(
            multi_trip_union(&[a.clone(), b.clone()]).unwrap(),
            multi_trip_union(&[b.clone(), a.clone()]).unwrap()
        );
        assert_eq!(
            multi_trip_union(&[multi_trip_union(&[a.clone(), b.clone()]).unwrap(), c.clone()])
                .unwrap(),
            multi_trip_union(&[a.clone(), multi_trip_union(&[b.clone(), c.clone()]).unwrap()])
                .unwrap()
        );
        assert_eq!(multi_trip_union(&[a.clone(), a.clone()]).unwrap(), a);
        // union coverage dominates each input
        let u = multi_trip_union(&[a.clone(), b.clone(), c.clone()]).unwrap();
        for m in [&a, &b, &c] {
            assert!(coverage_ratio(&u) >= coverage_ratio(m));
            assert!(m.grid.subset_of(&u.grid));
        }
    }

    #[test]
    fn complementary_halves_cover_everything() {
        let spec = spec();
        let mut left = BevMask::all_unobserved(spec);
        let mut right = BevMask::all_unobserved(spec);
        for row in 0..left.grid.height {
            for col in 0..left.grid.width {
                if col < left.grid.width / 2 {
                    left.grid.set(row, col, true);
                } else {
                    right.grid.set(row, col, true);
                }
            }
        }
        let u = multi_trip_union(&[left, right]).unwrap();
        assert_eq!(coverage_ratio(&u), 1.0);
    }

    #[test]
    fn spec_mismatch_rejected() {
        let a = BevMask::all_observed(spec());
        let other = BevSpec::new(-5.0, 5.0, -5.0, 5.0, 2.0).unwrap();
        let b = BevMask::all_observed(other);
        assert_eq!(multi_trip_union(&[a, b]).unwrap_err(), SynthError::SpecMismatch);
    }
}

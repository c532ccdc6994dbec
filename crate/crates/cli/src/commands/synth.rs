//! `synth`: generate a seeded synthetic scene with rasters and per-trip
//! occlusion masks.

use std::path::PathBuf;

use clap::Args;
use pseudomap_core::geometry::{Pose2, TAU};
use pseudomap_core::rng::SplitMix64;
use pseudomap_core::surfel::{init_meshgrid, TimedPose, Trajectory};
use pseudomap_core::synth::{
    gen_occlusion, gen_scene, multi_trip_union, paint_grid_from_raster, rasterize_gt,
};
use serde::Serialize;

use super::Ctx;
use crate::debug_render::save_debug_png;
use crate::error::{CliError, CliResult};
use crate::formats::raster_pgm::{write_mask, write_raster};
use crate::formats::surfel_json::write_surfel_grid;
use crate::formats::vector_json::write_vector_map;
use crate::io_util::{atomic_write, to_json_bytes};

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub lanes: Option<usize>,
    #[arg(long)]
    pub lane_width: Option<f64>,
    #[arg(long)]
    pub curvature: Option<f64>,
    #[arg(long)]
    pub crossings: Option<usize>,
    #[arg(long)]
    pub dash_on: Option<f64>,
    #[arg(long)]
    pub dash_off: Option<f64>,
    /// Camera fan opening angle in radians.
    #[arg(long)]
    pub fov: Option<f64>,
    /// Camera fan range in meters.
    #[arg(long)]
    pub range: Option<f64>,
    #[arg(long)]
    pub blobs: Option<usize>,
    /// Number of trips; each trip gets its own occlusion mask.
    #[arg(long)]
    pub trips: Option<usize>,
    /// Raster resolution override, px/m.
    #[arg(long)]
    pub resolution: Option<f64>,
    /// Also emit a surfel grid painted from the ground-truth raster.
    #[arg(long)]
    pub emit_grid: bool,
    #[arg(long)]
    pub out_dir: PathBuf,
    /// Write colorized debug PNGs here.
    #[arg(long)]
    pub debug_dir: Option<PathBuf>,
}

#[derive(Serialize)]
struct Manifest {
    seed: u64,
    frame: String,
    gt: String,
    raster: String,
    raster_meta: String,
    masks: Vec<String>,
    union_mask: String,
    surfels: Option<String>,
}

pub fn run(args: &SynthArgs, ctx: &Ctx) -> CliResult<()> {
    let mut synth_cfg = ctx.config.synth.clone();
    if let Some(v) = args.lanes {
        synth_cfg.lanes = v;
    }
    if let Some(v) = args.lane_width {
        synth_cfg.lane_width_m = v;
    }
    if let Some(v) = args.curvature {
        synth_cfg.curvature = v;
    }
    if let Some(v) = args.crossings {
        synth_cfg.crossings = v;
    }
    if let Some(v) = args.dash_on {
        synth_cfg.dash_on_m = v;
    }
    if let Some(v) = args.dash_off {
        synth_cfg.dash_off_m = v;
    }
    if let Some(v) = args.fov {
        synth_cfg.fov_rad = v;
    }
    if let Some(v) = args.range {
        synth_cfg.range_m = v;
    }
    if let Some(v) = args.blobs {
        synth_cfg.blobs = v;
    }
    let trips = args.trips.unwrap_or(synth_cfg.trips).max(1);

    let mut bev = ctx.config.bev.clone();
    if let Some(r) = args.resolution {
        bev.resolution = r;
    }
    let spec = bev.to_spec()?;

    let scene_params = synth_cfg.scene_params(args.seed);
    let map = ctx.stage("gen_scene", || gen_scene(&scene_params, &spec));
    let map = map.map_err(|e| CliError::validation(e.to_string()))?;

    let raster = ctx.stage("rasterize_gt", || {
        rasterize_gt(
            &map,
            &spec,
            scene_params.dash_pattern,
            synth_cfg.marking_width_m,
        )
    });

    // per-trip occlusion: rotate the camera fan between trips so unions
    // genuinely grow
    let mut trip_seed_rng = SplitMix64::new(args.seed ^ 0xA5A5_5A5A_C3C3_3C3C);
    let trip_seeds: Vec<u64> = (0..trips).map(|_| trip_seed_rng.next_u64()).collect();
    let masks = ctx.stage("gen_occlusion", || -> CliResult<Vec<_>> {
        (0..trips)
            .map(|k| {
                let heading = if trips > 1 { TAU * k as f64 / trips as f64 } else { 0.0 };
                let pose = Pose2::new(0.0, 0.0, heading);
                gen_occlusion(&synth_cfg.occlusion_params(trip_seeds[k]), &pose, &spec)
                    .map_err(|e| CliError::validation(e.to_string()))
            })
            .collect()
    })?;
    let union = multi_trip_union(&masks).map_err(|e| CliError::validation(e.to_string()))?;

    let dir = &args.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(format!("creating {}", dir.display()), e))?;
    write_vector_map(&dir.join("gt.json"), &map)?;
    write_raster(&dir.join("raster.pgm"), &raster)?;
    let mut mask_files = Vec::new();
    for (k, mask) in masks.iter().enumerate() {
        let name = format!("mask_trip{k}.pgm");
        write_mask(&dir.join(&name), mask)?;
        mask_files.push(name);
    }
    write_mask(&dir.join("mask_union.pgm"), &union)?;

    let surfels_file = if args.emit_grid {
        // trajectory along the corridor spine, enough to cover the range
        let samples: Vec<TimedPose> = (0..=12)
            .map(|k| TimedPose {
                time: k as f64,
                pose: Pose2::new(0.0, spec.y_min + (spec.y_max - spec.y_min) * k as f64 / 12.0, 0.0),
            })
            .collect();
        let traj = Trajectory::new(samples).expect("monotone timestamps");
        let mut grid = ctx.stage("init_meshgrid", || {
            init_meshgrid(&traj, ctx.config.render.offset_r_m, ctx.config.render.spacing_m)
        });
        paint_grid_from_raster(&mut grid, &raster, &Pose2::identity());
        write_surfel_grid(&dir.join("surfels.json"), &grid)?;
        Some("surfels.json".to_string())
    } else {
        None
    };

    let manifest = Manifest {
        seed: args.seed,
        frame: map.frame.clone(),
        gt: "gt.json".into(),
        raster: "raster.pgm".into(),
        raster_meta: "raster.meta.json".into(),
        masks: mask_files,
        union_mask: "mask_union.pgm".into(),
        surfels: surfels_file,
    };
    atomic_write(&dir.join("manifest.json"), &to_json_bytes(&manifest))?;

    if let Some(debug_dir) = &args.debug_dir {
        std::fs::create_dir_all(debug_dir)
            .map_err(|e| CliError::io(format!("creating {}", debug_dir.display()), e))?;
        save_debug_png(&debug_dir.join(format!("synth-{}.png", args.seed)), &raster, Some(&map))?;
    }
    Ok(())
}

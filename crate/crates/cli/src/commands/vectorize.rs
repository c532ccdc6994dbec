//! `vectorize`: raster to vector map pseudo-labels.

use std::path::PathBuf;

use clap::Args;
use pseudomap_core::vectorize::vectorize_bev;

use super::Ctx;
use crate::debug_render::save_debug_png;
use crate::error::{CliError, CliResult};
use crate::formats::raster_pgm::{read_raster, write_mask};
use crate::formats::vector_json::write_vector_map;

#[derive(Debug, Args)]
pub struct VectorizeArgs {
    /// Input class raster (PGM with meta sidecar).
    #[arg(long)]
    pub raster: PathBuf,
    /// Output vector map JSON.
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the observed-area mask.
    #[arg(long)]
    pub mask_out: Option<PathBuf>,
    /// Frame identifier (default: raster file stem).
    #[arg(long)]
    pub frame: Option<String>,
    #[arg(long)]
    pub rdp_eps: Option<f64>,
    #[arg(long)]
    pub max_points: Option<usize>,
    /// Lane-connection dilation kernel size, pixels (odd).
    #[arg(long)]
    pub kernel_size: Option<usize>,
    /// Boundary smoothing kernel size, pixels (odd).
    #[arg(long)]
    pub smooth_size: Option<usize>,
    #[arg(long)]
    pub min_area: Option<usize>,
    #[arg(long)]
    pub thick_max: Option<usize>,
    #[arg(long)]
    pub min_branch: Option<usize>,
    #[arg(long)]
    pub margin: Option<f64>,
    #[arg(long)]
    pub gate_distance: Option<f64>,
    #[arg(long)]
    pub gate_angle_deg: Option<f64>,
    #[arg(long)]
    pub debug_dir: Option<PathBuf>,
}

pub fn run(args: &VectorizeArgs, ctx: &Ctx) -> CliResult<()> {
    let mut cfg = ctx.config.vectorize.clone();
    if let Some(v) = args.rdp_eps {
        cfg.rdp_eps_m = v;
    }
    if let Some(v) = args.max_points {
        cfg.max_points = v;
    }
    if let Some(v) = args.kernel_size {
        cfg.lane_kernel.size = v;
    }
    if let Some(v) = args.smooth_size {
        cfg.smooth_kernel.size = v;
    }
    if let Some(v) = args.min_area {
        cfg.min_area_px = v;
    }
    if let Some(v) = args.thick_max {
        cfg.thick_max_px = v;
    }
    if let Some(v) = args.min_branch {
        cfg.min_branch_px = v;
    }
    if let Some(v) = args.margin {
        cfg.margin_m = v;
    }
    if let Some(v) = args.gate_distance {
        cfg.divider_gate_distance_m = v;
    }
    if let Some(v) = args.gate_angle_deg {
        cfg.divider_gate_angle_deg = v;
    }
    let params = cfg.to_core()?;

    let raster = ctx.stage("read_raster", || read_raster(&args.raster))?;
    let (mut map, mask) = ctx.stage("vectorize_bev", || vectorize_bev(&raster, &params));
    map.frame = args.frame.clone().unwrap_or_else(|| {
        args.raster
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default()
    });

    write_vector_map(&args.out, &map)?;
    if let Some(path) = &args.mask_out {
        write_mask(path, &mask)?;
    }
    if let Some(debug_dir) = &args.debug_dir {
        std::fs::create_dir_all(debug_dir)
            .map_err(|e| CliError::io(format!("creating {}", debug_dir.display()), e))?;
        save_debug_png(&debug_dir.join(format!("{}.png", map.frame)), &raster, Some(&map))?;
    }
    Ok(())
}

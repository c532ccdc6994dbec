//! `render`: orthographic BEV rendering of a surfel grid.

use std::path::PathBuf;

use clap::Args;
use pseudomap_core::surfel::{init_meshgrid, render_bev};

use super::{parse_pose, Ctx};
use crate::debug_render::save_debug_png;
use crate::error::{CliError, CliResult};
use crate::formats::raster_pgm::write_raster;
use crate::formats::surfel_json::{read_surfel_grid, read_trajectory, write_surfel_grid};

#[derive(Debug, Args)]
pub struct RenderArgs {
    /// Surfel grid JSON to render.
    #[arg(long, conflicts_with = "trajectory")]
    pub grid: Option<PathBuf>,
    /// Trajectory JSON; a fresh meshgrid is initialized along it.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Meshgrid half-extent around each pose, meters.
    #[arg(long)]
    pub offset_r: Option<f64>,
    /// Meshgrid pitch, meters.
    #[arg(long)]
    pub spacing: Option<f64>,
    /// Write the (initialized) grid here.
    #[arg(long)]
    pub save_grid: Option<PathBuf>,
    /// Camera pose "x,y,heading" in the grid frame.
    #[arg(long, default_value = "0,0,0")]
    pub pose: String,
    #[arg(long)]
    pub resolution: Option<f64>,
    #[arg(long)]
    pub alpha_min: Option<f64>,
    /// Output class raster (PGM + meta sidecar).
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub debug_dir: Option<PathBuf>,
}

pub fn run(args: &RenderArgs, ctx: &Ctx) -> CliResult<()> {
    let grid = match (&args.grid, &args.trajectory) {
        (Some(path), None) => read_surfel_grid(path)?,
        (None, Some(path)) => {
            let traj = read_trajectory(path)?;
            let offset = args.offset_r.unwrap_or(ctx.config.render.offset_r_m);
            let spacing = args.spacing.unwrap_or(ctx.config.render.spacing_m);
            if !(offset > 0.0 && spacing > 0.0) {
                return Err(CliError::validation("offset-r and spacing must be positive"));
            }
            ctx.stage("init_meshgrid", || init_meshgrid(&traj, offset, spacing))
        }
        _ => {
            return Err(CliError::validation(
                "provide exactly one of --grid or --trajectory",
            ))
        }
    };
    if let Some(path) = &args.save_grid {
        write_surfel_grid(path, &grid)?;
    }

    let pose = parse_pose(&args.pose)?;
    let mut bev = ctx.config.bev.clone();
    if let Some(r) = args.resolution {
        bev.resolution = r;
    }
    let spec = bev.to_spec()?;
    let mut opts = ctx.config.render.options();
    if let Some(a) = args.alpha_min {
        opts.alpha_min = a;
    }

    let out = ctx.stage("render_bev", || render_bev(&grid, &pose, &spec, &opts));
    write_raster(&args.out, &out.classes)?;

    if let Some(debug_dir) = &args.debug_dir {
        std::fs::create_dir_all(debug_dir)
            .map_err(|e| CliError::io(format!("creating {}", debug_dir.display()), e))?;
        let stem = args
            .out
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| "render".into());
        save_debug_png(&debug_dir.join(format!("{stem}.png")), &out.classes, None)?;
    }
    Ok(())
}

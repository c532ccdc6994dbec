//! `assign`: solve the mask-aware global matching.

use std::path::PathBuf;

use clap::Args;
use pseudomap_core::assign::solve_global;

use super::Ctx;
use crate::error::CliResult;
use crate::formats::assignment_json::write_assignment;
use crate::formats::raster_pgm::read_mask;
use crate::formats::vector_json::read_vector_map;

#[derive(Debug, Args)]
pub struct AssignArgs {
    /// Predictions JSON (elements carry confidences).
    #[arg(long)]
    pub preds: PathBuf,
    /// Pseudo-label JSON.
    #[arg(long)]
    pub labels: PathBuf,
    /// Observability mask PGM.
    #[arg(long)]
    pub mask: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub w_cls: Option<f64>,
    #[arg(long)]
    pub w_pt: Option<f64>,
    #[arg(long)]
    pub w_rend: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long)]
    pub cost_resolution: Option<f64>,
    #[arg(long)]
    pub resample_len: Option<usize>,
    #[arg(long)]
    pub max_card: Option<usize>,
    #[arg(long)]
    pub spatial_gate: Option<f64>,
    /// Disable the spatial subset gate.
    #[arg(long)]
    pub ungated: bool,
    #[arg(long)]
    pub subset_budget: Option<usize>,
}

pub fn run(args: &AssignArgs, ctx: &Ctx) -> CliResult<()> {
    let mut cfg = ctx.config.assign.clone();
    if let Some(v) = args.w_cls {
        cfg.w_cls = v;
    }
    if let Some(v) = args.w_pt {
        cfg.w_pt = v;
    }
    if let Some(v) = args.w_rend {
        cfg.w_rend = v;
    }
    if let Some(v) = args.sigma {
        cfg.sigma_m = v;
    }
    if let Some(v) = args.cost_resolution {
        cfg.cost_resolution = v;
    }
    if let Some(v) = args.resample_len {
        cfg.resample_len = v;
    }
    if let Some(v) = args.max_card {
        cfg.max_card = Some(v);
    }
    if let Some(v) = args.spatial_gate {
        cfg.spatial_gate_m = Some(v);
    }
    if args.ungated {
        cfg.spatial_gate_m = None;
    }
    if let Some(v) = args.subset_budget {
        cfg.subset_budget = v;
    }
    let params = cfg.to_core()?;

    let preds = ctx.stage("read_preds", || read_vector_map(&args.preds))?;
    let labels = ctx.stage("read_labels", || read_vector_map(&args.labels))?;
    let mask = ctx.stage("read_mask", || read_mask(&args.mask))?;

    let result = ctx.stage("solve_global", || solve_global(&preds, &labels, &mask, &params))?;
    write_assignment(&args.out, &result)
}

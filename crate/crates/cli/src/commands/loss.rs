//! `loss`: evaluate the mask-aware losses for a solved assignment.

use std::path::PathBuf;

use clap::Args;
use pseudomap_core::assign::AssignOutcome;
use pseudomap_core::loss::{compute_loss_parts, total_loss};

use super::Ctx;
use crate::error::{CliError, CliResult};
use crate::formats::assignment_json::read_assignment;
use crate::formats::loss_json::write_loss;
use crate::formats::raster_pgm::read_mask;
use crate::formats::vector_json::read_vector_map;

#[derive(Debug, Args)]
pub struct LossArgs {
    #[arg(long)]
    pub preds: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long)]
    pub mask: PathBuf,
    /// Assignment JSON produced by `assign`.
    #[arg(long)]
    pub assignment: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Include the gradient dump in the output.
    #[arg(long)]
    pub grad: bool,
    #[arg(long)]
    pub w_cls: Option<f64>,
    #[arg(long)]
    pub w_pt: Option<f64>,
    #[arg(long)]
    pub w_rend: Option<f64>,
    #[arg(long)]
    pub w_dir: Option<f64>,
    #[arg(long)]
    pub w_bev_seg: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
}

pub fn run(args: &LossArgs, ctx: &Ctx) -> CliResult<()> {
    let mut cfg = ctx.config.loss.clone();
    if let Some(v) = args.w_cls {
        cfg.w_cls = v;
    }
    if let Some(v) = args.w_pt {
        cfg.w_pt = v;
    }
    if let Some(v) = args.w_rend {
        cfg.w_rend = v;
    }
    if let Some(v) = args.w_dir {
        cfg.w_dir = v;
    }
    if let Some(v) = args.w_bev_seg {
        cfg.w_bev_seg = v;
    }
    if let Some(v) = args.sigma {
        cfg.sigma_m = v;
    }
    let weights = cfg.weights()?;
    let loss_cfg = cfg.to_core()?;

    let preds = ctx.stage("read_preds", || read_vector_map(&args.preds))?;
    let labels = ctx.stage("read_labels", || read_vector_map(&args.labels))?;
    let mask = ctx.stage("read_mask", || read_mask(&args.mask))?;
    let assignment_dto = read_assignment(&args.assignment)?;
    let assignment = assignment_dto.to_core(preds.elements.len());

    // referenced indices must exist
    for outcome in &assignment.outcomes {
        let out_of_range = match outcome {
            AssignOutcome::OneToOne { label, .. } => *label >= labels.elements.len(),
            AssignOutcome::OneToMany { labels: ls, .. } => {
                ls.iter().any(|&j| j >= labels.elements.len())
            }
            AssignOutcome::Unassigned => false,
        };
        if out_of_range {
            return Err(CliError::validation(
                "assignment references a label index outside the label map",
            ));
        }
    }

    let parts = ctx.stage("compute_loss", || {
        compute_loss_parts(&preds, &labels, &mask, &assignment, &loss_cfg)
    })
    .map_err(|e| CliError::validation(e.to_string()))?;
    let breakdown = total_loss(&parts, &weights);
    write_loss(&args.out, &breakdown, args.grad)?;
    println!("{:.6}", breakdown.total);
    Ok(())
}

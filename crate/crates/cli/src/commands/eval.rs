//! `eval`: Chamfer-AP evaluation over directories of prediction and
//! ground-truth maps paired by filename.

use std::path::PathBuf;

use clap::Args;
use pseudomap_core::metrics::{chamfer_ap, mask_gt};
use rayon::prelude::*;

use super::{list_files, Ctx};
use crate::error::{CliError, CliResult};
use crate::formats::raster_pgm::read_mask;
use crate::formats::report_json::{write_report, write_report_csv};
use crate::formats::vector_json::read_vector_map;

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[arg(long)]
    pub preds_dir: PathBuf,
    #[arg(long)]
    pub gts_dir: PathBuf,
    /// Mask PGMs paired by file stem, required with --observed-only.
    #[arg(long)]
    pub masks_dir: Option<PathBuf>,
    /// Restrict evaluation to observed areas by masking the ground truth.
    #[arg(long)]
    pub observed_only: bool,
    #[arg(long)]
    pub out: PathBuf,
    /// Also write the class-columns CSV table.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// Comma-separated Chamfer thresholds in meters.
    #[arg(long)]
    pub thresholds: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
}

pub fn run(args: &EvalArgs, ctx: &Ctx) -> CliResult<()> {
    let mut cfg = ctx.config.eval.clone();
    if let Some(text) = &args.thresholds {
        let parsed: Result<Vec<f64>, _> = text.split(',').map(|t| t.trim().parse()).collect();
        cfg.thresholds_m =
            parsed.map_err(|_| CliError::validation(format!("bad thresholds \"{text}\"")))?;
    }
    if let Some(s) = args.samples {
        cfg.chamfer_samples = s;
    }
    let ap_cfg = cfg.to_core()?;

    if args.observed_only && args.masks_dir.is_none() {
        return Err(CliError::validation("--observed-only requires --masks-dir"));
    }

    let pred_files = list_files(&args.preds_dir, "json")?;
    if pred_files.is_empty() {
        return Err(CliError::validation(format!(
            "no prediction maps in {}",
            args.preds_dir.display()
        )));
    }

    let min_run_points = ctx.config.assign.min_run_points;
    let pairs: Vec<CliResult<_>> = ctx.stage("load_frames", || {
        pred_files
            .par_iter()
            .map(|pred_path| {
                let name = pred_path.file_name().expect("listed file has a name");
                let gt_path = args.gts_dir.join(name);
                let pred = read_vector_map(pred_path)?;
                let mut gt = read_vector_map(&gt_path)?;
                if args.observed_only {
                    let stem = pred_path
                        .file_stem()
                        .map(|s| s.to_string_lossy().into_owned())
                        .unwrap_or_default();
                    let mask_path = args
                        .masks_dir
                        .as_ref()
                        .expect("checked above")
                        .join(format!("{stem}.pgm"));
                    let mask = read_mask(&mask_path)?;
                    gt = mask_gt(&gt, &mask, min_run_points);
                }
                Ok((pred, gt))
            })
            .collect()
    });
    let mut preds = Vec::with_capacity(pairs.len());
    let mut gts = Vec::with_capacity(pairs.len());
    for pair in pairs {
        let (p, g) = pair?;
        preds.push(p);
        gts.push(g);
    }

    let report = ctx.stage("chamfer_ap", || chamfer_ap(&preds, &gts, &ap_cfg));
    let report = report.map_err(|e| CliError::validation(e.to_string()))?;

    write_report(&args.out, &report)?;
    if let Some(csv_path) = &args.csv {
        write_report_csv(csv_path, &report)?;
    }
    println!("{:.4}", report.mean_ap);
    Ok(())
}

//! `coverage`: coverage ratios, the sample filter, and coverage curves.

use std::path::PathBuf;

use clap::Args;
use pseudomap_core::metrics::{coverage_curve, coverage_ratio};
use rayon::prelude::*;
use serde::Serialize;

use super::{list_files, Ctx};
use crate::error::{CliError, CliResult};
use crate::formats::raster_pgm::read_mask;
use crate::io_util::{atomic_write, to_json_bytes};

#[derive(Debug, Args)]
pub struct CoverageArgs {
    /// Directory of mask PGMs.
    #[arg(long)]
    pub masks_dir: PathBuf,
    /// Filter threshold; prints the fraction of samples above it.
    #[arg(long)]
    pub tau: Option<f64>,
    /// Comma-separated thresholds for a coverage curve.
    #[arg(long)]
    pub curve: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Serialize)]
struct SampleCoverage {
    file: String,
    coverage: f64,
    passes: bool,
}

#[derive(Serialize)]
struct CurvePoint {
    tau: f64,
    fraction: f64,
}

#[derive(Serialize)]
struct CoverageReport {
    tau: f64,
    fraction_above: f64,
    mean_coverage: f64,
    samples: Vec<SampleCoverage>,
    #[serde(skip_serializing_if = "Option::is_none")]
    curve: Option<Vec<CurvePoint>>,
}

pub fn run(args: &CoverageArgs, ctx: &Ctx) -> CliResult<()> {
    let tau = args.tau.unwrap_or(ctx.config.coverage.tau);
    if !(0.0..=1.0).contains(&tau) {
        return Err(CliError::validation("tau must lie in [0, 1]"));
    }
    let files = list_files(&args.masks_dir, "pgm")?;
    if files.is_empty() {
        return Err(CliError::validation(format!(
            "no masks in {}",
            args.masks_dir.display()
        )));
    }
    let masks: Vec<_> = ctx.stage("load_masks", || {
        files
            .par_iter()
            .map(|path| read_mask(path))
            .collect::<Vec<CliResult<_>>>()
    });
    let masks: Vec<_> = masks.into_iter().collect::<CliResult<Vec<_>>>()?;

    let ratios: Vec<f64> = masks.iter().map(coverage_ratio).collect();
    let above = ratios.iter().filter(|&&m| m > tau).count();
    let fraction = above as f64 / ratios.len() as f64;

    let curve = match &args.curve {
        Some(text) => {
            let taus: Result<Vec<f64>, _> = text.split(',').map(|t| t.trim().parse()).collect();
            let taus =
                taus.map_err(|_| CliError::validation(format!("bad curve thresholds \"{text}\"")))?;
            let fractions = coverage_curve(&masks, &taus);
            Some(
                taus.into_iter()
                    .zip(fractions)
                    .map(|(tau, fraction)| CurvePoint { tau, fraction })
                    .collect(),
            )
        }
        None => None,
    };

    if let Some(out) = &args.out {
        let report = CoverageReport {
            tau,
            fraction_above: fraction,
            mean_coverage: ratios.iter().sum::<f64>() / ratios.len() as f64,
            samples: files
                .iter()
                .zip(&ratios)
                .map(|(f, &coverage)| SampleCoverage {
                    file: f
                        .file_name()
                        .map(|n| n.to_string_lossy().into_owned())
                        .unwrap_or_default(),
                    coverage,
                    passes: coverage > tau,
                })
                .collect(),
            curve,
        };
        atomic_write(out, &to_json_bytes(&report))?;
    }
    println!("{fraction:.2}");
    Ok(())
}

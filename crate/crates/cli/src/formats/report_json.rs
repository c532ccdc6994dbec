//! Evaluation report JSON and the class-columns CSV table.

use std::path::Path;

use pseudomap_core::metrics::EvalReport;
use serde::{Deserialize, Serialize};

use crate::error::CliResult;
use crate::io_util::{atomic_write, to_json_bytes};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CountsDto {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub missed: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ClassReportDto {
    pub class: String,
    pub ap_per_threshold: Vec<f64>,
    pub mean_ap: f64,
    pub counts: Vec<CountsDto>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct EvalReportDto {
    pub thresholds: Vec<f64>,
    pub classes: Vec<ClassReportDto>,
    pub mean_ap: f64,
}

impl EvalReportDto {
    pub fn from_core(report: &EvalReport) -> Self {
        Self {
            thresholds: report.thresholds.clone(),
            classes: report
                .per_class
                .iter()
                .map(|c| ClassReportDto {
                    class: c.class.as_str().to_string(),
                    ap_per_threshold: c.ap_per_threshold.clone(),
                    mean_ap: c.mean_ap,
                    counts: c
                        .counts
                        .iter()
                        .map(|m| CountsDto {
                            tp: m.tp,
                            fp: m.fp,
                            missed: m.missed,
                        })
                        .collect(),
                })
                .collect(),
            mean_ap: report.mean_ap,
        }
    }
}

pub fn write_report(path: &Path, report: &EvalReport) -> CliResult<()> {
    atomic_write(path, &to_json_bytes(&EvalReportDto::from_core(report)))
}

/// One row per threshold plus a mean row, with the class columns in the
/// conventional order: ped. / div. / bdry. / mean.
pub fn report_csv(report: &EvalReport) -> String {
    let mut out = String::from("threshold,ped_crossing,divider,boundary,mean\n");
    for (ti, tau) in report.thresholds.iter().enumerate() {
        let aps: Vec<f64> = report
            .per_class
            .iter()
            .map(|c| c.ap_per_threshold[ti])
            .collect();
        let mean = aps.iter().sum::<f64>() / aps.len() as f64;
        out.push_str(&format!(
            "{tau},{:.4},{:.4},{:.4},{:.4}\n",
            aps[0], aps[1], aps[2], mean
        ));
    }
    let means: Vec<f64> = report.per_class.iter().map(|c| c.mean_ap).collect();
    out.push_str(&format!(
        "mean,{:.4},{:.4},{:.4},{:.4}\n",
        means[0], means[1], means[2], report.mean_ap
    ));
    out
}

pub fn write_report_csv(path: &Path, report: &EvalReport) -> CliResult<()> {
    atomic_write(path, report_csv(report).as_bytes())
}

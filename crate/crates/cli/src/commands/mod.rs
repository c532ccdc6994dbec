//! Subcommand implementations.

pub mod assign;
pub mod config_cmd;
pub mod coverage;
pub mod eval;
pub mod loss;
pub mod render;
pub mod synth;
pub mod vectorize;

use std::time::Instant;

use crate::config::PipelineConfig;

/// Shared command context: effective config plus timing output.
pub struct Ctx {
    pub config: PipelineConfig,
    pub verbose: bool,
}

impl Ctx {
    pub fn stage<T>(&self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.verbose {
            eprintln!("[time] {name}: {:.1?}", start.elapsed());
        }
        out
    }
}

/// Parse "x,y,heading" into a pose.
pub fn parse_pose(text: &str) -> crate::error::CliResult<pseudomap_core::geometry::Pose2> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 3 {
        return Err(crate::error::CliError::validation(format!(
            "pose must be \"x,y,heading\", got \"{text}\""
        )));
    }
    let mut vals = [0.0f64; 3];
    for (v, p) in vals.iter_mut().zip(&parts) {
        *v = p
            .trim()
            .parse()
            .map_err(|_| crate::error::CliError::validation(format!("bad pose component \"{p}\"")))?;
    }
    Ok(pseudomap_core::geometry::Pose2::new(vals[0], vals[1], vals[2]))
}

/// Sorted listing of files in `dir` with the given extension.
pub fn list_files(
    dir: &std::path::Path,
    extension: &str,
) -> crate::error::CliResult<Vec<std::path::PathBuf>> {
    let entries = std::fs::read_dir(dir)
        .map_err(|e| crate::error::CliError::io(format!("listing {}", dir.display()), e))?;
    let mut files: Vec<std::path::PathBuf> = entries
        .filter_map(|e| e.ok())
        .map(|e| e.path())
        .filter(|p| p.extension().map(|x| x == extension).unwrap_or(false))
        .filter(|p| {
            // skip meta sidecars when listing pgm/json payloads
            !p.file_name()
                .map(|n| n.to_string_lossy().ends_with(".meta.json"))
                .unwrap_or(false)
        })
        .collect();
    files.sort();
    Ok(files)
}

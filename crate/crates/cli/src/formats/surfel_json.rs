//! JSON schemas for surfel grids and timed trajectories.

use std::path::Path;

use pseudomap_core::geometry::Pose2;
use pseudomap_core::surfel::{Quat, Surfel, SurfelGrid, TimedPose, Trajectory};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io_util::{atomic_write, parse_json, read_string, to_json_bytes};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PoseDto {
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

impl PoseDto {
    pub fn to_core(&self) -> Pose2 {
        Pose2::new(self.x, self.y, self.heading)
    }

    pub fn from_core(p: &Pose2) -> Self {
        Self {
            x: p.x,
            y: p.y,
            heading: p.heading,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfelDto {
    pub center: [f64; 3],
    /// Unit quaternion `[w, x, y, z]`.
    pub rotation: [f64; 4],
    pub scale: [f64; 2],
    pub opacity: f64,
    pub color: [f64; 3],
    pub class_probs: [f64; 4],
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurfelGridDto {
    pub surfels: Vec<SurfelDto>,
    pub spacing: f64,
    pub source_trajectory: Vec<PoseDto>,
}

impl SurfelGridDto {
    pub fn to_core(&self) -> CliResult<SurfelGrid> {
        if !(self.spacing > 0.0) {
            return Err(CliError::validation("surfel grid spacing must be positive"));
        }
        let surfels: Vec<Surfel> = self
            .surfels
            .iter()
            .map(|s| Surfel {
                center: s.center,
                rotation: Quat {
                    w: s.rotation[0],
                    x: s.rotation[1],
                    y: s.rotation[2],
                    z: s.rotation[3],
                },
                scale: (s.scale[0], s.scale[1]),
                opacity: s.opacity,
                color: s.color,
                class_probs: s.class_probs,
            })
            .collect();
        for (i, s) in surfels.iter().enumerate() {
            s.validate()
                .map_err(|e| CliError::validation(format!("surfel {i}: {e}")))?;
        }
        if surfels.is_empty() {
            return Err(CliError::validation("surfel grid is empty"));
        }
        Ok(SurfelGrid {
            surfels,
            spacing: self.spacing,
            source_trajectory: self.source_trajectory.iter().map(|p| p.to_core()).collect(),
        })
    }

    pub fn from_core(grid: &SurfelGrid) -> Self {
        Self {
            surfels: grid
                .surfels
                .iter()
                .map(|s| SurfelDto {
                    center: s.center,
                    rotation: [s.rotation.w, s.rotation.x, s.rotation.y, s.rotation.z],
                    scale: [s.scale.0, s.scale.1],
                    opacity: s.opacity,
                    color: s.color,
                    class_probs: s.class_probs,
                })
                .collect(),
            spacing: grid.spacing,
            source_trajectory: grid
                .source_trajectory
                .iter()
                .map(PoseDto::from_core)
                .collect(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimedPoseDto {
    pub time: f64,
    pub x: f64,
    pub y: f64,
    pub heading: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrajectoryDto {
    pub poses: Vec<TimedPoseDto>,
}

impl TrajectoryDto {
    pub fn to_core(&self) -> CliResult<Trajectory> {
        let samples: Vec<TimedPose> = self
            .poses
            .iter()
            .map(|p| TimedPose {
                time: p.time,
                pose: Pose2::new(p.x, p.y, p.heading),
            })
            .collect();
        Trajectory::new(samples).map_err(|e| CliError::validation(e.to_string()))
    }
}

pub fn read_surfel_grid(path: &Path) -> CliResult<SurfelGrid> {
    let text = read_string(path)?;
    let dto: SurfelGridDto = parse_json(path, &text)?;
    dto.to_core()
}

pub fn write_surfel_grid(path: &Path, grid: &SurfelGrid) -> CliResult<()> {
    atomic_write(path, &to_json_bytes(&SurfelGridDto::from_core(grid)))
}

pub fn read_trajectory(path: &Path) -> CliResult<Trajectory> {
    let text = read_string(path)?;
    let dto: TrajectoryDto = parse_json(path, &text)?;
    dto.to_core()
}

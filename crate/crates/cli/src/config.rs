//! Pipeline configuration: one JSON document holding every tunable, with
//! defaults matching the library. Flags override config values; the
//! `PSEUDOMAP_CONFIG` environment variable or `--config` selects the file.

use std::path::{Path, PathBuf};

use pseudomap_core::assign::{AssignParams, CostParams};
use pseudomap_core::geometry::BevSpec;
use pseudomap_core::loss::{LossConfig, LossWeights};
use pseudomap_core::metrics::ApConfig;
use pseudomap_core::raster::{ElementShape, StructuringElement};
use pseudomap_core::surfel::RenderOptions;
use pseudomap_core::synth::{OcclusionParams, SceneParams, MARKING_WIDTH};
use pseudomap_core::vectorize::{DividerGate, VectorizeParams};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::io_util::{parse_json, read_string};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct BevCfg {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub resolution: f64,
}

impl Default for BevCfg {
    fn default() -> Self {
        Self {
            x_min: -15.0,
            x_max: 15.0,
            y_min: -30.0,
            y_max: 30.0,
            resolution: 20.0,
        }
    }
}

impl BevCfg {
    pub fn to_spec(&self) -> CliResult<BevSpec> {
        BevSpec::new(self.x_min, self.x_max, self.y_min, self.y_max, self.resolution)
            .map_err(|e| CliError::validation(e.to_string()))
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct KernelCfg {
    /// "square" or "disk".
    pub shape: String,
    pub size: usize,
}

impl Default for KernelCfg {
    fn default() -> Self {
        Self {
            shape: "square".into(),
            size: 15,
        }
    }
}

impl KernelCfg {
    pub fn to_core(&self) -> CliResult<StructuringElement> {
        if self.size == 0 || self.size % 2 == 0 {
            return Err(CliError::validation(format!(
                "kernel size must be odd and positive, got {}",
                self.size
            )));
        }
        let shape = match self.shape.as_str() {
            "square" => ElementShape::Square,
            "disk" => ElementShape::Disk,
            other => {
                return Err(CliError::validation(format!(
                    "unknown kernel shape \"{other}\" (square|disk)"
                )))
            }
        };
        Ok(StructuringElement { shape, size: self.size })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct VectorizeCfg {
    pub rdp_eps_m: f64,
    pub max_points: usize,
    pub lane_kernel: KernelCfg,
    pub smooth_kernel: KernelCfg,
    pub min_area_px: usize,
    pub thick_max_px: usize,
    pub min_branch_px: usize,
    pub margin_m: f64,
    pub divider_gate_distance_m: f64,
    pub divider_gate_angle_deg: f64,
    pub gate_samples: usize,
}

impl Default for VectorizeCfg {
    fn default() -> Self {
        let d = VectorizeParams::default();
        Self {
            rdp_eps_m: d.rdp_eps,
            max_points: d.max_points,
            lane_kernel: KernelCfg {
                shape: "square".into(),
                size: d.lane_kernel.size,
            },
            smooth_kernel: KernelCfg {
                shape: "square".into(),
                size: d.smooth_kernel.size,
            },
            min_area_px: d.min_area,
            thick_max_px: d.thick_max_px,
            min_branch_px: d.min_branch_px,
            margin_m: d.margin_m,
            divider_gate_distance_m: d.divider_gate.distance,
            divider_gate_angle_deg: d.divider_gate.angle.to_degrees(),
            gate_samples: d.gate_samples,
        }
    }
}

impl VectorizeCfg {
    pub fn to_core(&self) -> CliResult<VectorizeParams> {
        if !(self.rdp_eps_m > 0.0) {
            return Err(CliError::validation("rdp_eps_m must be positive"));
        }
        if self.max_points < 2 {
            return Err(CliError::validation("max_points must be at least 2"));
        }
        Ok(VectorizeParams {
            rdp_eps: self.rdp_eps_m,
            max_points: self.max_points,
            lane_kernel: self.lane_kernel.to_core()?,
            smooth_kernel: self.smooth_kernel.to_core()?,
            min_area: self.min_area_px,
            thick_max_px: self.thick_max_px,
            min_branch_px: self.min_branch_px,
            margin_m: self.margin_m,
            divider_gate: DividerGate {
                distance: self.divider_gate_distance_m,
                angle: self.divider_gate_angle_deg.to_radians(),
            },
            gate_samples: self.gate_samples,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct AssignCfg {
    pub w_cls: f64,
    pub w_pt: f64,
    pub w_rend: f64,
    pub sigma_m: f64,
    pub line_width_m: Option<f64>,
    pub large_cost: f64,
    pub cost_resolution: f64,
    pub resample_len: usize,
    pub min_run_points: usize,
    pub max_card: Option<usize>,
    pub spatial_gate_m: Option<f64>,
    pub subset_budget: usize,
}

impl Default for AssignCfg {
    fn default() -> Self {
        let d = AssignParams::default();
        Self {
            w_cls: d.cost.w_cls,
            w_pt: d.cost.w_pt,
            w_rend: d.cost.w_rend,
            sigma_m: d.cost.sigma,
            line_width_m: d.cost.line_width,
            large_cost: d.cost.large_cost,
            cost_resolution: d.cost.cost_resolution,
            resample_len: d.resample_len,
            min_run_points: d.min_run_points,
            max_card: d.max_card,
            spatial_gate_m: d.spatial_gate,
            subset_budget: d.subset_budget,
        }
    }
}

impl AssignCfg {
    pub fn to_core(&self) -> CliResult<AssignParams> {
        if self.w_cls < 0.0 || self.w_pt < 0.0 || self.w_rend < 0.0 {
            return Err(CliError::validation("cost weights must be non-negative"));
        }
        if !(self.sigma_m > 0.0) {
            return Err(CliError::validation("sigma_m must be positive"));
        }
        if self.resample_len < 2 {
            return Err(CliError::validation("resample_len must be at least 2"));
        }
        Ok(AssignParams {
            cost: CostParams {
                w_cls: self.w_cls,
                w_pt: self.w_pt,
                w_rend: self.w_rend,
                sigma: self.sigma_m,
                line_width: self.line_width_m,
                large_cost: self.large_cost,
                cost_resolution: self.cost_resolution,
            },
            resample_len: self.resample_len,
            min_run_points: self.min_run_points,
            max_card: self.max_card,
            spatial_gate: self.spatial_gate_m,
            subset_budget: self.subset_budget,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct LossCfg {
    pub w_cls: f64,
    pub w_pt: f64,
    pub w_rend: f64,
    pub w_dir: f64,
    pub w_bev_seg: f64,
    pub focal_alpha: f64,
    pub focal_gamma: f64,
    pub sigma_m: f64,
    pub line_width_m: Option<f64>,
    pub render_resolution: f64,
    pub resample_len: usize,
    pub min_run_points: usize,
}

impl Default for LossCfg {
    fn default() -> Self {
        let w = LossWeights::default();
        let c = LossConfig::default();
        Self {
            w_cls: w.cls,
            w_pt: w.pt,
            w_rend: w.rend,
            w_dir: w.dir,
            w_bev_seg: w.bev_seg,
            focal_alpha: c.focal_alpha,
            focal_gamma: c.focal_gamma,
            sigma_m: c.sigma,
            line_width_m: c.line_width,
            render_resolution: c.render_resolution,
            resample_len: c.resample_len,
            min_run_points: c.min_run_points,
        }
    }
}

impl LossCfg {
    pub fn weights(&self) -> CliResult<LossWeights> {
        if [self.w_cls, self.w_pt, self.w_rend, self.w_dir, self.w_bev_seg]
            .iter()
            .any(|&w| w < 0.0)
        {
            return Err(CliError::validation("loss weights must be non-negative"));
        }
        Ok(LossWeights {
            cls: self.w_cls,
            pt: self.w_pt,
            rend: self.w_rend,
            dir: self.w_dir,
            bev_seg: self.w_bev_seg,
        })
    }

    pub fn to_core(&self) -> CliResult<LossConfig> {
        if !(self.sigma_m > 0.0) || !(self.render_resolution > 0.0) {
            return Err(CliError::validation("loss sigma and resolution must be positive"));
        }
        Ok(LossConfig {
            focal_alpha: self.focal_alpha,
            focal_gamma: self.focal_gamma,
            sigma: self.sigma_m,
            line_width: self.line_width_m,
            render_resolution: self.render_resolution,
            resample_len: self.resample_len,
            min_run_points: self.min_run_points,
        })
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct EvalCfg {
    pub thresholds_m: Vec<f64>,
    pub chamfer_samples: usize,
}

impl Default for EvalCfg {
    fn default() -> Self {
        let d = ApConfig::default();
        Self {
            thresholds_m: d.thresholds,
            chamfer_samples: d.n_samples,
        }
    }
}

impl EvalCfg {
    pub fn to_core(&self) -> CliResult<ApConfig> {
        let cfg = ApConfig {
            thresholds: self.thresholds_m.clone(),
            n_samples: self.chamfer_samples,
        };
        cfg.validate().map_err(|e| CliError::validation(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct CoverageCfg {
    /// Samples with coverage at or below this are filtered out.
    pub tau: f64,
}

impl Default for CoverageCfg {
    fn default() -> Self {
        Self { tau: 0.5 }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct SynthCfg {
    pub lanes: usize,
    pub lane_width_m: f64,
    pub curvature: f64,
    pub crossings: usize,
    pub dash_on_m: f64,
    pub dash_off_m: f64,
    pub marking_width_m: f64,
    pub trips: usize,
    pub fov_rad: f64,
    pub range_m: f64,
    pub blobs: usize,
    pub blob_radius_min_m: f64,
    pub blob_radius_max_m: f64,
}

impl Default for SynthCfg {
    fn default() -> Self {
        let s = SceneParams::default();
        let o = OcclusionParams::default();
        Self {
            lanes: s.n_lanes,
            lane_width_m: s.lane_width,
            curvature: s.curvature,
            crossings: s.n_crossings,
            dash_on_m: s.dash_pattern.0,
            dash_off_m: s.dash_pattern.1,
            marking_width_m: MARKING_WIDTH,
            trips: 1,
            fov_rad: o.frustum_fov,
            range_m: o.frustum_range,
            blobs: o.n_blobs,
            blob_radius_min_m: o.blob_radius.0,
            blob_radius_max_m: o.blob_radius.1,
        }
    }
}

impl SynthCfg {
    pub fn scene_params(&self, seed: u64) -> SceneParams {
        SceneParams {
            seed,
            n_lanes: self.lanes,
            lane_width: self.lane_width_m,
            curvature: self.curvature,
            n_crossings: self.crossings,
            dash_pattern: (self.dash_on_m, self.dash_off_m),
        }
    }

    pub fn occlusion_params(&self, seed: u64) -> OcclusionParams {
        OcclusionParams {
            seed,
            n_blobs: self.blobs,
            blob_radius: (self.blob_radius_min_m, self.blob_radius_max_m),
            frustum_fov: self.fov_rad,
            frustum_range: self.range_m,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct RenderCfg {
    pub offset_r_m: f64,
    pub spacing_m: f64,
    pub alpha_min: f64,
    pub sigma_cutoff: f64,
}

impl Default for RenderCfg {
    fn default() -> Self {
        let o = RenderOptions::default();
        Self {
            offset_r_m: 7.0,
            spacing_m: 0.5,
            alpha_min: o.alpha_min,
            sigma_cutoff: o.sigma_cutoff,
        }
    }
}

impl RenderCfg {
    pub fn options(&self) -> RenderOptions {
        RenderOptions {
            alpha_min: self.alpha_min,
            sigma_cutoff: self.sigma_cutoff,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields, default)]
pub struct PipelineConfig {
    pub bev: BevCfg,
    pub vectorize: VectorizeCfg,
    pub assign: AssignCfg,
    pub loss: LossCfg,
    pub eval: EvalCfg,
    pub coverage: CoverageCfg,
    pub synth: SynthCfg,
    pub render: RenderCfg,
}

impl PipelineConfig {
    /// Validate every section by converting it to its core parameters.
    pub fn validate(&self) -> CliResult<()> {
        self.bev.to_spec()?;
        self.vectorize.to_core()?;
        self.assign.to_core()?;
        self.loss.weights()?;
        self.loss.to_core()?;
        self.eval.to_core()?;
        if !(0.0..=1.0).contains(&self.coverage.tau) {
            return Err(CliError::validation("coverage tau must lie in [0, 1]"));
        }
        self.synth
            .scene_params(0)
            .validate()
            .map_err(|e| CliError::validation(e.to_string()))?;
        self.synth
            .occlusion_params(0)
            .validate()
            .map_err(|e| CliError::validation(e.to_string()))?;
        if !(self.render.offset_r_m > 0.0 && self.render.spacing_m > 0.0) {
            return Err(CliError::validation("render offsets must be positive"));
        }
        Ok(())
    }

    /// Load from `--config`, else `PSEUDOMAP_CONFIG`, else defaults.
    pub fn load(explicit: Option<&Path>) -> CliResult<Self> {
        let path: Option<PathBuf> = explicit
            .map(Path::to_path_buf)
            .or_else(|| std::env::var_os("PSEUDOMAP_CONFIG").map(PathBuf::from));
        let config = match path {
            Some(path) => {
                let text = read_string(&path)?;
                let cfg: PipelineConfig = parse_json(&path, &text)?;
                cfg
            }
            None => PipelineConfig::default(),
        };
        config.validate()?;
        Ok(config)
    }
}

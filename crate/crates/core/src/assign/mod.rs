//! Mask-aware assignment between predictions and pseudo-labels: split by
//! the BEV mask, build one-to-one and one-to-many costs, and solve the
//! global matching as a binary integer program with a Hungarian fast path.

mod cost;
mod hungarian;
mod solver;
mod split;
mod subsets;

pub use cost::{cost_o2o, CostParams};
pub use hungarian::{hungarian, Matching};
pub use solver::{solve_branch_and_bound, solve_global, solve_hungarian_padded};
pub use split::{mask_element, observed_runs, split_by_mask, Run};
pub use subsets::enumerate_subsets;

use alloc::vec::Vec;
use core::fmt;

use crate::geometry::{GeometryError, Point2};

#[derive(Debug, Clone, PartialEq)]
pub enum AssignError {
    /// The labels cannot all be covered by the available predictions.
    InsufficientPredictions,
    /// Subset enumeration exceeded the configured budget.
    BudgetExceeded,
    TooManyLabels,
    /// The Hungarian fast path requires every prediction to have at most
    /// one subsegment.
    FastPathInapplicable,
    Geometry(GeometryError),
}

impl fmt::Display for AssignError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AssignError::InsufficientPredictions => write!(f, "insufficient predictions"),
            AssignError::BudgetExceeded => write!(f, "combinatorial budget exceeded"),
            AssignError::TooManyLabels => write!(f, "too many labels for the solver"),
            AssignError::FastPathInapplicable => {
                write!(f, "fast path requires at most one subsegment per prediction")
            }
            AssignError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for AssignError {}

impl From<GeometryError> for AssignError {
    fn from(e: GeometryError) -> Self {
        AssignError::Geometry(e)
    }
}

/// The observed subsegments of one prediction, each resampled to a fixed
/// point count. Empty when the prediction is fully masked.
#[derive(Debug, Clone, PartialEq)]
pub struct Subsegments {
    pub segments: Vec<Vec<Point2>>,
}

/// Per-prediction outcome of the global assignment.
#[derive(Debug, Clone, PartialEq)]
pub enum AssignOutcome {
    OneToOne {
        label: usize,
        cost: f64,
    },
    OneToMany {
        labels: Vec<usize>,
        /// `(segment index, label index)` pairs of the local matching.
        local: Vec<(usize, usize)>,
        cost: f64,
    },
    Unassigned,
}

/// The solved global matching: every label appears in exactly one outcome
/// and every prediction in at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignmentResult {
    pub outcomes: Vec<AssignOutcome>,
    pub total_cost: f64,
}

/// Solver configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct AssignParams {
    pub cost: CostParams,
    /// Fixed point count elements and subsegments are resampled to.
    pub resample_len: usize,
    /// Observed runs shorter than this many original vertices are dropped.
    pub min_run_points: usize,
    /// Largest one-to-many subset; `None` derives it from the largest
    /// subsegment count (capped at 4).
    pub max_card: Option<usize>,
    /// Spatial gate in meters on subset bounding boxes; `None` disables
    /// gating at the price of a larger enumeration.
    pub spatial_gate: Option<f64>,
    pub subset_budget: usize,
}

impl Default for AssignParams {
    fn default() -> Self {
        Self {
            cost: CostParams::default(),
            resample_len: 20,
            min_run_points: 4,
            max_card: None,
            spatial_gate: Some(5.0),
            subset_budget: 200_000,
        }
    }
}

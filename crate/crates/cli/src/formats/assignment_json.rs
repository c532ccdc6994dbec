//! Assignment result JSON.
//!
//! ```json
//! {
//!   "matches": [
//!     {"pred": 0, "labels": [1, 2], "local": [[0, 1], [1, 2]], "cost": 0.41}
//!   ],
//!   "unassigned_preds": [3],
//!   "total_cost": 0.41
//! }
//! ```
//!
//! A match with empty `local` is a direct one-to-one assignment; a
//! one-to-many match lists its `(segment, label)` pairs there, including
//! for singleton label sets.

use std::path::Path;

use pseudomap_core::assign::{AssignOutcome, AssignmentResult};
use serde::{Deserialize, Serialize};

use crate::error::CliResult;
use crate::io_util::{atomic_write, parse_json, read_string, to_json_bytes};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct MatchDto {
    pub pred: usize,
    pub labels: Vec<usize>,
    pub local: Vec<[usize; 2]>,
    pub cost: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct AssignmentDto {
    pub matches: Vec<MatchDto>,
    pub unassigned_preds: Vec<usize>,
    pub total_cost: f64,
}

impl AssignmentDto {
    pub fn from_core(result: &AssignmentResult) -> Self {
        let mut matches = Vec::new();
        let mut unassigned = Vec::new();
        for (i, outcome) in result.outcomes.iter().enumerate() {
            match outcome {
                AssignOutcome::OneToOne { label, cost } => matches.push(MatchDto {
                    pred: i,
                    labels: vec![*label],
                    local: Vec::new(),
                    cost: *cost,
                }),
                AssignOutcome::OneToMany { labels, local, cost } => matches.push(MatchDto {
                    pred: i,
                    labels: labels.clone(),
                    local: local.iter().map(|&(s, l)| [s, l]).collect(),
                    cost: *cost,
                }),
                AssignOutcome::Unassigned => unassigned.push(i),
            }
        }
        Self {
            matches,
            unassigned_preds: unassigned,
            total_cost: result.total_cost,
        }
    }

    /// Reconstruct outcomes for `n_preds` predictions. Matches with an
    /// empty `local` are one-to-one.
    pub fn to_core(&self, n_preds: usize) -> AssignmentResult {
        let mut outcomes = vec![AssignOutcome::Unassigned; n_preds];
        for m in &self.matches {
            if m.pred >= n_preds {
                continue;
            }
            outcomes[m.pred] = if m.local.is_empty() && m.labels.len() == 1 {
                AssignOutcome::OneToOne {
                    label: m.labels[0],
                    cost: m.cost,
                }
            } else {
                AssignOutcome::OneToMany {
                    labels: m.labels.clone(),
                    local: m.local.iter().map(|&[s, l]| (s, l)).collect(),
                    cost: m.cost,
                }
            };
        }
        AssignmentResult {
            outcomes,
            total_cost: self.total_cost,
        }
    }
}

pub fn write_assignment(path: &Path, result: &AssignmentResult) -> CliResult<()> {
    atomic_write(path, &to_json_bytes(&AssignmentDto::from_core(result)))
}

pub fn read_assignment(path: &Path) -> CliResult<AssignmentDto> {
    let text = read_string(path)?;
    parse_json(path, &text)
}

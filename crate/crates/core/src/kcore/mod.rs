//! Private k-core decomposition.
//!
//! [`dp_core_additive`] and [`dp_core_multiplicative`] peel with a noisy
//! degree test against a growing threshold; the multiplicative schedule can
//! run its inner loop through [`fast_peel_phase`]. [`dp_core_levels`] is the
//! level-based variant with a polylogarithmic round bound.

mod fast;
mod levels;
mod peel;

use serde::Serialize;

pub use fast::{fast_peel_phase, FastPhase};
pub use levels::{
    core_estimate_from_level, dp_core_levels, level_invariant_violations, LevelConfig, LevelOutput,
    LevelParams,
};
pub use peel::{
    dp_core_additive, dp_core_multiplicative, induced_degrees, PeelConfig, PeelOutput, Removal,
    Schedule,
};

/// Per-vertex core number estimates plus run metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoreEstimates {
    pub algorithm: String,
    pub epsilon: f64,
    pub eta: Option<f64>,
    pub labels: Vec<f64>,
    pub rounds: usize,
    pub seed: Option<u64>,
}

impl CoreEstimates {
    pub fn max_label(&self) -> f64 {
        self.labels
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

//! Defective coloring driven by per-(vertex, color) noisy thresholds.
//!
//! Vertices are colored greedily in reverse private order. Once vertex `u`
//! has seen enough neighbors take color `c`, it announces that the pair
//! `(u, c)` is saturated and no neighbor of `u` picks `c` afterwards.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::mat::{Answer, CoordinateLayout, MatConfig, MatState, Transcript};
use crate::noise::NoiseSource;
use crate::ordering::{dp_ordering, dp_ordering_low_rounds};

/// MAT channel of the saturation checks; the ordering run uses channel 0.
const CHANNEL: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ColorConfig {
    pub epsilon: f64,
    /// Replaces the `100 ln n / ε` base threshold.
    pub threshold_override: Option<f64>,
    /// Re-check every (vertex, color) pair after every step instead of only
    /// the pairs whose count changed.
    pub literal_loop: bool,
}

impl ColorConfig {
    pub fn new(epsilon: f64) -> Self {
        ColorConfig {
            epsilon,
            threshold_override: None,
            literal_loop: false,
        }
    }

    pub fn with_threshold(mut self, t: f64) -> Self {
        self.threshold_override = Some(t);
        self
    }

    pub fn literal(mut self, literal: bool) -> Self {
        self.literal_loop = literal;
        self
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(invalid(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if let Some(t) = self.threshold_override {
            if !t.is_finite() {
                return Err(invalid("threshold override must be finite"));
            }
        }
        Ok(())
    }

    pub fn base_threshold(&self, n: usize) -> f64 {
        self.threshold_override
            .unwrap_or(100.0 * (n as f64).ln() / self.epsilon)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    /// Colors start at 1.
    pub color: Vec<u64>,
    /// Number of distinct colors used.
    pub palette_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DefectReport {
    pub defect: Vec<usize>,
    pub max_defect: usize,
}

#[derive(Debug, Clone)]
pub struct ColoringOutput {
    pub coloring: Coloring,
    /// Vertices in the order they were colored; round `i` of
    /// `color_transcript` is the check run right after coloring `color_order[i]`.
    pub color_order: Vec<u32>,
    pub ordering_transcript: Transcript,
    /// Saturation announcements; coordinate `v·n + s` is vertex `v`, slot `s`
    /// of its palette.
    pub color_transcript: Transcript,
    /// Palette index per vertex (all 0 for the single-palette variant).
    pub palette: Vec<u64>,
}

impl ColoringOutput {
    pub fn total_rounds(&self) -> usize {
        self.ordering_transcript.round_count() + self.color_transcript.round_count()
    }
}

/// Greedy coloring over the reverse of the private removal ordering, with
/// the budget split evenly between the ordering and the color checks.
pub fn dp_color(g: &Graph, cfg: &ColorConfig, src: NoiseSource) -> Result<ColoringOutput> {
    cfg.validate()?;
    let ord = dp_ordering(g, cfg.epsilon / 2.0, src)?;
    let palette = vec![0; g.n()];
    greedy(g, cfg, src, &ord.ordering.order, palette, ord.transcript)
}

/// As [`dp_color`], over the level-sorted ordering; vertices at level `i`
/// draw from `{n·i + 1, …, n·(i+1)}` and only consult same-level neighbors.
pub fn dp_color_low_rounds(
    g: &Graph,
    cfg: &ColorConfig,
    eta: f64,
    src: NoiseSource,
) -> Result<ColoringOutput> {
    cfg.validate()?;
    let ord = dp_ordering_low_rounds(g, cfg.epsilon / 2.0, eta, src)?;
    let palette = ord.levels.estimate_levels.clone();
    greedy(
        g,
        cfg,
        src,
        &ord.ordering.order,
        palette,
        ord.levels.transcript,
    )
}

fn greedy(
    g: &Graph,
    cfg: &ColorConfig,
    src: NoiseSource,
    order: &[u32],
    palette: Vec<u64>,
    ordering_transcript: Transcript,
) -> Result<ColoringOutput> {
    let n = g.n();
    if n == 0 {
        return Err(Error::Empty("graph has no vertices"));
    }
    let mat_cfg = MatConfig::new(vec![cfg.base_threshold(n); n * n], cfg.epsilon / 2.0, 1.0)?
        .with_layout(CoordinateLayout::Grid { cols: n })?
        .with_channel(CHANNEL);
    let mut mat = MatState::init(mat_cfg, src);
    let mut counts = vec![0u32; n * n];
    let mut color = vec![0u64; n];
    let mut color_order = Vec::with_capacity(n);
    let mut saturated: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut banned = vec![false; n];

    for &v in order.iter().rev() {
        let vi = v as usize;
        let same_palette = |u: &&u32| palette[**u as usize] == palette[vi];
        for &u in g.neighbors(v).iter().filter(same_palette) {
            for &s in &saturated[u as usize] {
                banned[s] = true;
            }
        }
        let slot = banned.iter().position(|&b| !b);
        for &u in g.neighbors(v).iter().filter(same_palette) {
            for &s in &saturated[u as usize] {
                banned[s] = false;
            }
        }
        let slot = slot.ok_or(Error::PaletteExhausted(v))?;
        color[vi] = palette[vi] * n as u64 + slot as u64 + 1;
        color_order.push(v);

        let mut changed = Vec::new();
        for &u in g.neighbors(v).iter().filter(same_palette) {
            let j = u as usize * n + slot;
            counts[j] += 1;
            changed.push(j);
        }
        let answers = if cfg.literal_loop {
            let f: Vec<f64> = counts.iter().map(|&c| c as f64).collect();
            mat.query(&f)?
        } else {
            let entries: Vec<(usize, f64)> =
                changed.iter().map(|&j| (j, counts[j] as f64)).collect();
            mat.query_sparse(&entries)?
        };
        let mut record = |j: usize| {
            if answers[j] == Answer::Top {
                saturated[j / n].push(j % n);
            }
        };
        if cfg.literal_loop {
            (0..n * n).for_each(&mut record);
        } else {
            changed.iter().for_each(|&j| record(j));
        }
    }

    let palette_bound = color.iter().collect::<BTreeSet<_>>().len();
    Ok(ColoringOutput {
        coloring: Coloring {
            color,
            palette_bound,
        },
        color_order,
        ordering_transcript,
        color_transcript: mat.into_transcript(),
        palette,
    })
}

/// Same-colored neighbor counts. Color 0 means uncolored.
pub fn defect_of(g: &Graph, colors: &[u64]) -> Result<DefectReport> {
    if colors.len() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            got: colors.len(),
        });
    }
    if let Some(v) = colors.iter().position(|&c| c == 0) {
        return Err(Error::Uncolored(v as u32));
    }
    let defect: Vec<usize> = g
        .vertices()
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| colors[u as usize] == colors[v as usize])
                .count()
        })
        .collect();
    let max_defect = defect.iter().copied().max().unwrap_or(0);
    Ok(DefectReport { defect, max_defect })
}

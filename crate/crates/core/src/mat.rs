//! Multidimensional AboveThreshold.
//!
//! `d` coordinates share one privacy budget `ε` and an ℓ₁ sensitivity `D`
//! summed over coordinates. Each coordinate `j` gets a noisy threshold
//! `T̂_j = T_j + Lap(2D/ε)` once; every query vector then perturbs each
//! active coordinate with fresh `Lap(4D/ε)` noise and answers `⊤` (and
//! stops that coordinate) when `f_j + ν ≥ T̂_j`, `⊥` otherwise.
//!
//! Noise for a coordinate is drawn from the substream of the vertex that
//! owns it, so the same engine is also the local (per-vertex randomizer)
//! form of the mechanism: a vertex only ever needs its own threshold, its own
//! query value, and the public transcript.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::noise::{NoiseSource, Purpose, Scale, StreamId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    /// `⊤`: the coordinate crossed its threshold on this query.
    Top,
    /// `⊥`: still below threshold.
    Bottom,
    /// Already crossed earlier; no longer answering.
    Inactive,
}

/// Maps coordinate `j` to the vertex that owns it and a per-vertex index.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordinateLayout {
    /// Coordinate `j` belongs to vertex `j`.
    Identity,
    /// Coordinate `j` belongs to vertex `j / cols`, slot `j % cols`.
    Grid { cols: usize },
}

impl CoordinateLayout {
    #[inline]
    pub fn owner(self, j: usize) -> (u64, u64) {
        match self {
            CoordinateLayout::Identity => (j as u64, 0),
            CoordinateLayout::Grid { cols } => ((j / cols) as u64, (j % cols) as u64),
        }
    }
}

#[derive(Debug, Clone)]
pub struct MatConfig {
    thresholds: Vec<f64>,
    epsilon: f64,
    sensitivity: f64,
    layout: CoordinateLayout,
    channel: u32,
}

impl MatConfig {
    pub fn new(thresholds: Vec<f64>, epsilon: f64, sensitivity: f64) -> Result<Self> {
        if thresholds.is_empty() {
            return Err(invalid("MAT needs at least one coordinate"));
        }
        if thresholds.iter().any(|t| t.is_nan()) {
            return Err(invalid("MAT thresholds must not be NaN"));
        }
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(sensitivity.is_finite() && sensitivity > 0.0) {
            return Err(invalid(format!(
                "sensitivity must be positive, got {sensitivity}"
            )));
        }
        Ok(MatConfig {
            thresholds,
            epsilon,
            sensitivity,
            layout: CoordinateLayout::Identity,
            channel: 0,
        })
    }

    pub fn with_layout(mut self, layout: CoordinateLayout) -> Result<Self> {
        if let CoordinateLayout::Grid { cols } = layout {
            if cols == 0 {
                return Err(invalid("grid layout needs at least one column"));
            }
        }
        self.layout = layout;
        Ok(self)
    }

    /// Instances sharing a [`NoiseSource`] must use distinct channels.
    pub fn with_channel(mut self, channel: u32) -> Self {
        self.channel = channel;
        self
    }

    pub fn dimension(&self) -> usize {
        self.thresholds.len()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn sensitivity(&self) -> f64 {
        self.sensitivity
    }

    pub fn thresholds(&self) -> &[f64] {
        &self.thresholds
    }

    pub fn threshold_scale(&self) -> Scale {
        Scale::new(2.0 * self.sensitivity / self.epsilon).expect("validated config")
    }

    pub fn query_scale(&self) -> Scale {
        Scale::new(4.0 * self.sensitivity / self.epsilon).expect("validated config")
    }
}

/// Public record of a protocol run: one entry per submitted query vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub rounds: Vec<Vec<Answer>>,
    pub d: usize,
    pub epsilon: f64,
    pub sensitivity: f64,
}

impl Transcript {
    pub fn new(d: usize, epsilon: f64, sensitivity: f64) -> Self {
        Transcript {
            rounds: Vec::new(),
            d,
            epsilon,
            sensitivity,
        }
    }

    pub fn push_round(&mut self, answers: Vec<Answer>) -> Result<()> {
        if answers.len() != self.d {
            return Err(Error::DimensionMismatch {
                expected: self.d,
                got: answers.len(),
            });
        }
        self.rounds.push(answers);
        Ok(())
    }

    pub fn round_count(&self) -> usize {
        self.rounds.len()
    }

    /// Whether every coordinate's released sequence has the form
    /// `⊥* ⊤? inactive*` with `inactive` only after a `⊤`.
    pub fn has_stop_pattern(&self) -> bool {
        let mut stopped = vec![false; self.d];
        for round in &self.rounds {
            for (j, a) in round.iter().enumerate() {
                match (a, stopped[j]) {
                    (Answer::Bottom, false) => {}
                    (Answer::Top, false) => stopped[j] = true,
                    (Answer::Inactive, true) => {}
                    _ => return false,
                }
            }
        }
        true
    }

    /// 1-based index of the round in which each coordinate answered `⊤`.
    pub fn crossings(&self) -> Vec<Option<u64>> {
        let mut out = vec![None; self.d];
        for (i, round) in self.rounds.iter().enumerate() {
            for (j, a) in round.iter().enumerate() {
                if *a == Answer::Top && out[j].is_none() {
                    out[j] = Some(i as u64 + 1);
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct MatState {
    cfg: MatConfig,
    src: NoiseSource,
    noisy_thresholds: Vec<f64>,
    active: Vec<bool>,
    crossing: Vec<Option<u64>>,
    queries: u64,
    transcript: Transcript,
}

/// Coordinates above this count are evaluated on the rayon pool.
const PARALLEL_MIN: usize = 4096;

impl MatState {
    pub fn init(cfg: MatConfig, src: NoiseSource) -> Self {
        let scale = cfg.threshold_scale();
        let layout = cfg.layout;
        let channel = cfg.channel;
        let draw = |(j, t): (usize, &f64)| {
            let (vertex, index) = layout.owner(j);
            let id = StreamId::new(Purpose::Threshold, vertex, 0)
                .channel(channel)
                .index(index);
            t + src.laplace(id, scale)
        };
        let noisy_thresholds: Vec<f64> = if cfg.dimension() >= PARALLEL_MIN {
            cfg.thresholds.par_iter().enumerate().map(draw).collect()
        } else {
            cfg.thresholds.iter().enumerate().map(draw).collect()
        };
        let d = cfg.dimension();
        MatState {
            transcript: Transcript::new(d, cfg.epsilon, cfg.sensitivity),
            noisy_thresholds,
            active: vec![true; d],
            crossing: vec![None; d],
            queries: 0,
            cfg,
            src,
        }
    }

    /// Submit one dense query vector. Values for inactive coordinates are
    /// ignored. A value of `-∞` is a data-independent query that always
    /// answers `⊥` without consuming noise.
    pub fn query(&mut self, f: &[f64]) -> Result<&[Answer]> {
        let d = self.cfg.dimension();
        if f.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                got: f.len(),
            });
        }
        let round = self.queries + 1;
        let answer = |j: usize| self.answer_one(j, f[j], round);
        let answers: Vec<Answer> = if d >= PARALLEL_MIN {
            (0..d).into_par_iter().map(answer).collect::<Result<_>>()?
        } else {
            (0..d).map(answer).collect::<Result<_>>()?
        };
        Ok(self.commit(answers))
    }

    /// Submit a query vector given only on `entries`; every other coordinate
    /// is queried with `-∞`.
    pub fn query_sparse(&mut self, entries: &[(usize, f64)]) -> Result<&[Answer]> {
        let d = self.cfg.dimension();
        let round = self.queries + 1;
        let mut answers: Vec<Answer> = self
            .active
            .iter()
            .map(|&a| if a { Answer::Bottom } else { Answer::Inactive })
            .collect();
        for &(j, value) in entries {
            if j >= d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    got: j + 1,
                });
            }
            answers[j] = self.answer_one(j, value, round)?;
        }
        Ok(self.commit(answers))
    }

    fn answer_one(&self, j: usize, value: f64, round: u64) -> Result<Answer> {
        if !self.active[j] {
            return Ok(Answer::Inactive);
        }
        if value.is_nan() {
            return Err(invalid(format!("query value for coordinate {j} is NaN")));
        }
        if value == f64::NEG_INFINITY {
            return Ok(Answer::Bottom);
        }
        let (vertex, index) = self.cfg.layout.owner(j);
        let id = StreamId::new(Purpose::Query, vertex, round)
            .channel(self.cfg.channel)
            .index(index);
        let nu = self.src.laplace(id, self.cfg.query_scale());
        Ok(if value + nu >= self.noisy_thresholds[j] {
            Answer::Top
        } else {
            Answer::Bottom
        })
    }

    fn commit(&mut self, answers: Vec<Answer>) -> &[Answer] {
        self.queries += 1;
        for (j, a) in answers.iter().enumerate() {
            if *a == Answer::Top {
                self.active[j] = false;
                self.crossing[j] = Some(self.queries);
            }
        }
        self.transcript.rounds.push(answers);
        self.transcript.rounds.last().unwrap()
    }

    pub fn config(&self) -> &MatConfig {
        &self.cfg
    }

    pub fn noisy_thresholds(&self) -> &[f64] {
        &self.noisy_thresholds
    }

    pub fn is_active(&self, j: usize) -> bool {
        self.active[j]
    }

    pub fn active_count(&self) -> usize {
        self.active.iter().filter(|&&a| a).count()
    }

    /// `r(j)`: the 1-based index of the query on which coordinate `j`
    /// answered `⊤`, if it has.
    pub fn crossing_indices(&self) -> &[Option<u64>] {
        &self.crossing
    }

    pub fn query_count(&self) -> u64 {
        self.queries
    }

    pub fn transcript(&self) -> &Transcript {
        &self.transcript
    }

    pub fn into_transcript(self) -> Transcript {
        self.transcript
    }
}

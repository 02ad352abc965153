use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::mat::{Answer, MatConfig, MatState, Transcript};
use crate::noise::NoiseSource;

use super::CoreEstimates;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelConfig {
    pub epsilon: f64,
    pub eta: f64,
}

impl LevelConfig {
    pub fn new(epsilon: f64, eta: f64) -> Result<Self> {
        if !(epsilon.is_finite() && epsilon > 0.0) {
            return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
        }
        if !(eta.is_finite() && eta > 0.0) {
            return Err(invalid(format!("eta must be positive, got {eta}")));
        }
        Ok(LevelConfig { epsilon, eta })
    }
}

/// Constants derived from `n` and `η`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevelParams {
    pub psi: f64,
    pub lambda: f64,
    /// `⌈4 (log₂ n)²⌉`.
    pub round_bound: u64,
    /// Rounds per threshold group, `2 log₂ n`.
    pub group_len: f64,
    /// Levels per estimate group, `4 ⌈log_{1+ψ} n⌉` (at least 4).
    pub estimate_group: u64,
}

impl LevelParams {
    pub fn new(n: usize, eta: f64) -> Self {
        let psi = 0.1 * eta;
        let lambda = 2.0 * (30.0 - eta) * eta / ((eta + 10.0) * (eta + 10.0));
        let log2n = (n.max(1) as f64).log2();
        let round_bound = (4.0 * log2n * log2n).ceil() as u64;
        let log_psi = ((n.max(1) as f64).ln() / psi.ln_1p()).ceil().max(1.0);
        LevelParams {
            psi,
            lambda,
            round_bound,
            group_len: 2.0 * log2n,
            estimate_group: 4 * log_psi as u64,
        }
    }

    /// `(1+ψ)^⌊r / (2 log₂ n)⌋`.
    pub fn threshold(&self, r: u64) -> f64 {
        let group = if self.group_len > 0.0 {
            (r as f64 / self.group_len).floor()
        } else {
            0.0
        };
        (1.0 + self.psi).powf(group)
    }

    /// `(2+λ)(1+ψ)^{max(⌊(ℓ+1) / (4⌈log_{1+ψ} n⌉)⌋ − 1, 0)}`.
    pub fn estimate(&self, level: u64) -> f64 {
        let exp = ((level + 1) / self.estimate_group).saturating_sub(1);
        (2.0 + self.lambda) * (1.0 + self.psi).powi(exp as i32)
    }
}

pub fn core_estimate_from_level(final_level: u64, n: usize, eta: f64) -> f64 {
    LevelParams::new(n, eta).estimate(final_level)
}

#[derive(Debug, Clone)]
pub struct LevelOutput {
    pub estimates: CoreEstimates,
    pub transcript: Transcript,
    /// Levels after the last executed round.
    pub levels: Vec<u64>,
    /// `L_{R−1}`, the levels the estimates and orderings are read from.
    pub estimate_levels: Vec<u64>,
    pub params: LevelParams,
}

/// Every vertex starts at level 0. In round `r` each vertex still at level
/// `r` counts its neighbors at level `r` and moves up only if the noisy count
/// clears `(1+ψ)^⌊r/(2 log₂ n)⌋ + ℓ̃`; otherwise it stops for good. The run
/// ends after `⌈4 log₂² n⌉` rounds or once nobody is left at the top level.
pub fn dp_core_levels(g: &Graph, cfg: &LevelConfig, src: NoiseSource) -> Result<LevelOutput> {
    let cfg = LevelConfig::new(cfg.epsilon, cfg.eta)?;
    let n = g.n();
    if n == 0 {
        return Err(Error::Empty("graph has no vertices"));
    }
    let params = LevelParams::new(n, cfg.eta);
    // ⊤ is "stop": f = thr − U against T̂ = −ℓ̃ is U + X ≤ thr + ℓ̃.
    let mut mat = MatState::init(MatConfig::new(vec![0.0; n], cfg.epsilon, 2.0)?, src);
    let mut levels = vec![0u64; n];
    let mut snapshot = None;

    for r in 0..params.round_bound {
        if r + 1 == params.round_bound {
            snapshot = Some(levels.clone());
        }
        if mat.active_count() == 0 {
            break;
        }
        let thr = params.threshold(r);
        let f: Vec<f64> = (0..n)
            .map(|v| {
                if levels[v] != r {
                    return f64::NEG_INFINITY;
                }
                let up = g
                    .neighbors(v as u32)
                    .iter()
                    .filter(|&&u| levels[u as usize] == r)
                    .count();
                thr - up as f64
            })
            .collect();
        let answers = mat.query(&f)?;
        for (v, a) in answers.iter().enumerate() {
            if *a == Answer::Bottom {
                levels[v] += 1;
            }
        }
    }

    let estimate_levels = snapshot.unwrap_or_else(|| levels.clone());
    let labels = estimate_levels
        .iter()
        .map(|&l| params.estimate(l))
        .collect();
    let transcript = mat.into_transcript();
    Ok(LevelOutput {
        estimates: CoreEstimates {
            algorithm: "kcore-levels".to_string(),
            epsilon: cfg.epsilon,
            eta: Some(cfg.eta),
            labels,
            rounds: transcript.round_count(),
            seed: src.seed(),
        },
        transcript,
        levels,
        estimate_levels,
        params,
    })
}

/// Vertices breaking the per-level degree bounds, as `(vertex, description)`.
///
/// A vertex that stopped at level `ℓ` may have at most `thr(ℓ) + c ln n / ε`
/// neighbors at levels `≥ ℓ`; a vertex at `ℓ > 0` needs at least
/// `thr(ℓ−1) − c ln n / ε` neighbors at levels `≥ ℓ−1`.
pub fn level_invariant_violations(
    g: &Graph,
    levels: &[u64],
    params: &LevelParams,
    epsilon: f64,
    c: f64,
) -> Vec<(u32, String)> {
    let slack = c * (g.n() as f64).ln() / epsilon;
    let mut out = Vec::new();
    for v in g.vertices() {
        let l = levels[v as usize];
        let at_least = |lvl: u64| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| levels[u as usize] >= lvl)
                .count() as f64
        };
        if l < params.round_bound {
            let up = at_least(l);
            let bound = params.threshold(l) + slack;
            if up > bound {
                out.push((
                    v,
                    format!("level {l}: {up} neighbors at or above, bound {bound}"),
                ));
            }
        }
        if l > 0 {
            let up = at_least(l - 1);
            let bound = params.threshold(l - 1) - slack;
            if up < bound {
                out.push((
                    v,
                    format!(
                        "level {l}: {up} neighbors at or above {}, need {bound}",
                        l - 1
                    ),
                ));
            }
        }
    }
    out
}

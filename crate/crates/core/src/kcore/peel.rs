use crate::error::{invalid, Error, Result};
use crate::graph::Graph;
use crate::mat::{Answer, MatConfig, MatState, Transcript};
use crate::noise::NoiseSource;

use super::fast::fast_peel_phase;
use super::CoreEstimates;

/// How the peeling threshold grows between phases.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Schedule {
    /// `k = s, 2s, 3s, …`; `None` means `s = c ln n / ε`.
    Additive { step: Option<f64> },
    /// `k = c ln n / ε`, then `k ← (1+η) k`.
    Multiplicative { eta: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeelConfig {
    pub epsilon: f64,
    pub schedule: Schedule,
    pub constant_c: f64,
    /// Run each phase with the geometric-sampling simulation instead of
    /// explicit passes. Only meaningful for the multiplicative schedule.
    pub fast_inner_loop: bool,
    /// Materialize the dense per-pass transcript in fast mode. Naive runs
    /// always record it.
    pub record_transcript: bool,
    /// Recompute induced degrees after each phase and fail on mismatch.
    pub check_invariants: bool,
}

impl PeelConfig {
    pub fn additive(epsilon: f64) -> Self {
        PeelConfig {
            epsilon,
            schedule: Schedule::Additive { step: None },
            constant_c: 60.0,
            fast_inner_loop: false,
            record_transcript: true,
            check_invariants: false,
        }
    }

    pub fn multiplicative(epsilon: f64, eta: f64) -> Self {
        PeelConfig {
            schedule: Schedule::Multiplicative { eta },
            ..Self::additive(epsilon)
        }
    }

    pub fn with_step(mut self, step: f64) -> Self {
        self.schedule = Schedule::Additive { step: Some(step) };
        self
    }

    pub fn with_constant(mut self, c: f64) -> Self {
        self.constant_c = c;
        self
    }

    pub fn fast(mut self, fast: bool) -> Self {
        self.fast_inner_loop = fast;
        self
    }

    pub fn record_transcript(mut self, record: bool) -> Self {
        self.record_transcript = record;
        self
    }

    pub fn checked(mut self, check: bool) -> Self {
        self.check_invariants = check;
        self
    }

    pub fn eta(&self) -> Option<f64> {
        match self.schedule {
            Schedule::Multiplicative { eta } => Some(eta),
            Schedule::Additive { .. } => None,
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(invalid(format!(
                "epsilon must be positive, got {}",
                self.epsilon
            )));
        }
        if !(self.constant_c.is_finite() && self.constant_c > 0.0) {
            return Err(invalid("threshold constant must be positive"));
        }
        match self.schedule {
            Schedule::Additive { step: Some(s) } if !(s.is_finite() && s > 0.0) => {
                Err(invalid(format!("additive step must be positive, got {s}")))
            }
            Schedule::Multiplicative { eta } if !(eta.is_finite() && eta > 0.0) => {
                Err(invalid(format!("eta must be positive, got {eta}")))
            }
            _ => Ok(()),
        }
    }

    /// `c ln n / ε`.
    pub fn base_threshold(&self, n: usize) -> f64 {
        self.constant_c * (n as f64).ln() / self.epsilon
    }

    fn first_threshold(&self, n: usize) -> f64 {
        match self.schedule {
            Schedule::Additive { step: Some(s) } => s,
            _ => self.base_threshold(n),
        }
    }

    fn next_threshold(&self, k: f64, n: usize) -> f64 {
        match self.schedule {
            Schedule::Additive { step } => k + step.unwrap_or_else(|| self.base_threshold(n)),
            Schedule::Multiplicative { eta } => (1.0 + eta) * k,
        }
    }

    /// Thresholds visited by the outer loop, in order.
    pub fn thresholds(&self, n: usize) -> Vec<f64> {
        let mut out = Vec::new();
        let mut k = self.first_threshold(n);
        if k <= 0.0 {
            return out;
        }
        while k <= n as f64 {
            out.push(k);
            k = self.next_threshold(k, n);
        }
        out
    }
}

/// One vertex leaving the alive set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Removal {
    pub vertex: u32,
    /// 1-based global pass index.
    pub pass: u64,
    /// Degree in the alive set the pass started from.
    pub induced_degree: u32,
}

#[derive(Debug, Clone)]
pub struct PeelOutput {
    pub estimates: CoreEstimates,
    pub transcript: Transcript,
    /// In pass order, ascending vertex id within a pass.
    pub removals: Vec<Removal>,
    /// Vertices never removed, ascending.
    pub survivors: Vec<u32>,
    /// Number of passes run; equals the transcript length when recorded.
    pub passes: u64,
}

/// Degree of every vertex inside the alive set; 0 for dead vertices.
pub fn induced_degrees(g: &Graph, alive: &[bool]) -> Vec<u32> {
    (0..g.n())
        .map(|v| {
            if !alive[v] {
                return 0;
            }
            g.neighbors(v as u32)
                .iter()
                .filter(|&&u| alive[u as usize])
                .count() as u32
        })
        .collect()
}

/// Peeling with thresholds `k = s, 2s, …` (default `s = 60 ln n / ε`).
pub fn dp_core_additive(g: &Graph, cfg: &PeelConfig, src: NoiseSource) -> Result<PeelOutput> {
    if !matches!(cfg.schedule, Schedule::Additive { .. }) {
        return Err(invalid("dp_core_additive needs an additive schedule"));
    }
    run(g, cfg, src, "kcore-additive")
}

/// Peeling with thresholds `k₀ = 60 ln n / ε` and `k ← (1+η) k`.
pub fn dp_core_multiplicative(g: &Graph, cfg: &PeelConfig, src: NoiseSource) -> Result<PeelOutput> {
    if !matches!(cfg.schedule, Schedule::Multiplicative { .. }) {
        return Err(invalid(
            "dp_core_multiplicative needs a multiplicative schedule",
        ));
    }
    run(g, cfg, src, "kcore-multiplicative")
}

pub(crate) fn run(
    g: &Graph,
    cfg: &PeelConfig,
    src: NoiseSource,
    algorithm: &str,
) -> Result<PeelOutput> {
    cfg.validate()?;
    let n = g.n();
    if n == 0 {
        return Err(Error::Empty("graph has no vertices"));
    }
    // T = 0, D = 2: the negated noisy thresholds are the per-vertex offsets,
    // and a query value k - d answers ⊤ exactly when d + ν ≤ k + offset.
    let mut mat = MatState::init(MatConfig::new(vec![0.0; n], cfg.epsilon, 2.0)?, src);
    let offsets: Vec<f64> = mat.noisy_thresholds().iter().map(|t| -t).collect();

    let mut alive = vec![true; n];
    let mut alive_count = n;
    let mut deg: Vec<u32> = (0..n).map(|v| g.degree(v as u32) as u32).collect();
    let mut labels = vec![0.0; n];
    let mut removals = Vec::new();
    let mut passes = 0u64;
    let mut fast_transcript = Transcript::new(n, cfg.epsilon, 2.0);

    for (phase, k) in cfg.thresholds(n).into_iter().enumerate() {
        if alive_count == 0 {
            break;
        }
        if cfg.fast_inner_loop {
            let limits: Vec<f64> = offsets.iter().map(|o| k + o).collect();
            let out = fast_peel_phase(g, &alive, &limits, cfg.epsilon, src, phase as u32)?;
            for step in &out.steps {
                passes += 1;
                if cfg.record_transcript {
                    let mut row: Vec<Answer> = alive
                        .iter()
                        .map(|&a| if a { Answer::Bottom } else { Answer::Inactive })
                        .collect();
                    for &(v, _) in step {
                        row[v as usize] = Answer::Top;
                    }
                    fast_transcript.push_round(row)?;
                }
                for &(v, d) in step {
                    alive[v as usize] = false;
                    removals.push(Removal {
                        vertex: v,
                        pass: passes,
                        induced_degree: d,
                    });
                }
                alive_count -= step.len();
            }
            if alive_count > 0 {
                passes += 1;
                if cfg.record_transcript {
                    let row = alive
                        .iter()
                        .map(|&a| if a { Answer::Bottom } else { Answer::Inactive })
                        .collect();
                    fast_transcript.push_round(row)?;
                }
            }
            deg = induced_degrees(g, &alive);
        } else {
            loop {
                let f: Vec<f64> = (0..n)
                    .map(|v| {
                        if alive[v] {
                            k - deg[v] as f64
                        } else {
                            f64::NEG_INFINITY
                        }
                    })
                    .collect();
                let answers = mat.query(&f)?;
                passes += 1;
                let removed: Vec<u32> = answers
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| **a == Answer::Top)
                    .map(|(v, _)| v as u32)
                    .collect();
                if removed.is_empty() {
                    break;
                }
                for &v in &removed {
                    alive[v as usize] = false;
                    removals.push(Removal {
                        vertex: v,
                        pass: passes,
                        induced_degree: deg[v as usize],
                    });
                }
                alive_count -= removed.len();
                for &v in &removed {
                    for &u in g.neighbors(v) {
                        if alive[u as usize] {
                            deg[u as usize] -= 1;
                        }
                    }
                }
                if alive_count == 0 {
                    break;
                }
            }
        }
        if cfg.check_invariants {
            let fresh = induced_degrees(g, &alive);
            if (0..n).any(|v| alive[v] && fresh[v] != deg[v]) {
                return Err(Error::Invariant(format!(
                    "induced degrees out of sync after phase {phase}"
                )));
            }
        }
        for v in 0..n {
            if alive[v] {
                labels[v] = k;
            }
        }
    }

    let transcript = if cfg.fast_inner_loop {
        fast_transcript
    } else {
        mat.into_transcript()
    };
    let survivors = (0..n as u32).filter(|&v| alive[v as usize]).collect();
    Ok(PeelOutput {
        estimates: CoreEstimates {
            algorithm: algorithm.to_string(),
            epsilon: cfg.epsilon,
            eta: cfg.eta(),
            labels,
            rounds: passes as usize,
            seed: src.seed(),
        },
        transcript,
        removals,
        survivors,
        passes,
    })
}

//! Densest subgraph from private core numbers, and the one-round
//! randomized-response estimator.

use std::cmp::Ordering;

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::graph::oracle::{argmax_subsets, check_cap, mask_to_vec};
use crate::graph::Graph;
use crate::noise::{NoiseSource, Purpose, StreamId};

/// `120 ln n / ε`, the default cutoff below the top estimate.
pub fn default_alpha(n: usize, epsilon: f64) -> f64 {
    120.0 * (n as f64).ln() / epsilon
}

/// `{v : k̂(v) ≥ k̂_max / γ − α}` in ascending order.
pub fn densest_from_cores(labels: &[f64], gamma: f64, alpha: f64) -> Result<Vec<u32>> {
    if labels.is_empty() {
        return Err(Error::Empty("no core estimates"));
    }
    if !(gamma.is_finite() && gamma >= 1.0) {
        return Err(invalid(format!("gamma must be at least 1, got {gamma}")));
    }
    if !(alpha.is_finite() && alpha >= 0.0) {
        return Err(invalid(format!("alpha must be non-negative, got {alpha}")));
    }
    let top = labels.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let cutoff = top / gamma - alpha;
    Ok((0..labels.len() as u32)
        .filter(|&v| labels[v as usize] >= cutoff)
        .collect())
}

/// One randomized-response bit per unordered pair, reported by the
/// smaller endpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RRGraph {
    pub n: usize,
    /// Probability that a reported bit equals the true one.
    pub p: f64,
    /// Pairs `(u, v)` with `u < v` in lexicographic order.
    pub bits: Vec<bool>,
}

impl RRGraph {
    fn pair_index(&self, u: usize, v: usize) -> usize {
        let (u, v) = if u < v { (u, v) } else { (v, u) };
        u * (2 * self.n - u - 1) / 2 + (v - u - 1)
    }

    pub fn bit(&self, u: u32, v: u32) -> bool {
        u != v && self.bits[self.pair_index(u as usize, v as usize)]
    }

    /// `E_R(S)`: reported edges inside `subset`.
    pub fn raw_count(&self, subset: &[u32]) -> u64 {
        let mut total = 0;
        for (i, &u) in subset.iter().enumerate() {
            for &v in &subset[i + 1..] {
                total += self.bit(u, v) as u64;
            }
        }
        total
    }

    fn masks(&self) -> Vec<u32> {
        let mut masks = vec![0u32; self.n];
        for u in 0..self.n {
            for v in u + 1..self.n {
                if self.bits[self.pair_index(u, v)] {
                    masks[u] |= 1 << v;
                    masks[v] |= 1 << u;
                }
            }
        }
        masks
    }
}

/// Keep probability `e^ε / (1 + e^ε)`; `ε = ∞` gives 1.
pub fn keep_probability(epsilon: f64) -> f64 {
    1.0 / (1.0 + (-epsilon).exp())
}

pub fn randomize_response(g: &Graph, epsilon: f64, src: NoiseSource) -> Result<RRGraph> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(invalid(format!("epsilon must be positive, got {epsilon}")));
    }
    let n = g.n();
    let p = keep_probability(epsilon);
    let mut bits = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for u in 0..n as u32 {
        let mut stream = src.stream(StreamId::new(Purpose::RandomizedResponse, u as u64, 0));
        for v in u + 1..n as u32 {
            let truth = g.has_edge(u, v);
            let keep = p >= 1.0 || stream.bernoulli(p);
            bits.push(truth == keep);
        }
    }
    Ok(RRGraph { n, p, bits })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EdgeEstimate {
    pub subset: Vec<u32>,
    pub raw_count: u64,
    /// `Ẽ(S) = (E_R(S) − C(|S|,2)(1−p)) / (2p−1)`.
    pub estimate: f64,
    pub density_estimate: f64,
}

fn pairs(s: u64) -> u64 {
    s * s.saturating_sub(1) / 2
}

pub fn edge_estimate(rr: &RRGraph, subset: &[u32]) -> Result<EdgeEstimate> {
    let mut subset = subset.to_vec();
    subset.sort_unstable();
    subset.dedup();
    if subset.is_empty() {
        return Err(Error::Empty("subset"));
    }
    if let Some(&v) = subset.iter().find(|&&v| v as usize >= rr.n) {
        return Err(Error::VertexOutOfRange {
            id: v as u64,
            n: rr.n,
        });
    }
    let raw_count = rr.raw_count(&subset);
    let s = subset.len() as u64;
    let estimate = (raw_count as f64 - pairs(s) as f64 * (1.0 - rr.p)) / (2.0 * rr.p - 1.0);
    Ok(EdgeEstimate {
        density_estimate: estimate / s as f64,
        subset,
        raw_count,
        estimate,
    })
}

/// The subset maximizing `Ẽ(S)/|S|` over all non-empty subsets.
pub fn one_round_densest(rr: &RRGraph) -> Result<EdgeEstimate> {
    check_cap(rr.n)?;
    let q = 1.0 - rr.p;
    // ρ̃(a) vs ρ̃(b) after clearing the positive factors (2p−1)|a||b|.
    let (mask, _) = argmax_subsets(&rr.masks(), |a, b| {
        let (ea, eb) = (a.count as i64, b.count as i64);
        let (sa, sb) = (a.size as i64, b.size as i64);
        let lhs = (sb * ea - sa * eb) as f64;
        let rhs = q * (sb * pairs(sa as u64) as i64 - sa * pairs(sb as u64) as i64) as f64;
        lhs.partial_cmp(&rhs).unwrap_or(Ordering::Equal)
    })?;
    edge_estimate(rr, &mask_to_vec(mask))
}

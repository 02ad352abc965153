//! Exact, non-private reference computations.

use std::cmp::Ordering;

use rayon::prelude::*;
use serde::Serialize;

use super::Graph;
use crate::error::{Error, Result};

/// Largest `n` for which subset enumeration is attempted.
pub const ENUMERATION_CAP: usize = 26;

/// Exact density `edges / size`, compared by cross-multiplication.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct Density {
    pub edges: u64,
    pub size: u64,
}

impl Density {
    pub fn new(edges: u64, size: u64) -> Self {
        assert!(size > 0, "density of an empty set");
        Density { edges, size }
    }

    pub fn as_f64(&self) -> f64 {
        self.edges as f64 / self.size as f64
    }
}

impl PartialEq for Density {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Density {}

impl PartialOrd for Density {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Density {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.edges as u128 * other.size as u128).cmp(&(other.edges as u128 * self.size as u128))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DensityReport {
    pub subset: Vec<u32>,
    pub edges_inside: u64,
    pub density: Density,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GraphStats {
    pub max_degree: usize,
    pub degeneracy: usize,
}

/// Exact core numbers by threshold peeling: for `k = 1, 2, …` repeatedly
/// strip every vertex whose induced degree is below `k`; the survivors form
/// the `k`-core and are labelled `k`.
pub fn exact_core_numbers(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut core = vec![0usize; n];
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = g.vertices().map(|v| g.degree(v)).collect();
    let mut remaining = n;
    let mut stack = Vec::new();

    for k in 1..=n {
        if remaining == 0 {
            break;
        }
        for v in 0..n {
            if alive[v] && degree[v] < k {
                alive[v] = false;
                stack.push(v as u32);
            }
        }
        while let Some(v) = stack.pop() {
            remaining -= 1;
            for &u in g.neighbors(v) {
                let u = u as usize;
                if alive[u] {
                    degree[u] -= 1;
                    if degree[u] < k {
                        alive[u] = false;
                        stack.push(u as u32);
                    }
                }
            }
        }
        for v in 0..n {
            if alive[v] {
                core[v] = k;
            }
        }
    }
    core
}

pub fn graph_stats(g: &Graph) -> GraphStats {
    GraphStats {
        max_degree: g.max_degree(),
        degeneracy: exact_core_numbers(g).into_iter().max().unwrap_or(0),
    }
}

pub fn density_of(g: &Graph, subset: &[u32]) -> Result<DensityReport> {
    if subset.is_empty() {
        return Err(Error::Empty("density of an empty vertex set"));
    }
    let mut member = vec![false; g.n()];
    let mut sorted = Vec::with_capacity(subset.len());
    for &v in subset {
        if v as usize >= g.n() {
            return Err(Error::VertexOutOfRange {
                id: v as u64,
                n: g.n(),
            });
        }
        if !member[v as usize] {
            member[v as usize] = true;
            sorted.push(v);
        }
    }
    sorted.sort_unstable();
    let edges_inside = sorted
        .iter()
        .map(|&v| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| u > v && member[u as usize])
                .count() as u64
        })
        .sum();
    Ok(DensityReport {
        density: Density::new(edges_inside, sorted.len() as u64),
        subset: sorted,
        edges_inside,
    })
}

/// Maximum-density vertex set by enumerating all non-empty subsets. Ties go
/// to the smaller set, then to the lexicographically smaller vertex list.
pub fn exact_densest_subset(g: &Graph) -> Result<DensityReport> {
    check_cap(g.n())?;
    let masks = g.adjacency_masks();
    let (mask, edges) = argmax_subsets(&masks, |a, b| {
        (a.count as u64 * b.size as u64).cmp(&(b.count as u64 * a.size as u64))
    })?;
    let subset = mask_to_vec(mask);
    Ok(DensityReport {
        density: Density::new(edges as u64, subset.len() as u64),
        subset,
        edges_inside: edges as u64,
    })
}

pub(crate) fn check_cap(n: usize) -> Result<()> {
    if n > ENUMERATION_CAP {
        return Err(Error::CapExceeded {
            n,
            cap: ENUMERATION_CAP,
        });
    }
    if n == 0 {
        return Err(Error::Empty("graph has no vertices"));
    }
    Ok(())
}

/// A candidate subset during enumeration: its bitmask, the number of edges
/// it induces in the enumerated graph, and its size.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Candidate {
    pub mask: u32,
    pub count: u32,
    pub size: u32,
}

/// Best non-empty subset under `score` (larger is better), with ties broken
/// toward smaller size and then the lexicographically smaller vertex list.
/// Returns the winning mask and its induced edge count.
pub(crate) fn argmax_subsets<F>(masks: &[u32], score: F) -> Result<(u32, u32)>
where
    F: Fn(&Candidate, &Candidate) -> Ordering + Sync,
{
    let n = masks.len();
    check_cap(n)?;
    let high_bits = n.min(6);
    let low_bits = n - high_bits;

    let better = |a: &Candidate, b: &Candidate| -> bool {
        match score(a, b) {
            Ordering::Greater => true,
            Ordering::Less => false,
            Ordering::Equal => match a.size.cmp(&b.size) {
                Ordering::Less => true,
                Ordering::Greater => false,
                Ordering::Equal => {
                    let diff = a.mask ^ b.mask;
                    diff != 0 && a.mask & (diff & diff.wrapping_neg()) != 0
                }
            },
        }
    };

    let best = (0u32..1 << high_bits)
        .into_par_iter()
        .filter_map(|high| {
            let mut set = high << low_bits;
            let mut count = induced_count(masks, set);
            let mut best: Option<Candidate> = None;
            let consider = |set: u32, count: u32, best: &mut Option<Candidate>| {
                if set == 0 {
                    return;
                }
                let cand = Candidate {
                    mask: set,
                    count,
                    size: set.count_ones(),
                };
                if best.as_ref().is_none_or(|b| better(&cand, b)) {
                    *best = Some(cand);
                }
            };
            consider(set, count, &mut best);
            for i in 1u32..1 << low_bits {
                let bit = i.trailing_zeros();
                let flag = 1u32 << bit;
                if set & flag == 0 {
                    count += (masks[bit as usize] & set).count_ones();
                    set |= flag;
                } else {
                    set &= !flag;
                    count -= (masks[bit as usize] & set).count_ones();
                }
                consider(set, count, &mut best);
            }
            best
        })
        .reduce_with(|a, b| if better(&b, &a) { b } else { a })
        .expect("at least one non-empty subset");
    Ok((best.mask, best.count))
}

fn induced_count(masks: &[u32], set: u32) -> u32 {
    let mut total = 0;
    let mut rest = set;
    while rest != 0 {
        let v = rest.trailing_zeros();
        total += (masks[v as usize] & set).count_ones();
        rest &= rest - 1;
    }
    total / 2
}

pub(crate) fn mask_to_vec(mask: u32) -> Vec<u32> {
    (0..32).filter(|&v| mask & (1 << v) != 0).collect()
}

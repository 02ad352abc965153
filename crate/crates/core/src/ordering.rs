//! Low out-degree vertex orderings.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::kcore::{dp_core_additive, dp_core_levels, LevelConfig, LevelOutput, PeelConfig};
use crate::mat::Transcript;
use crate::noise::NoiseSource;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    RemovalOrder,
    LevelSorted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Ordering {
    pub order: Vec<u32>,
    pub provenance: Provenance,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OrientationReport {
    pub out_degree: Vec<usize>,
    pub max_out_degree: usize,
}

#[derive(Debug, Clone)]
pub struct RemovalOrdering {
    pub ordering: Ordering,
    pub transcript: Transcript,
    /// Pass in which each vertex was peeled; `None` for vertices that were
    /// never peeled and were appended at the end.
    pub pass: Vec<Option<u64>>,
    /// Induced degree at the start of that pass.
    pub removal_degree: Vec<Option<u32>>,
}

#[derive(Debug, Clone)]
pub struct LevelOrdering {
    pub ordering: Ordering,
    pub levels: LevelOutput,
}

/// Vertices in the order they are peeled by the additive-step algorithm with
/// step `60 ln n / ε`, ascending id within a pass. Vertices still alive when
/// the threshold passes `n` follow in id order.
pub fn dp_ordering(g: &Graph, epsilon: f64, src: NoiseSource) -> Result<RemovalOrdering> {
    dp_ordering_with(g, &PeelConfig::additive(epsilon), src)
}

pub fn dp_ordering_with(g: &Graph, cfg: &PeelConfig, src: NoiseSource) -> Result<RemovalOrdering> {
    let out = dp_core_additive(g, cfg, src)?;
    let n = g.n();
    let mut pass = vec![None; n];
    let mut removal_degree = vec![None; n];
    let mut order = Vec::with_capacity(n);
    for r in &out.removals {
        order.push(r.vertex);
        pass[r.vertex as usize] = Some(r.pass);
        removal_degree[r.vertex as usize] = Some(r.induced_degree);
    }
    order.extend_from_slice(&out.survivors);
    Ok(RemovalOrdering {
        ordering: Ordering {
            order,
            provenance: Provenance::RemovalOrder,
        },
        transcript: out.transcript,
        pass,
        removal_degree,
    })
}

/// Vertices sorted by `(L_{R−1}, id)` from the level-based algorithm.
pub fn dp_ordering_low_rounds(
    g: &Graph,
    epsilon: f64,
    eta: f64,
    src: NoiseSource,
) -> Result<LevelOrdering> {
    let levels = dp_core_levels(g, &LevelConfig::new(epsilon, eta)?, src)?;
    let mut order: Vec<u32> = g.vertices().collect();
    order.sort_by_key(|&v| (levels.estimate_levels[v as usize], v));
    Ok(LevelOrdering {
        ordering: Ordering {
            order,
            provenance: Provenance::LevelSorted,
        },
        levels,
    })
}

/// Position of each vertex in `order`, or an error if `order` is not a
/// permutation of `0..n`.
pub fn positions(n: usize, order: &[u32]) -> Result<Vec<usize>> {
    if order.len() != n {
        return Err(Error::NotPermutation);
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        match pos.get_mut(v as usize) {
            Some(p) if *p == usize::MAX => *p = i,
            _ => return Err(Error::NotPermutation),
        }
    }
    Ok(pos)
}

/// Out-degrees when every edge points from its earlier endpoint to its later one.
pub fn orientation_outdegrees(g: &Graph, order: &[u32]) -> Result<OrientationReport> {
    let pos = positions(g.n(), order)?;
    let out_degree: Vec<usize> = g
        .vertices()
        .map(|v| {
            g.neighbors(v)
                .iter()
                .filter(|&&u| pos[u as usize] > pos[v as usize])
                .count()
        })
        .collect();
    let max_out_degree = out_degree.iter().copied().max().unwrap_or(0);
    Ok(OrientationReport {
        out_degree,
        max_out_degree,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{clique, path};

    #[test]
    fn clique_out_degrees() {
        let g = clique(4).unwrap();
        let r = orientation_outdegrees(&g, &[2, 0, 3, 1]).unwrap();
        assert_eq!(r.out_degree, vec![2, 0, 3, 1]);
        assert_eq!(r.max_out_degree, 3);
    }

    #[test]
    fn path_in_id_order() {
        let g = path(4).unwrap();
        let r = orientation_outdegrees(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(r.out_degree, vec![1, 1, 1, 0]);
    }

    #[test]
    fn rejects_non_permutations() {
        let g = path(3).unwrap();
        assert!(orientation_outdegrees(&g, &[0, 1]).is_err());
        assert!(orientation_outdegrees(&g, &[0, 1, 1]).is_err());
        assert!(orientation_outdegrees(&g, &[0, 1, 5]).is_err());
    }

    #[test]
    fn zero_noise_path_ordering() {
        let g = path(5).unwrap();
        let out = dp_ordering(&g, 1.0, NoiseSource::zero()).unwrap();
        let r = orientation_outdegrees(&g, &out.ordering.order).unwrap();
        assert!(r.max_out_degree <= 2);
    }

    #[test]
    fn isolated_vertices_lead_level_order() {
        let g = Graph::empty(3).disjoint_union(&clique(4).unwrap());
        let out = dp_ordering_low_rounds(&g, 1.0, 1.0, NoiseSource::zero()).unwrap();
        assert_eq!(&out.ordering.order[..3], &[0, 1, 2]);
    }
}

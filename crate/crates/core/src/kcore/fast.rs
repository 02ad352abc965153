use std::collections::HashMap;

use crate::error::{invalid, Result};
use crate::graph::Graph;
use crate::noise::{NoiseSource, Purpose, Scale, StreamId};

/// Result of one simulated repeat-until-stable peeling phase.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FastPhase {
    pub survivors: Vec<bool>,
    /// Removals per step as `(vertex, induced degree before the step)`,
    /// ascending by vertex. The final step that removes nobody is implicit.
    pub steps: Vec<Vec<(u32, u32)>>,
}

const NEVER: u64 = u64::MAX;

/// Peels `alive` against per-vertex limits `threshold_of[v] = k + ℓ̃(v)`
/// without visiting every alive vertex on every pass.
///
/// A vertex with induced degree `d` is removed on any given pass with
/// probability `p = Pr[Lap(8/ε) ≤ threshold_of[v] - d]`, independently of
/// the past, so its removal pass is `t + Geom(p)` until a neighbor
/// disappears and `d` changes. Only then is it resampled. `phase` keeps the
/// geometric draws of different phases apart.
pub fn fast_peel_phase(
    g: &Graph,
    alive: &[bool],
    threshold_of: &[f64],
    epsilon: f64,
    src: NoiseSource,
    phase: u32,
) -> Result<FastPhase> {
    let n = g.n();
    if alive.len() != n || threshold_of.len() != n {
        return Err(invalid(
            "alive mask and thresholds must have one entry per vertex",
        ));
    }
    let scale = Scale::new(8.0 / epsilon)?;
    let mut alive = alive.to_vec();
    let mut deg = super::induced_degrees(g, &alive);
    let mut remove_time = vec![NEVER; n];
    let mut buckets: HashMap<u64, Vec<u32>> = HashMap::new();
    let mut updated: Vec<u32> = (0..n as u32).filter(|&v| alive[v as usize]).collect();
    let mut queued = alive.clone();
    let mut steps = Vec::new();
    let mut t = 0u64;

    loop {
        for v in updated.drain(..) {
            let vi = v as usize;
            queued[vi] = false;
            let p = src.le_prob(threshold_of[vi] - deg[vi] as f64, scale);
            if p <= 0.0 {
                remove_time[vi] = NEVER;
                continue;
            }
            let id = StreamId::new(Purpose::Geometric, v as u64, t).channel(phase);
            let at = t.saturating_add(src.stream(id).geometric(p.min(1.0))?);
            remove_time[vi] = at;
            if at != NEVER {
                buckets.entry(at).or_default().push(v);
            }
        }

        t += 1;
        let mut due: Vec<u32> = buckets
            .remove(&t)
            .unwrap_or_default()
            .into_iter()
            .filter(|&v| alive[v as usize] && remove_time[v as usize] == t)
            .collect();
        if due.is_empty() {
            break;
        }
        due.sort_unstable();
        due.dedup();

        let step: Vec<(u32, u32)> = due.iter().map(|&v| (v, deg[v as usize])).collect();
        for &v in &due {
            alive[v as usize] = false;
        }
        for &v in &due {
            for &u in g.neighbors(v) {
                let ui = u as usize;
                if alive[ui] {
                    deg[ui] -= 1;
                    if !queued[ui] {
                        queued[ui] = true;
                        updated.push(u);
                    }
                }
            }
        }
        steps.push(step);
    }

    Ok(FastPhase {
        survivors: alive,
        steps,
    })
}

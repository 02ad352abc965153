//! Deterministic and seeded graph generators.

use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, PartialEq)]
pub enum Kind {
    Clique(usize),
    Path(usize),
    /// One centre (vertex 0) joined to `leaves` further vertices.
    Star {
        leaves: usize,
    },
    Gnp {
        n: usize,
        p: f64,
        seed: u64,
    },
    DisjointUnion(Vec<Kind>),
}

impl Kind {
    pub fn generate(&self) -> Result<Graph> {
        match *self {
            Kind::Clique(n) => clique(n),
            Kind::Path(n) => path(n),
            Kind::Star { leaves } => star(leaves),
            Kind::Gnp { n, p, seed } => gnp(n, p, seed),
            Kind::DisjointUnion(ref parts) => {
                if parts.is_empty() {
                    return Err(invalid("disjoint union needs at least one part"));
                }
                let mut acc = Graph::empty(0);
                for part in parts {
                    acc = acc.disjoint_union(&part.generate()?);
                }
                Ok(acc)
            }
        }
    }
}

pub fn clique(n: usize) -> Result<Graph> {
    check_size(n)?;
    let n32 = n as u32;
    Graph::from_edges(n, (0..n32).flat_map(|u| (u + 1..n32).map(move |v| (u, v))))
}

pub fn path(n: usize) -> Result<Graph> {
    check_size(n)?;
    Graph::from_edges(n, (1..n as u32).map(|v| (v - 1, v)))
}

pub fn star(leaves: usize) -> Result<Graph> {
    check_size(leaves + 1)?;
    Graph::from_edges(leaves + 1, (1..=leaves as u32).map(|v| (0, v)))
}

/// Erdős–Rényi `G(n, p)` using geometric skips over the pair sequence, so the
/// cost is proportional to the number of edges produced.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<Graph> {
    check_size(n)?;
    if !(0.0..=1.0).contains(&p) {
        return Err(invalid(format!("gnp probability {p} outside [0, 1]")));
    }
    if p == 0.0 || n < 2 {
        return Ok(Graph::empty(n));
    }
    if p == 1.0 {
        return clique(n);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let log_q = (-p).ln_1p();
    let mut edges = Vec::new();
    let (mut v, mut w): (i64, i64) = (1, -1);
    let n = n as i64;
    while v < n {
        let r: f64 = rng.random();
        w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
        while w >= v && v < n {
            w -= v;
            v += 1;
        }
        if v < n {
            edges.push((w as u32, v as u32));
        }
    }
    Graph::from_edges(n as usize, edges)
}

fn check_size(n: usize) -> Result<()> {
    if n > u32::MAX as usize {
        return Err(invalid(format!("graph size {n} too large")));
    }
    Ok(())
}

/// Textual generator description, e.g. `clique:5`, `path:4`, `star:9`,
/// `gnp:300:0.05:7`. Parts joined with `+` form a disjoint union
/// (`clique:5+path:5`). A `gnp` part without a seed takes the default seed
/// supplied to [`GeneratorSpec::with_default_seed`].
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratorSpec {
    parts: Vec<PartSpec>,
}

#[derive(Debug, Clone, PartialEq)]
enum PartSpec {
    Fixed(Kind),
    GnpUnseeded { n: usize, p: f64 },
}

impl GeneratorSpec {
    pub fn with_default_seed(&self, seed: u64) -> Kind {
        let mut kinds: Vec<Kind> = self
            .parts
            .iter()
            .map(|part| match *part {
                PartSpec::Fixed(ref k) => k.clone(),
                PartSpec::GnpUnseeded { n, p } => Kind::Gnp { n, p, seed },
            })
            .collect();
        if kinds.len() == 1 {
            kinds.pop().unwrap()
        } else {
            Kind::DisjointUnion(kinds)
        }
    }
}

impl FromStr for GeneratorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts = s
            .split('+')
            .map(|part| parse_part(part.trim()))
            .collect::<Result<Vec<_>>>()?;
        Ok(GeneratorSpec { parts })
    }
}

fn parse_part(s: &str) -> Result<PartSpec> {
    let fields: Vec<&str> = s.split(':').collect();
    let size = |i: usize| -> Result<usize> {
        fields
            .get(i)
            .ok_or_else(|| invalid(format!("generator {s:?}: missing field {i}")))?
            .parse()
            .map_err(|e| invalid(format!("generator {s:?}: {e}")))
    };
    let arity = |k: usize| -> Result<()> {
        if fields.len() == k {
            Ok(())
        } else {
            Err(invalid(format!("generator {s:?}: expected {k} fields")))
        }
    };
    let kind = match fields[0] {
        "clique" => {
            arity(2)?;
            Kind::Clique(size(1)?)
        }
        "path" => {
            arity(2)?;
            Kind::Path(size(1)?)
        }
        "star" => {
            arity(2)?;
            Kind::Star { leaves: size(1)? }
        }
        "gnp" => {
            if !(3..=4).contains(&fields.len()) {
                return Err(invalid(format!("generator {s:?}: expected gnp:n:p[:seed]")));
            }
            let n = size(1)?;
            let p: f64 = fields[2]
                .parse()
                .map_err(|e| invalid(format!("generator {s:?}: {e}")))?;
            if !(0.0..=1.0).contains(&p) {
                return Err(invalid(format!("gnp probability {p} outside [0, 1]")));
            }
            match fields.get(3) {
                None => return Ok(PartSpec::GnpUnseeded { n, p }),
                Some(seed) => Kind::Gnp {
                    n,
                    p,
                    seed: seed
                        .parse()
                        .map_err(|e| invalid(format!("generator {s:?}: {e}")))?,
                },
            }
        }
        other => return Err(invalid(format!("unknown generator kind {other:?}"))),
    };
    Ok(PartSpec::Fixed(kind))
}

//! Randomness for every mechanism in the crate.
//!
//! A [`NoiseSource`] never carries mutable state. Each draw request names a
//! [`StreamId`] (purpose, channel, vertex, round, index) and the source
//! derives an independent ChaCha substream keyed on the seed and that id.
//! Draws are therefore reproducible regardless of the order in which
//! substreams are consumed, which is what lets per-vertex work run in
//! parallel.
//!
//! [`NoiseSource::Zero`] replaces every Laplace draw by `0`, every geometric
//! draw by `⌈1/q⌉`, and every Bernoulli draw by its more likely outcome.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};

/// What a substream is used for. Distinct purposes never share draws.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
#[repr(u32)]
pub enum Purpose {
    Threshold = 1,
    Query = 2,
    Geometric = 3,
    RandomizedResponse = 4,
    Trial = 5,
    Generic = 6,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct StreamId {
    pub purpose: Purpose,
    /// Separates independent mechanism instances inside one pipeline.
    pub channel: u32,
    pub vertex: u64,
    pub round: u64,
    pub index: u64,
}

impl StreamId {
    pub fn new(purpose: Purpose, vertex: u64, round: u64) -> Self {
        StreamId {
            purpose,
            channel: 0,
            vertex,
            round,
            index: 0,
        }
    }

    pub fn channel(mut self, channel: u32) -> Self {
        self.channel = channel;
        self
    }

    pub fn index(mut self, index: u64) -> Self {
        self.index = index;
        self
    }
}

/// Positive, finite Laplace scale `b`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Scale(f64);

impl Scale {
    pub fn new(b: f64) -> Result<Self> {
        if b.is_finite() && b > 0.0 {
            Ok(Scale(b))
        } else {
            Err(invalid(format!(
                "Laplace scale must be positive and finite, got {b}"
            )))
        }
    }

    #[inline]
    pub fn get(self) -> f64 {
        self.0
    }
}

/// `Pr[Lap(b) ≤ t]`.
pub fn laplace_le_prob(t: f64, b: Scale) -> f64 {
    let b = b.0;
    if t >= 0.0 {
        1.0 - 0.5 * (-t / b).exp()
    } else {
        0.5 * (t / b).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NoiseSource {
    Seeded(u64),
    Zero,
}

impl NoiseSource {
    pub fn seeded(seed: u64) -> Self {
        NoiseSource::Seeded(seed)
    }

    pub fn zero() -> Self {
        NoiseSource::Zero
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, NoiseSource::Zero)
    }

    pub fn seed(&self) -> Option<u64> {
        match *self {
            NoiseSource::Seeded(s) => Some(s),
            NoiseSource::Zero => None,
        }
    }

    pub fn stream(&self, id: StreamId) -> NoiseStream {
        match *self {
            NoiseSource::Zero => NoiseStream { rng: None },
            NoiseSource::Seeded(seed) => {
                let mut key = [0u8; 32];
                key[0..8].copy_from_slice(&seed.to_le_bytes());
                key[8..12].copy_from_slice(&(id.purpose as u32).to_le_bytes());
                key[12..16].copy_from_slice(&id.channel.to_le_bytes());
                key[16..24].copy_from_slice(&id.vertex.to_le_bytes());
                key[24..32].copy_from_slice(&id.round.to_le_bytes());
                let mut rng = ChaCha8Rng::from_seed(key);
                rng.set_stream(id.index);
                NoiseStream { rng: Some(rng) }
            }
        }
    }

    /// First Laplace draw of the substream `id`.
    pub fn laplace(&self, id: StreamId, b: Scale) -> f64 {
        self.stream(id).laplace(b)
    }

    /// `Pr[Lap(b) ≤ t]` under this source: the closed form when seeded, and
    /// the point mass at zero (`1{t ≥ 0}`) in zero-noise mode.
    pub fn le_prob(&self, t: f64, b: Scale) -> f64 {
        match self {
            NoiseSource::Seeded(_) => laplace_le_prob(t, b),
            NoiseSource::Zero => {
                if t >= 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
        }
    }

    /// Independent source for trial `t`. Zero-noise stays zero-noise.
    pub fn derive(&self, trial: u64) -> NoiseSource {
        match *self {
            NoiseSource::Zero => NoiseSource::Zero,
            NoiseSource::Seeded(_) => {
                let mut s = self.stream(StreamId::new(Purpose::Trial, trial, 0));
                NoiseSource::Seeded(s.next_u64())
            }
        }
    }
}

/// One substream. In zero-noise mode it holds no generator.
#[derive(Debug, Clone)]
pub struct NoiseStream {
    rng: Option<ChaCha8Rng>,
}

impl NoiseStream {
    pub fn next_u64(&mut self) -> u64 {
        self.rng.as_mut().map_or(0, |r| r.next_u64())
    }

    /// Uniform in the open interval `(0, 1)`; `0.5` in zero-noise mode.
    pub fn uniform_open(&mut self) -> f64 {
        match self.rng.as_mut() {
            None => 0.5,
            Some(r) => ((r.next_u64() >> 11) as f64 + 0.5) / (1u64 << 53) as f64,
        }
    }

    /// Inverse-CDF draw from the density `exp(-|x|/b) / 2b`.
    pub fn laplace(&mut self, b: Scale) -> f64 {
        if self.rng.is_none() {
            return 0.0;
        }
        let u = self.uniform_open() - 0.5;
        -b.0 * u.signum() * (1.0 - 2.0 * u.abs()).ln()
    }

    /// Draw from `Geom(q)` on `{1, 2, …}` with `Pr[G = 1] = q`.
    ///
    /// `q ≤ 0` is an error: the caller must treat the event as never
    /// happening. Results saturate at `u64::MAX`.
    pub fn geometric(&mut self, q: f64) -> Result<u64> {
        if q.is_nan() || q <= 0.0 || q > 1.0 {
            return Err(Error::InvalidParameter(format!(
                "geometric parameter must lie in (0, 1], got {q}"
            )));
        }
        if q == 1.0 {
            return Ok(1);
        }
        let k = match self.rng {
            None => (1.0 / q).ceil(),
            Some(_) => {
                let u = self.uniform_open();
                (u.ln() / (-q).ln_1p()).ceil()
            }
        };
        Ok(if k >= u64::MAX as f64 {
            u64::MAX
        } else {
            (k as u64).max(1)
        })
    }

    /// `true` with probability `p`; the more likely outcome in zero-noise mode.
    pub fn bernoulli(&mut self, p: f64) -> bool {
        match self.rng {
            None => p >= 0.5,
            Some(_) => self.uniform_open() < p,
        }
    }
}

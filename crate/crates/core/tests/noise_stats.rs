use ledp_core::noise::{laplace_le_prob, Purpose, StreamId};
use ledp_core::{NoiseSource, Scale};

const N: usize = 100_000;

fn laplace_draws(seed: u64, b: f64) -> Vec<f64> {
    let mut s = NoiseSource::seeded(seed).stream(StreamId::new(Purpose::Generic, 0, 0));
    let b = Scale::new(b).unwrap();
    (0..N).map(|_| s.laplace(b)).collect()
}

#[test]
fn laplace_mean_is_near_zero() {
    let x = laplace_draws(1, 1.0);
    let mean = x.iter().sum::<f64>() / N as f64;
    assert!(mean.abs() <= 0.02, "mean {mean}");
}

#[test]
fn laplace_tail_matches_beta() {
    let x = laplace_draws(2, 1.0);
    let frac = x.iter().filter(|v| v.abs() > 100f64.ln()).count() as f64 / N as f64;
    assert!((frac - 0.01).abs() <= 0.005, "tail {frac}");
}

#[test]
fn laplace_passes_kolmogorov_smirnov() {
    let mut x = laplace_draws(3, 1.0);
    x.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let one = Scale::new(1.0).unwrap();
    let n = N as f64;
    let d = x
        .iter()
        .enumerate()
        .map(|(i, &v)| {
            let f = laplace_le_prob(v, one);
            (f - i as f64 / n).abs().max((i as f64 + 1.0) / n - f)
        })
        .fold(0.0, f64::max);
    let critical = ((2.0f64 / 1e-3).ln() / 2.0).sqrt() / n.sqrt();
    assert!(d < critical, "KS statistic {d} vs {critical}");
}

#[test]
fn laplace_scale_stretches_draws() {
    let a = laplace_draws(4, 1.0);
    let b = laplace_draws(4, 3.0);
    for (x, y) in a.iter().zip(&b).take(100) {
        assert!((3.0 * x - y).abs() < 1e-9);
    }
}

#[test]
fn geometric_mean_half() {
    let mut s = NoiseSource::seeded(5).stream(StreamId::new(Purpose::Geometric, 0, 0));
    let mean = (0..N)
        .map(|_| s.geometric(0.5).unwrap() as f64)
        .sum::<f64>()
        / N as f64;
    assert!((1.98..=2.02).contains(&mean), "mean {mean}");
}

#[test]
fn geometric_is_memoryless() {
    let q = 0.3;
    let mut s = NoiseSource::seeded(6).stream(StreamId::new(Purpose::Geometric, 0, 0));
    let draws: Vec<u64> = (0..N).map(|_| s.geometric(q).unwrap()).collect();
    assert!(draws.iter().all(|&g| g >= 1));
    for k in 0..4u64 {
        let beyond = draws.iter().filter(|&&g| g > k).count() as f64;
        let next = draws.iter().filter(|&&g| g == k + 1).count() as f64;
        let hazard = next / beyond;
        assert!((hazard - q).abs() <= 0.01, "k={k}: hazard {hazard}");
    }
}

#[test]
fn geometric_one_is_always_one() {
    let mut s = NoiseSource::seeded(7).stream(StreamId::new(Purpose::Geometric, 0, 0));
    assert!((0..1000).all(|_| s.geometric(1.0).unwrap() == 1));
}

#[test]
fn empirical_cdf_matches_closed_form() {
    let x = laplace_draws(8, 2.0);
    let b = Scale::new(2.0).unwrap();
    for t in [-3.0, -0.5, 0.0, 1.0, 4.0] {
        let emp = x.iter().filter(|&&v| v <= t).count() as f64 / N as f64;
        assert!((emp - laplace_le_prob(t, b)).abs() < 0.01, "t={t}");
    }
}

#[test]
fn bernoulli_frequency() {
    let mut s = NoiseSource::seeded(9).stream(StreamId::new(Purpose::Generic, 1, 0));
    let hits = (0..N).filter(|_| s.bernoulli(0.75)).count() as f64 / N as f64;
    assert!((hits - 0.75).abs() < 0.01);
}

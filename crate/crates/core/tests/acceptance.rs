//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line;
//! the test fails if any hard criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ledp_core::coloring::{defect_of, dp_color, dp_color_low_rounds, ColorConfig};
use ledp_core::densest::{
    default_alpha, densest_from_cores, edge_estimate, one_round_densest, randomize_response,
};
use ledp_core::eval::one_round_slack;
use ledp_core::graph::{clique, density_of, exact_core_numbers, exact_densest_subset, gnp, path};
use ledp_core::kcore::{
    dp_core_additive, dp_core_levels, dp_core_multiplicative, fast_peel_phase,
    level_invariant_violations, LevelConfig, LevelOutput, PeelConfig,
};
use ledp_core::mat::{Answer, MatConfig, MatState};
use ledp_core::noise::{Purpose, StreamId};
use ledp_core::ordering::{dp_ordering, dp_ordering_low_rounds, orientation_outdegrees, positions};
use ledp_core::{Graph, NoiseSource, Scale};

const SEEDS: u64 = 20;

fn ln(n: usize) -> f64 {
    (n as f64).ln()
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    let took = start.elapsed();
    if took <= limit {
        Ok(())
    } else {
        Err(format!("took {took:?}, limit {limit:?}"))
    }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn c1() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let cfg = PeelConfig::additive(1.0).with_step(1.0);
    for i in 0..200 {
        let n = rng.random_range(1..=64);
        let p = rng.random_range(0.0..0.6);
        let g = gnp(n, p, rng.random()).unwrap();
        let exact = exact_core_numbers(&g);
        let out = dp_core_additive(&g, &cfg, NoiseSource::zero()).map_err(|e| e.to_string())?;
        for (v, (k, &l)) in exact.iter().zip(&out.estimates.labels).enumerate() {
            let want = k.saturating_sub(1) as f64;
            ensure(l == want, || {
                format!("graph {i}, vertex {v}: label {l} vs {want}")
            })?;
        }
    }
    within(Duration::from_secs(5), start)?;
    Ok(format!("200 graphs exact, {:?}", start.elapsed()))
}

fn c2() -> Result<String, String> {
    let start = Instant::now();
    let n = 300;
    let bound = 120.0 * ln(n);
    let mut observed: f64 = 0.0;
    for s in 0..SEEDS {
        let g = gnp(n, 0.05, s).unwrap();
        let exact = exact_core_numbers(&g);
        let out = dp_core_additive(&g, &PeelConfig::additive(1.0), NoiseSource::seeded(s))
            .map_err(|e| e.to_string())?;
        let err = exact
            .iter()
            .zip(&out.estimates.labels)
            .map(|(&k, &l)| (l - k as f64).abs())
            .fold(0.0, f64::max);
        ensure(err <= bound, || {
            format!("seed {s}: max error {err} > {bound:.1}")
        })?;
        observed = observed.max(err);
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("max error {observed} <= {bound:.1}"))
}

/// Survivor set of one peeling phase, one noisy degree test per alive vertex
/// per pass, stopping at the first pass that removes nobody.
fn naive_phase(g: &Graph, thr: &[f64], eps: f64, src: NoiseSource) -> u32 {
    let n = g.n();
    let scale = Scale::new(8.0 / eps).unwrap();
    let mut alive = vec![true; n];
    for pass in 1.. {
        let deg: Vec<usize> = (0..n)
            .map(|v| {
                g.neighbors(v as u32)
                    .iter()
                    .filter(|&&u| alive[u as usize])
                    .count()
            })
            .collect();
        let mut removed = false;
        for v in 0..n {
            if alive[v] {
                let nu = src.laplace(StreamId::new(Purpose::Generic, v as u64, pass), scale);
                if deg[v] as f64 + nu <= thr[v] {
                    alive[v] = false;
                    removed = true;
                }
            }
        }
        if !removed {
            break;
        }
    }
    mask(&alive)
}

fn mask(alive: &[bool]) -> u32 {
    alive
        .iter()
        .enumerate()
        .filter(|(_, &a)| a)
        .map(|(v, _)| 1 << v)
        .sum()
}

fn c3() -> Result<String, String> {
    let start = Instant::now();
    let g = path(8).unwrap();
    let thr = [1.0, 1.5, 0.5, 1.0, 2.0, 0.5, 1.5, 1.0];
    let eps = 8.0;
    let trials = 100_000u64;
    let mut naive = vec![0u64; 256];
    let mut fast = vec![0u64; 256];
    let base_naive = NoiseSource::seeded(31);
    let base_fast = NoiseSource::seeded(32);
    for t in 0..trials {
        naive[naive_phase(&g, &thr, eps, base_naive.derive(t)) as usize] += 1;
        let out = fast_peel_phase(&g, &[true; 8], &thr, eps, base_fast.derive(t), 0)
            .map_err(|e| e.to_string())?;
        fast[mask(&out.survivors) as usize] += 1;
    }
    let tv = naive
        .iter()
        .zip(&fast)
        .map(|(&a, &b)| (a as f64 - b as f64).abs())
        .sum::<f64>()
        / (2.0 * trials as f64);
    ensure(tv <= 0.02, || format!("total variation {tv:.4} > 0.02"))?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("total variation {tv:.4}"))
}

fn level_runs() -> Vec<(Graph, LevelOutput)> {
    (0..SEEDS)
        .map(|s| {
            let g = gnp(300, 0.05, 100 + s).unwrap();
            let out = dp_core_levels(
                &g,
                &LevelConfig::new(1.0, 1.0).unwrap(),
                NoiseSource::seeded(s),
            )
            .unwrap();
            (g, out)
        })
        .collect()
}

fn c4(runs: &[(Graph, LevelOutput)], elapsed: Duration) -> Result<String, String> {
    let n = 300;
    let add = 240.0 * ln(n);
    let formula = (4.0 * (n as f64).log2().powi(2)).ceil() as usize;
    let mut max_rounds = 0;
    for (s, (g, out)) in runs.iter().enumerate() {
        let exact = exact_core_numbers(g);
        for (v, (&k, &l)) in exact.iter().zip(&out.estimates.labels).enumerate() {
            let k = k as f64;
            ensure(k / 3.0 - add <= l && l <= 3.0 * k + add, || {
                format!("seed {s}, vertex {v}: k = {k}, estimate {l}")
            })?;
        }
        let rounds = out.transcript.round_count();
        ensure(rounds <= formula && rounds <= 267, || {
            format!("seed {s}: {rounds} rounds (formula {formula}, stated 267)")
        })?;
        max_rounds = max_rounds.max(rounds);
    }
    ensure(elapsed <= Duration::from_secs(60), || {
        format!("took {elapsed:?}")
    })?;
    Ok(format!("max rounds {max_rounds} (formula bound {formula})"))
}

fn c5(runs: &[(Graph, LevelOutput)]) -> Result<String, String> {
    for (s, (g, out)) in runs.iter().enumerate() {
        let bad = level_invariant_violations(g, &out.levels, &out.params, 1.0, 120.0);
        ensure(bad.is_empty(), || {
            format!("seed {s}: {:?}", &bad[..bad.len().min(3)])
        })?;
    }
    Ok(format!("{} runs clean", runs.len()))
}

fn c6() -> Result<String, String> {
    let start = Instant::now();
    let g = gnp(10, 0.4, 6).unwrap();
    let s = [0u32, 1, 3, 4, 6, 8, 9];
    let true_edges = density_of(&g, &s).unwrap().edges_inside as f64;
    let trials = 50_000u64;
    let base = NoiseSource::seeded(61);
    let mean = (0..trials)
        .map(|t| {
            let rr = randomize_response(&g, 1.0, base.derive(t)).unwrap();
            edge_estimate(&rr, &s).unwrap().estimate
        })
        .sum::<f64>()
        / trials as f64;
    let bias = (mean - true_edges).abs();
    ensure(bias <= 0.15, || format!("bias {bias:.3} > 0.15"))?;

    let (n, eps) = (12, 2.0);
    let slack = one_round_slack(n, eps);
    let mut good = 0;
    let mut worst_gap: f64 = f64::NEG_INFINITY;
    for seed in 0..100 {
        let g = gnp(n, 0.4, 600 + seed).unwrap();
        let star = exact_densest_subset(&g).unwrap().density.as_f64();
        let rr = randomize_response(&g, eps, NoiseSource::seeded(seed)).unwrap();
        let best = one_round_densest(&rr).unwrap();
        let rho = density_of(&g, &best.subset).unwrap().density.as_f64();
        worst_gap = worst_gap.max(star - rho);
        if rho >= star - slack {
            good += 1;
        }
    }
    ensure(good >= 95, || format!("{good}/100 runs inside"))?;
    within(Duration::from_secs(300), start)?;
    Ok(format!(
        "bias {bias:.3}; {good}/100 inside, worst shortfall {worst_gap:.2} vs slack {slack:.2}"
    ))
}

fn c7() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst: f64 = f64::INFINITY;
    for i in 0..50 {
        let n = rng.random_range(8..=20);
        let g = gnp(n, rng.random_range(0.1..0.7), rng.random()).unwrap();
        let star = exact_densest_subset(&g).unwrap().density.as_f64();
        let est = dp_core_additive(&g, &PeelConfig::additive(1.0), NoiseSource::seeded(i))
            .unwrap()
            .estimates;
        let s = densest_from_cores(&est.labels, 1.0, default_alpha(n, 1.0)).unwrap();
        let rho = density_of(&g, &s).unwrap().density.as_f64();
        let rhs = star / 2.0 - 240.0 * ln(n);
        ensure(rho >= rhs, || format!("graph {i}: density {rho} < {rhs}"))?;
        worst = worst.min(rho / star);
    }
    let g = clique(5).unwrap().disjoint_union(&path(5).unwrap());
    let est = dp_core_additive(
        &g,
        &PeelConfig::additive(1.0).with_step(1.0),
        NoiseSource::zero(),
    )
    .unwrap()
    .estimates;
    let s = densest_from_cores(&est.labels, 1.0, 1.0).unwrap();
    ensure(s == vec![0, 1, 2, 3, 4], || format!("fixture picked {s:?}"))?;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "50 graphs inside, worst ratio to optimum {worst:.2}; fixture exact"
    ))
}

fn c8() -> Result<String, String> {
    let start = Instant::now();
    let n = 300;
    let (mut worst_plain, mut worst_low) = (0usize, 0usize);
    for s in 0..SEEDS {
        let g = gnp(n, 0.05, 800 + s).unwrap();
        let d = exact_core_numbers(&g).into_iter().max().unwrap() as f64;
        let plain = dp_ordering(&g, 1.0, NoiseSource::seeded(s)).unwrap();
        positions(n, &plain.ordering.order).map_err(|e| e.to_string())?;
        let out = orientation_outdegrees(&g, &plain.ordering.order)
            .unwrap()
            .max_out_degree;
        ensure(out as f64 <= d + 120.0 * ln(n), || {
            format!("seed {s}: out-degree {out}")
        })?;
        let low = dp_ordering_low_rounds(&g, 1.0, 1.0, NoiseSource::seeded(s)).unwrap();
        positions(n, &low.ordering.order).map_err(|e| e.to_string())?;
        let out_low = orientation_outdegrees(&g, &low.ordering.order)
            .unwrap()
            .max_out_degree;
        ensure(out_low as f64 <= 3.0 * d + 240.0 * ln(n), || {
            format!("seed {s}: low-round out-degree {out_low}")
        })?;
        worst_plain = worst_plain.max(out);
        worst_low = worst_low.max(out_low);
    }
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "max out-degree {worst_plain} / {worst_low} (low-round)"
    ))
}

fn c9() -> Result<String, String> {
    let start = Instant::now();
    let n = 300;
    let bound = 160.0 * ln(n);
    let cfg = ColorConfig::new(1.0);
    let mut worst = 0;
    let mut colors = (0, 0);
    for s in 0..SEEDS {
        let g = gnp(n, 0.05, 900 + s).unwrap();
        let d = exact_core_numbers(&g).into_iter().max().unwrap() as f64;
        for low in [false, true] {
            let out = if low {
                dp_color_low_rounds(&g, &cfg, 1.0, NoiseSource::seeded(s))
            } else {
                dp_color(&g, &cfg, NoiseSource::seeded(s))
            }
            .map_err(|e| e.to_string())?;
            let rep = defect_of(&g, &out.coloring.color).unwrap();
            ensure(rep.max_defect as f64 <= bound, || {
                format!("seed {s}, low-round {low}: defect {}", rep.max_defect)
            })?;
            worst = worst.max(rep.max_defect);
            let used = out.coloring.palette_bound;
            let color_rhs = if low {
                60.0 * (d * ln(n) + ln(n).powi(2))
            } else {
                4.0 * (1.0 + d / ln(n))
            };
            ensure(used as f64 <= color_rhs, || {
                format!("seed {s}, low-round {low}: {used} colors > {color_rhs:.1}")
            })?;
            if low {
                colors.1 = colors.1.max(used);
                for (v, &c) in out.coloring.color.iter().enumerate() {
                    let lvl = out.palette[v];
                    ensure(c > lvl * n as u64 && c <= (lvl + 1) * n as u64, || {
                        format!("vertex {v}: color {c} outside palette {lvl}")
                    })?;
                }
            } else {
                colors.0 = colors.0.max(used);
            }
        }
    }
    let k8 = clique(8).unwrap();
    let out = dp_color(
        &k8,
        &ColorConfig::new(1.0).with_threshold(1.0),
        NoiseSource::zero(),
    )
    .map_err(|e| e.to_string())?;
    let rep = defect_of(&k8, &out.coloring.color).unwrap();
    ensure(
        rep.max_defect == 0 && out.coloring.palette_bound == 8,
        || {
            format!(
                "K8: {} colors, defect {}",
                out.coloring.palette_bound, rep.max_defect
            )
        },
    )?;
    within(Duration::from_secs(60), start)?;
    Ok(format!(
        "max defect {worst} <= {bound:.1}; colors {} / {} (low-round); K8 proper",
        colors.0, colors.1
    ))
}

fn reference_single(t: f64, eps: f64, sens: f64, queries: &[f64], src: NoiseSource) -> Vec<Answer> {
    let noisy = t + src.laplace(
        StreamId::new(Purpose::Threshold, 0, 0),
        Scale::new(2.0 * sens / eps).unwrap(),
    );
    let mut done = false;
    queries
        .iter()
        .enumerate()
        .map(|(i, &f)| {
            if done {
                return Answer::Inactive;
            }
            let nu = src.laplace(
                StreamId::new(Purpose::Query, 0, i as u64 + 1),
                Scale::new(4.0 * sens / eps).unwrap(),
            );
            done = f + nu >= noisy;
            if done {
                Answer::Top
            } else {
                Answer::Bottom
            }
        })
        .collect()
}

fn c10() -> Result<String, String> {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for case in 0..10_000 {
        let d = rng.random_range(1..8);
        let thresholds: Vec<f64> = (0..d).map(|_| rng.random_range(-5.0..5.0)).collect();
        let eps = rng.random_range(0.2..4.0);
        let seed: u64 = rng.random();
        let mut state = MatState::init(
            MatConfig::new(thresholds.clone(), eps, 1.0).unwrap(),
            NoiseSource::seeded(seed),
        );
        let rounds = rng.random_range(1..15);
        for _ in 0..rounds {
            // Queries drift upward on coordinates that are still silent.
            let f: Vec<f64> = (0..d)
                .map(|j| {
                    let push = if state.is_active(j) {
                        state.query_count() as f64
                    } else {
                        0.0
                    };
                    rng.random_range(-8.0..8.0) + push
                })
                .collect();
            state.query(&f).unwrap();
        }
        let t = state.transcript();
        ensure(t.has_stop_pattern(), || {
            format!("case {case}: bad release pattern")
        })?;
        for j in 0..d {
            let col: Vec<Answer> = t.rounds.iter().map(|r| r[j]).collect();
            let first_top = col.iter().position(|a| *a == Answer::Top);
            let ok = match first_top {
                None => col.iter().all(|a| *a == Answer::Bottom),
                Some(i) => {
                    col[..i].iter().all(|a| *a == Answer::Bottom)
                        && col[i + 1..].iter().all(|a| *a == Answer::Inactive)
                }
            };
            ensure(ok, || format!("case {case}, coordinate {j}: {col:?}"))?;
            ensure(
                state.crossing_indices()[j] == first_top.map(|i| i as u64 + 1),
                || format!("case {case}, coordinate {j}: crossing index mismatch"),
            )?;
        }

        let t0 = thresholds[0];
        let queries: Vec<f64> = (0..rounds).map(|_| rng.random_range(-6.0..6.0)).collect();
        let mut single = MatState::init(
            MatConfig::new(vec![t0], eps, 1.0).unwrap(),
            NoiseSource::seeded(seed),
        );
        let got: Vec<Answer> = queries
            .iter()
            .map(|&q| single.query(&[q]).unwrap()[0])
            .collect();
        let want = reference_single(t0, eps, 1.0, &queries, NoiseSource::seeded(seed));
        ensure(got == want, || {
            format!("case {case}: {got:?} vs reference {want:?}")
        })?;
    }
    within(Duration::from_secs(30), start)?;
    Ok(format!("10000 streams, {:?}", start.elapsed()))
}

fn time_fast_run(n: usize) -> Duration {
    let g = gnp(n, 8.0 / n as f64, 11).unwrap();
    let cfg = PeelConfig::multiplicative(200.0, 0.25)
        .fast(true)
        .record_transcript(false);
    let start = Instant::now();
    dp_core_multiplicative(&g, &cfg, NoiseSource::seeded(11)).unwrap();
    start.elapsed()
}

fn c11() -> (bool, String) {
    time_fast_run(10_000);
    let small = (0..3).map(|_| time_fast_run(10_000)).min().unwrap();
    let large = (0..3).map(|_| time_fast_run(100_000)).min().unwrap();
    let ratio = large.as_secs_f64() / small.as_secs_f64();
    (
        ratio <= 15.0,
        format!("time ratio {ratio:.2} ({small:?} vs {large:?}), reported only"),
    )
}

type Check<'a> = Box<dyn FnOnce() -> Result<String, String> + 'a>;

fn main() {
    let level_start = Instant::now();
    let runs = level_runs();
    let level_time = level_start.elapsed();

    let checks: Vec<(u32, &str, Check<'_>)> = vec![
        (1, "zero-noise core equivalence", Box::new(c1)),
        (2, "additive core error", Box::new(c2)),
        (3, "fast peel distribution", Box::new(c3)),
        (
            4,
            "level algorithm band and rounds",
            Box::new(|| c4(&runs, level_time)),
        ),
        (5, "level invariants", Box::new(|| c5(&runs))),
        (6, "one-round densest", Box::new(c6)),
        (7, "densest from cores", Box::new(c7)),
        (8, "ordering out-degree", Box::new(c8)),
        (9, "coloring defect", Box::new(c9)),
        (10, "MAT mechanics", Box::new(c10)),
    ];
    let mut failed = Vec::new();
    for (id, name, check) in checks {
        let result =
            catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".to_string()));
        match result {
            Ok(detail) => println!("criterion {id:>2} PASS  {name}: {detail}"),
            Err(why) => {
                println!("criterion {id:>2} FAIL  {name}: {why}");
                failed.push(id);
            }
        }
    }
    let (ok, detail) = c11();
    let verdict = if ok { "PASS" } else { "FAIL" };
    println!("criterion 11 {verdict}  near-linear scaling: {detail}");
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

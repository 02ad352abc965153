use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use ledp_core::coloring::{defect_of, dp_color, dp_color_low_rounds, ColorConfig, ColoringOutput};
use ledp_core::densest::{
    default_alpha, densest_from_cores, one_round_densest, randomize_response,
};
use ledp_core::eval::{evaluate, one_round_slack, reference_density, EvalConfig, Target};
use ledp_core::graph::{density_of, exact_core_numbers, graph_stats, to_edge_list};
use ledp_core::kcore::{
    dp_core_additive, dp_core_levels, dp_core_multiplicative, level_invariant_violations,
    LevelConfig, PeelConfig,
};
use ledp_core::ordering::{dp_ordering, dp_ordering_low_rounds, orientation_outdegrees, positions};
use ledp_core::{Error, Graph, Result, Transcript};

use super::{Algorithm, Command};

fn ln_over(n: usize, eps: f64) -> f64 {
    (n as f64).ln() / eps
}

fn emit<T: Serialize>(common_output: Option<&Path>, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value).map_err(std::io::Error::other)?;
    text.push('\n');
    match common_output {
        Some(path) => fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn write_json<T: Serialize>(path: Option<&Path>, value: &T) -> Result<()> {
    if let Some(path) = path {
        let text = serde_json::to_string(value).map_err(std::io::Error::other)?;
        fs::write(path, text)?;
    }
    Ok(())
}

fn violation(what: impl Into<String>) -> Error {
    Error::Invariant(what.into())
}

fn check_transcript(t: &Transcript) -> Result<()> {
    if !t.has_stop_pattern() {
        return Err(violation("transcript breaks the stop pattern"));
    }
    Ok(())
}

#[derive(Serialize)]
struct ExactReport {
    algorithm: &'static str,
    labels: Vec<usize>,
    degeneracy: usize,
    max_degree: usize,
}

#[derive(Serialize)]
struct DensestReport {
    algorithm: &'static str,
    subset: Vec<u32>,
    estimated_density: Option<f64>,
    true_density: f64,
    bound_rhs: f64,
}

#[derive(Serialize)]
struct OrderingReport {
    algorithm: &'static str,
    order: Vec<u32>,
    out_degrees: Vec<usize>,
    max_out_degree: usize,
    degeneracy: usize,
    bound_rhs: f64,
}

#[derive(Serialize)]
struct ColoringReport {
    algorithm: &'static str,
    colors: Vec<u64>,
    distinct_colors: usize,
    max_defect: usize,
    bound_rhs_colors: f64,
    bound_rhs_defect: f64,
}

#[derive(Serialize)]
struct ColoringTranscripts<'a> {
    ordering: &'a Transcript,
    coloring: &'a Transcript,
}

pub fn run(command: Command) -> Result<()> {
    match command {
        Command::KcoreExact(c) => {
            let g = c.graph()?;
            let stats = graph_stats(&g);
            eprintln!(
                "kcore-exact: n={} m={} degeneracy={}",
                g.n(),
                g.m(),
                stats.degeneracy
            );
            emit(
                c.output.as_deref(),
                &ExactReport {
                    algorithm: "kcore-exact",
                    labels: exact_core_numbers(&g),
                    degeneracy: stats.degeneracy,
                    max_degree: stats.max_degree,
                },
            )
        }
        Command::KcoreDp {
            common: c,
            step,
            eta,
            fast,
        } => {
            let g = c.graph()?;
            let mut cfg = match eta {
                Some(eta) => PeelConfig::multiplicative(c.epsilon, eta).fast(fast),
                None => PeelConfig::additive(c.epsilon),
            };
            if let Some(s) = step {
                cfg = cfg.with_step(s);
            }
            let cfg = cfg.checked(c.check);
            let out = match eta {
                Some(_) => dp_core_multiplicative(&g, &cfg, c.noise())?,
                None => dp_core_additive(&g, &cfg, c.noise())?,
            };
            eprintln!(
                "{}: n={} rounds={} max label={}",
                out.estimates.algorithm,
                g.n(),
                out.estimates.rounds,
                out.estimates.max_label()
            );
            emit(c.output.as_deref(), &out.estimates)?;
            write_json(c.transcript.as_deref(), &out.transcript)?;
            if c.check {
                check_transcript(&out.transcript)?;
                if out.transcript.round_count() as u64 != out.passes {
                    return Err(violation("round count differs from pass count"));
                }
            }
            Ok(())
        }
        Command::KcoreLevels { common: c, eta } => {
            let g = c.graph()?;
            let out = dp_core_levels(&g, &LevelConfig::new(c.epsilon, eta)?, c.noise())?;
            eprintln!(
                "kcore-levels: n={} rounds={} (bound {})",
                g.n(),
                out.estimates.rounds,
                out.params.round_bound
            );
            emit(c.output.as_deref(), &out.estimates)?;
            write_json(c.transcript.as_deref(), &out.transcript)?;
            if c.check {
                check_transcript(&out.transcript)?;
                if out.transcript.round_count() as u64 > out.params.round_bound {
                    return Err(violation("level run exceeded its round bound"));
                }
                let bad =
                    level_invariant_violations(&g, &out.levels, &out.params, c.epsilon, 120.0);
                if let Some((v, msg)) = bad.first() {
                    return Err(violation(format!("vertex {v}: {msg}")));
                }
            }
            Ok(())
        }
        Command::Densest {
            common: c,
            low_rounds,
            eta,
            alpha,
        } => {
            let g = c.graph()?;
            let n = g.n();
            let (labels, gamma, transcript) = if low_rounds {
                let out = dp_core_levels(&g, &LevelConfig::new(c.epsilon, eta)?, c.noise())?;
                (out.estimates.labels, 2.0 + eta, out.transcript)
            } else {
                let out = dp_core_additive(&g, &PeelConfig::additive(c.epsilon), c.noise())?;
                (out.estimates.labels, 1.0, out.transcript)
            };
            let alpha = alpha.unwrap_or_else(|| default_alpha(n, c.epsilon));
            let subset = densest_from_cores(&labels, gamma, alpha)?;
            let true_density = density_of(&g, &subset)?.density.as_f64();
            let bound_rhs = reference_density(&g)? / (2.0 * gamma) - 240.0 * ln_over(n, c.epsilon);
            eprintln!("densest: |S|={} density={true_density}", subset.len());
            emit(
                c.output.as_deref(),
                &DensestReport {
                    algorithm: if low_rounds {
                        "densest-levels"
                    } else {
                        "densest"
                    },
                    subset,
                    estimated_density: None,
                    true_density,
                    bound_rhs,
                },
            )?;
            write_json(c.transcript.as_deref(), &transcript)?;
            if c.check {
                check_transcript(&transcript)?;
            }
            Ok(())
        }
        Command::DensestOneRound(c) => {
            let g = c.graph()?;
            let eps = if c.zero_noise {
                f64::INFINITY
            } else {
                c.epsilon
            };
            let rr = randomize_response(&g, eps, c.noise())?;
            let best = one_round_densest(&rr)?;
            let true_density = density_of(&g, &best.subset)?.density.as_f64();
            let slack = if eps.is_finite() {
                one_round_slack(g.n(), eps)
            } else {
                0.0
            };
            eprintln!(
                "densest-1round: |S|={} density={true_density}",
                best.subset.len()
            );
            emit(
                c.output.as_deref(),
                &DensestReport {
                    algorithm: "densest-1round",
                    estimated_density: Some(best.density_estimate),
                    true_density,
                    bound_rhs: reference_density(&g)? - slack,
                    subset: best.subset,
                },
            )?;
            write_json(c.transcript.as_deref(), &rr)?;
            if c.check && rr.bits.len() != g.n() * g.n().saturating_sub(1) / 2 {
                return Err(violation("randomized response must report each pair once"));
            }
            Ok(())
        }
        Command::Ordering {
            common: c,
            low_rounds,
            eta,
        } => {
            let g = c.graph()?;
            let n = g.n();
            let degeneracy = graph_stats(&g).degeneracy;
            let ln = ln_over(n, c.epsilon);
            let (order, transcript, bound_rhs, removal) = if low_rounds {
                let out = dp_ordering_low_rounds(&g, c.epsilon, eta, c.noise())?;
                let bound = (2.0 + eta) * degeneracy as f64 + 240.0 * ln;
                (out.ordering.order, out.levels.transcript, bound, None)
            } else {
                let out = dp_ordering(&g, c.epsilon, c.noise())?;
                let bound = degeneracy as f64 + 120.0 * ln;
                let removal = Some((out.pass, out.removal_degree));
                (out.ordering.order, out.transcript, bound, removal)
            };
            if c.check {
                positions(n, &order).map_err(|_| violation("ordering is not a permutation"))?;
            }
            let rep = orientation_outdegrees(&g, &order)?;
            eprintln!(
                "ordering: max out-degree={} degeneracy={degeneracy}",
                rep.max_out_degree
            );
            emit(
                c.output.as_deref(),
                &OrderingReport {
                    algorithm: if low_rounds {
                        "ordering-low-rounds"
                    } else {
                        "ordering"
                    },
                    order: order.clone(),
                    out_degrees: rep.out_degree.clone(),
                    max_out_degree: rep.max_out_degree,
                    degeneracy,
                    bound_rhs,
                },
            )?;
            write_json(c.transcript.as_deref(), &transcript)?;
            if c.check {
                check_transcript(&transcript)?;
                if let Some((pass, degree)) = removal {
                    check_removal_out_degrees(&g, &order, &pass, &degree, &rep.out_degree)?;
                }
            }
            Ok(())
        }
        Command::Coloring {
            common: c,
            low_rounds,
            eta,
            threshold_override,
            literal_loop,
        } => {
            let g = c.graph()?;
            let n = g.n();
            let mut cfg = ColorConfig::new(c.epsilon).literal(literal_loop);
            if let Some(t) = threshold_override {
                cfg = cfg.with_threshold(t);
            }
            let out = if low_rounds {
                dp_color_low_rounds(&g, &cfg, eta, c.noise())?
            } else {
                dp_color(&g, &cfg, c.noise())?
            };
            let rep = defect_of(&g, &out.coloring.color)?;
            let alpha = graph_stats(&g).degeneracy as f64;
            let ln_n = (n as f64).ln();
            let bound_rhs_colors = if low_rounds {
                60.0 * (alpha * c.epsilon * ln_n + ln_n * ln_n)
            } else {
                4.0 * (1.0 + c.epsilon * alpha / ln_n.max(f64::MIN_POSITIVE))
            };
            eprintln!(
                "coloring: colors={} max defect={}",
                out.coloring.palette_bound, rep.max_defect
            );
            emit(
                c.output.as_deref(),
                &ColoringReport {
                    algorithm: if low_rounds {
                        "coloring-low-rounds"
                    } else {
                        "coloring"
                    },
                    colors: out.coloring.color.clone(),
                    distinct_colors: out.coloring.palette_bound,
                    max_defect: rep.max_defect,
                    bound_rhs_colors,
                    bound_rhs_defect: 160.0 * ln_over(n, c.epsilon),
                },
            )?;
            write_json(
                c.transcript.as_deref(),
                &ColoringTranscripts {
                    ordering: &out.ordering_transcript,
                    coloring: &out.color_transcript,
                },
            )?;
            if c.check {
                check_transcript(&out.ordering_transcript)?;
                check_transcript(&out.color_transcript)?;
                check_coloring(&g, &out)?;
            }
            Ok(())
        }
        Command::Eval {
            common: c,
            algorithm,
            trials,
            eta,
            step,
            fast,
            threshold_override,
            literal_loop,
        } => {
            let g = c.graph()?;
            let target = match algorithm {
                Algorithm::KcoreDp => Target::KcoreAdditive { step },
                Algorithm::KcoreMultiplicative => Target::KcoreMultiplicative { eta, fast },
                Algorithm::KcoreLevels => Target::KcoreLevels { eta },
                Algorithm::Ordering => Target::Ordering,
                Algorithm::OrderingLowRounds => Target::OrderingLowRounds { eta },
                Algorithm::Coloring => Target::Coloring,
                Algorithm::ColoringLowRounds => Target::ColoringLowRounds { eta },
                Algorithm::Densest => Target::DensestCores,
                Algorithm::DensestOneRound => Target::DensestOneRound,
            };
            let report = evaluate(
                &g,
                target,
                &EvalConfig {
                    epsilon: c.epsilon,
                    trials,
                    src: c.noise(),
                    threshold_override,
                    literal_loop,
                },
            )?;
            eprintln!(
                "eval {}: {} trials, max metric {:.3}, mean {:.3}, inside bound {:.2}, {:.1} ms total",
                report.algorithm,
                report.trials.len(),
                report.max_metric,
                report.mean_metric,
                report.fraction_inside,
                report.total_wall_ms()
            );
            emit(c.output.as_deref(), &report)?;
            if c.check && report.fraction_inside < 1.0 {
                return Err(violation("some trials fell outside the error bound"));
            }
            Ok(())
        }
        Command::Generate { spec, seed, output } => {
            let g = spec.with_default_seed(seed).generate()?;
            let text = to_edge_list(&g);
            match output {
                Some(path) => fs::write(path, text)?,
                None => std::io::stdout().write_all(text.as_bytes())?,
            }
            Ok(())
        }
    }
}

/// A peeled vertex points at every neighbor alive when its pass started,
/// except same-pass neighbors placed before it.
fn check_removal_out_degrees(
    g: &Graph,
    order: &[u32],
    pass: &[Option<u64>],
    degree: &[Option<u32>],
    out_degree: &[usize],
) -> Result<()> {
    let pos = positions(g.n(), order)?;
    for v in g.vertices() {
        let (Some(p), Some(d)) = (pass[v as usize], degree[v as usize]) else {
            continue;
        };
        let earlier_same_pass = g
            .neighbors(v)
            .iter()
            .filter(|&&u| pass[u as usize] == Some(p) && pos[u as usize] < pos[v as usize])
            .count();
        if out_degree[v as usize] != d as usize - earlier_same_pass {
            return Err(violation(format!(
                "vertex {v}: out-degree disagrees with removal degree"
            )));
        }
    }
    Ok(())
}

fn check_coloring(g: &Graph, out: &ColoringOutput) -> Result<()> {
    let n = g.n() as u64;
    // Round r (1-based) is the check right after coloring color_order[r-1],
    // so an announcement in round r is visible from step r on.
    let crossed = out.color_transcript.crossings();
    for (step, &v) in out.color_order.iter().enumerate() {
        let c = out.coloring.color[v as usize];
        let level = out.palette[v as usize];
        if c <= level * n || c > (level + 1) * n {
            return Err(violation(format!(
                "vertex {v}: color {c} outside its palette"
            )));
        }
        let slot = ((c - 1) % n) as usize;
        for &u in g.neighbors(v) {
            let r = crossed[u as usize * n as usize + slot];
            if out.palette[u as usize] == level && r.is_some_and(|r| r as usize <= step) {
                return Err(violation(format!(
                    "vertex {v} took color {c} after neighbor {u} saturated it"
                )));
            }
        }
    }
    Ok(())
}

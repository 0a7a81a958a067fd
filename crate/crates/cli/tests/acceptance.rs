//! Acceptance suite. Each test prints one `criterion N: PASS/FAIL` line and
//! fails the build if its check does not hold. Run with `--nocapture` to see
//! the lines for passing tests too.

use std::time::Instant;

use progsimp::geometry::{shortcut_error, Curve, ErrorMeasure, ShortcutRef};
use progsimp::progressive::{verify_cost_increments, verify_covering_counts, ScaleSequence};
use progsimp::{
    bfs_min_links, brute_force_min_progressive, build_graph_chan_chin, build_graph_from_errors,
    compute_all_errors_hull, compute_all_errors_naive, min_progressive, min_progressive_continuous,
    min_progressive_from_errors, range_query_shortest_path,
};
use progsimp_cli::{
    run_algorithm, sample_from_sorted, sample_scales, synth_curve, Algorithm, SamplingRule,
    SynthKind,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn report(n: usize, pass: bool, detail: &str) {
    println!(
        "criterion {n}: {} - {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n} failed: {detail}");
}

fn walk(seed: u64, n: usize) -> Curve {
    synth_curve(SynthKind::RandomWalk, n, seed).unwrap()
}

#[test]
fn criterion_01_optimality_oracle() {
    let start = Instant::now();
    let mut mismatches = 0usize;
    let mut trials = 0usize;
    for seed in 0..200u64 {
        let n = 6 + (seed as usize % 5);
        let c = walk(seed, n);
        let m = compute_all_errors_naive(&c, ErrorMeasure::Hausdorff);
        let count = 1 + (seed as usize % 3);
        let Ok(scales) = sample_scales(&m, count, SamplingRule::All) else {
            continue;
        };
        let (opt, _) = min_progressive(&c, &scales, ErrorMeasure::Hausdorff).unwrap();
        let bf = brute_force_min_progressive(&c, &scales, ErrorMeasure::Hausdorff).unwrap();
        trials += 1;
        if opt.cumulative_size() != bf.cumulative_size() {
            mismatches += 1;
        }
    }
    report(
        1,
        mismatches == 0 && trials >= 200,
        &format!(
            "exact solver matched brute force on {trials} random curves ({mismatches} mismatches, {:.1}s)",
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_02_error_matrix_equivalence() {
    let start = Instant::now();
    let mut worst = 0.0f64;
    let mut curves = 0usize;
    for seed in 0..200u64 {
        let n = 10 + (seed as usize * 290) / 199;
        let c = walk(seed.wrapping_add(10_000), n);
        let naive = compute_all_errors_naive(&c, ErrorMeasure::Hausdorff);
        let hull = compute_all_errors_hull(&c);
        for (i, j, e) in naive.entries() {
            worst = worst.max((hull.get(i, j) - e).abs());
        }
        curves += 1;
    }
    report(
        2,
        worst <= 1e-9 && curves >= 200,
        &format!(
            "hull oracle vs naive on {curves} curves up to n=300, worst abs deviation {worst:.2e} ({:.1}s)",
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_03_graph_construction_equivalence() {
    let mut pairs = 0usize;
    let mut mismatches = 0usize;
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for seed in 0..25u64 {
        let n = 20 + (seed as usize % 6) * 16;
        let c = walk(seed.wrapping_add(20_000), n);
        let m = compute_all_errors_naive(&c, ErrorMeasure::Hausdorff);
        let mut values: Vec<f64> = m.entries().map(|(_, _, e)| e).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        for _ in 0..4 {
            // Tolerances strictly between consecutive error values: every
            // combinatorially distinct graph, none of the knife-edge values
            // where the two formulations may round differently.
            let k = rng.gen_range(0..values.len() - 1);
            let eps = (values[k] + values[k + 1]) / 2.0;
            let filtered = build_graph_from_errors(&m, eps).unwrap();
            let direct = build_graph_chan_chin(&c, eps).unwrap();
            pairs += 1;
            if (0..n).any(|i| filtered.row(i) != direct.row(i)) {
                mismatches += 1;
            }
        }
    }
    report(
        3,
        mismatches == 0 && pairs >= 100,
        &format!("direct graph construction matched error filtering on {pairs} (curve, eps) pairs ({mismatches} mismatches)"),
    );
}

#[test]
fn criterion_04_shortest_path_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    let mut graphs = 0usize;
    let mut mismatches = 0usize;
    for seed in 0..100u64 {
        let n = 50 + (seed as usize % 10) * 50; // up to 500
        let c = walk(seed.wrapping_add(30_000), n);
        // Error of a random shortcut as the tolerance.
        let i = rng.gen_range(0..n - 1);
        let j = rng.gen_range(i + 1..n);
        let eps = shortcut_error(
            &c,
            ShortcutRef::new(i, j, n).unwrap(),
            ErrorMeasure::Hausdorff,
        )
        .unwrap();
        let g = build_graph_chan_chin(&c, eps).unwrap();
        let explicit = g.to_explicit().unwrap();
        graphs += 1;
        for _ in 0..20 {
            let s = rng.gen_range(0..n - 1);
            let t = rng.gen_range(s + 1..n);
            let reference = bfs_min_links(&explicit, s, t).unwrap();
            for cutoff in [0.0, 4.0, f64::INFINITY] {
                let got = range_query_shortest_path(&g, s, t, cutoff).unwrap();
                if got.links != reference.links || got.vertices != reference.vertices {
                    mismatches += 1;
                }
            }
        }
    }
    report(
        4,
        mismatches == 0 && graphs >= 100,
        &format!("range-query paths matched breadth-first search on {graphs} interval sets ({mismatches} mismatches)"),
    );
}

#[test]
fn criterion_05_continuous_reduction() {
    let mut trials = 0usize;
    let mut worst = 0.0f64;
    for seed in 0..50u64 {
        let n = 6 + (seed as usize % 5);
        let c = walk(seed.wrapping_add(40_000), n);
        let cont = min_progressive_continuous(&c, ErrorMeasure::Hausdorff).unwrap();
        let m = compute_all_errors_naive(&c, ErrorMeasure::Hausdorff);
        let top = m.get(0, n - 1);
        let mut values: Vec<f64> = m
            .entries()
            .map(|(_, _, e)| e)
            .filter(|&e| e <= top)
            .collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        trials += 1;
        if values.len() <= 1 {
            worst = worst.max(cont.integral);
            continue;
        }
        let weights: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let eps = values[..values.len() - 1].to_vec();
        let scales = ScaleSequence::with_weights(eps, weights).unwrap();
        let bf = brute_force_min_progressive(&c, &scales, ErrorMeasure::Hausdorff).unwrap();
        let b = bf.weighted_size(scales.weights());
        worst = worst.max((cont.integral - b).abs() / (1.0 + b.abs()));
    }
    report(
        5,
        worst <= 1e-9 && trials >= 50,
        &format!("continuous integral matched the weighted brute-force optimum on {trials} curves, worst rel deviation {worst:.2e}"),
    );
}

#[test]
fn criterion_06_cost_structure() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut instances = 0usize;
    let mut failures = 0usize;
    for seed in 0..40u64 {
        let n = 8 + (seed as usize % 12);
        let c = walk(seed.wrapping_add(50_000), n);
        let m = compute_all_errors_naive(&c, ErrorMeasure::Hausdorff);
        let count = 2 + (rng.gen_range(0..3usize));
        let Ok(scales) = sample_scales(&m, count, SamplingRule::All) else {
            continue;
        };
        let (ps, table) = min_progressive_from_errors(&m, &scales).unwrap();
        instances += 1;
        if !verify_cost_increments(&m, &scales, &table).unwrap() {
            failures += 1;
        }
        if !verify_covering_counts(&ps, &table) {
            failures += 1;
        }
    }
    report(
        6,
        failures == 0 && instances >= 30,
        &format!("cost increments and covering-edge counts verified on {instances} instances ({failures} failures)"),
    );
}

#[test]
fn criterion_07_heuristic_orderings() {
    let start = Instant::now();
    let c = walk(707, 2000);
    let m = compute_all_errors_hull(&c);
    let scales = sample_scales(&m, 10, SamplingRule::SmallestDecile).unwrap();
    let run = |algo: Algorithm| {
        run_algorithm(&c, &scales, ErrorMeasure::Hausdorff, algo, 4.0).unwrap()
    };
    let optimal = run(Algorithm::Optimal).cumulative_size();
    let td = run(Algorithm::GreedyTd).cumulative_size();
    let bu = run(Algorithm::GreedyBu).cumulative_size();
    let cao = run(Algorithm::GreedyBuCao).cumulative_size();
    let dp_td = run(Algorithm::DpTd);
    let dp_bu = run(Algorithm::DpBu);
    // The re-simplifying bottom-up variant is checked against greedy-bu
    // (it trades validity for size, so it may undercut even the optimum);
    // the valid algorithms must never beat the exact solver, and the
    // top-down greedy is the largest of all.
    let pass = optimal <= bu
        && optimal <= dp_td.cumulative_size()
        && cao <= bu
        && td >= bu
        && td >= dp_td.cumulative_size()
        && dp_td == dp_bu;
    report(
        7,
        pass,
        &format!(
            "n=2000 m={}: optimal {optimal}, greedy-td {td}, greedy-bu {bu}, greedy-bu-cao {cao}, dp {} (td==bu: {}) ({:.1}s)",
            scales.len(),
            dp_td.cumulative_size(),
            dp_td == dp_bu,
            start.elapsed().as_secs_f64()
        ),
    );
}

#[test]
fn criterion_08_interval_compression() {
    let mut detail = String::new();
    let mut pass = true;
    for (seed, n) in [(801u64, 1000usize), (802, 1500)] {
        let c = walk(seed, n);
        let m = compute_all_errors_hull(&c);
        let mut values: Vec<f64> = m.entries().map(|(_, _, e)| e).collect();
        values.sort_by(f64::total_cmp);
        let median = values[values.len() / 2]; // ~50% graph density
        let g = build_graph_from_errors(&m, median).unwrap();
        let stats = g.stats();
        let ratio = stats.interval_count as f64 / stats.shortcut_count as f64;
        detail.push_str(&format!(
            "n={n}: density {:.2}, intervals/shortcuts {:.4}; ",
            stats.density, ratio
        ));
        pass &= ratio <= 0.2;
    }
    report(8, pass, detail.trim_end_matches("; "));
}

#[test]
fn criterion_09_performance_smoke() {
    // Recorded for regression; completion within the budget is the check.
    let mut detail = String::new();

    let c = walk(901, 5000);
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    let mut sampled: Vec<f64> = (0..2000)
        .map(|_| {
            let i = rng.gen_range(0..c.len() - 2);
            let j = rng.gen_range(i + 2..c.len());
            shortcut_error(
                &c,
                ShortcutRef::new(i, j, c.len()).unwrap(),
                ErrorMeasure::Hausdorff,
            )
            .unwrap()
        })
        .filter(|&e| e > 0.0)
        .collect();
    sampled.sort_by(f64::total_cmp);
    sampled.truncate(sampled.len() / 10);
    let scales = sample_from_sorted(&sampled, 10).unwrap();
    let start = Instant::now();
    let ps = run_algorithm(&c, &scales, ErrorMeasure::Hausdorff, Algorithm::GreedyBu, 4.0).unwrap();
    let t_bu = start.elapsed().as_secs_f64();
    detail.push_str(&format!(
        "greedy-bu n=5000 m={} -> {} in {t_bu:.1}s; ",
        scales.len(),
        ps.cumulative_size()
    ));

    let c = walk(902, 800);
    let m = compute_all_errors_hull(&c);
    let scales = sample_scales(&m, 5, SamplingRule::SmallestDecile).unwrap();
    let start = Instant::now();
    let (ps, _) = min_progressive(&c, &scales, ErrorMeasure::Hausdorff).unwrap();
    let t_opt = start.elapsed().as_secs_f64();
    detail.push_str(&format!(
        "optimal n=800 m={} -> {} in {t_opt:.1}s; ",
        scales.len(),
        ps.cumulative_size()
    ));

    let c = walk(903, 3500);
    let start = Instant::now();
    let m = compute_all_errors_hull(&c);
    let t_hull = start.elapsed().as_secs_f64();
    detail.push_str(&format!(
        "hull matrix n=3500 (top error {:.3}) in {t_hull:.1}s",
        m.get(0, c.len() - 1)
    ));

    let budget = 600.0;
    report(
        9,
        t_bu < budget && t_opt < budget && t_hull < budget,
        &detail,
    );
}

#[test]
fn criterion_10_validity_suite() {
    let mut failures = Vec::new();
    for seed in 0..10u64 {
        let n = 50 + (seed as usize % 4) * 25;
        let c = walk(seed.wrapping_add(60_000), n);
        let m = compute_all_errors_hull(&c);
        let Ok(scales) = sample_scales(&m, 4, SamplingRule::SmallestDecile) else {
            continue;
        };
        for algo in Algorithm::ALL {
            let ps = run_algorithm(&c, &scales, ErrorMeasure::Hausdorff, algo, 4.0).unwrap();
            if !ps.is_monotone() {
                failures.push(format!("{} seed {seed}: not monotone", algo.as_str()));
                continue;
            }
            let errs = ps.max_level_errors(&c, ErrorMeasure::Hausdorff);
            let mut acc = 0.0;
            for (k, (&e, &bound)) in errs.iter().zip(scales.eps()).enumerate() {
                acc += bound;
                let limit = if algo == Algorithm::GreedyBuCao { acc } else { bound };
                if e > limit {
                    failures.push(format!(
                        "{} seed {seed} scale {k}: error {e} > {limit}",
                        algo.as_str()
                    ));
                }
            }
        }
    }
    report(
        10,
        failures.is_empty(),
        &if failures.is_empty() {
            "all six algorithms produced monotone, tolerance-respecting chains on 10 curves".to_string()
        } else {
            failures.join("; ")
        },
    );
}

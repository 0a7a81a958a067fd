//! The exact progressive solver against the exhaustive reference on small
//! random curves, plus validity and structure checks on larger ones.

use progsimp::geometry::{Curve, ErrorMeasure, Point};
use progsimp::progressive::{verify_cost_increments, verify_covering_counts};
use progsimp::{
    brute_force_min_progressive, compute_all_errors_naive, greedy_bottom_up, greedy_bottom_up_cao,
    greedy_top_down, min_progressive, min_progressive_continuous, min_progressive_from_errors,
    min_progressive_weighted, ScaleSequence,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_walk(seed: u64, n: usize) -> Curve {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pts = Vec::with_capacity(n);
    let (mut x, mut y) = (0.0f64, 0.0f64);
    pts.push(Point::new(x, y));
    for _ in 1..n {
        let angle = rng.gen_range(0.0..std::f64::consts::TAU);
        let step = rng.gen_range(0.5..1.5);
        x += step * angle.cos();
        y += step * angle.sin();
        pts.push(Point::new(x, y));
    }
    Curve::new(pts).unwrap()
}

/// A few increasing tolerances that avoid the exact error values.
fn sample_scales(c: &Curve, rng: &mut ChaCha8Rng, count: usize) -> Vec<f64> {
    let m = compute_all_errors_naive(c, ErrorMeasure::Hausdorff);
    let mut values: Vec<f64> = m.entries().map(|(_, _, e)| e).collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let mut mids: Vec<f64> = vec![values[0] / 2.0];
    mids.extend(values.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    mids.push(values.last().unwrap() + 0.5);
    let mut picked: Vec<f64> = (0..count)
        .map(|_| mids[rng.gen_range(0..mids.len())])
        .collect();
    picked.sort_by(f64::total_cmp);
    picked.dedup();
    picked
}

#[test]
fn exact_solver_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(9001);
    for trial in 0..30u64 {
        let n = 6 + (trial as usize % 5);
        let c = random_walk(trial, n);
        let eps = sample_scales(&c, &mut rng, 3);
        let scales = ScaleSequence::new(eps).unwrap();
        let (opt, _) = min_progressive(&c, &scales, ErrorMeasure::Hausdorff).unwrap();
        let bf = brute_force_min_progressive(&c, &scales, ErrorMeasure::Hausdorff).unwrap();
        assert_eq!(
            opt.cumulative_size(),
            bf.cumulative_size(),
            "trial {trial} scales {:?}",
            scales.eps()
        );
        assert!(opt.is_monotone());
        assert!(bf.is_monotone());
        let errs = opt.max_level_errors(&c, ErrorMeasure::Hausdorff);
        for (e, &bound) in errs.iter().zip(scales.eps()) {
            assert!(e <= &bound, "trial {trial}: level error {e} > {bound}");
        }
    }
}

#[test]
fn weighted_solver_matches_brute_force() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..20u64 {
        let n = 6 + (trial as usize % 4);
        let c = random_walk(trial.wrapping_add(1000), n);
        let eps = sample_scales(&c, &mut rng, 3);
        let weights: Vec<f64> = eps.iter().map(|_| rng.gen_range(0.1..2.0)).collect();
        let scales = ScaleSequence::with_weights(eps, weights).unwrap();
        let (opt, _) = min_progressive_weighted(&c, &scales, ErrorMeasure::Hausdorff).unwrap();
        let bf = brute_force_min_progressive(&c, &scales, ErrorMeasure::Hausdorff).unwrap();
        let a = opt.weighted_size(scales.weights());
        let b = bf.weighted_size(scales.weights());
        assert!(
            (a - b).abs() <= 1e-9 * (1.0 + a.abs()),
            "trial {trial}: {a} vs {b}"
        );
    }
}

#[test]
fn continuous_integral_matches_weighted_brute_force() {
    for trial in 0..10u64 {
        let n = 6 + (trial as usize % 3);
        let c = random_walk(trial.wrapping_add(500), n);
        let cont = min_progressive_continuous(&c, ErrorMeasure::Hausdorff).unwrap();

        let m = compute_all_errors_naive(&c, ErrorMeasure::Hausdorff);
        let top = m.get(0, c.len() - 1);
        let mut values: Vec<f64> = m.entries().map(|(_, _, e)| e).filter(|&e| e <= top).collect();
        values.sort_by(f64::total_cmp);
        values.dedup();
        if values.len() <= 1 {
            assert_eq!(cont.integral, 0.0);
            continue;
        }
        let weights: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
        let eps = values[..values.len() - 1].to_vec();
        let scales = ScaleSequence::with_weights(eps, weights).unwrap();
        let bf = brute_force_min_progressive(&c, &scales, ErrorMeasure::Hausdorff).unwrap();
        let b = bf.weighted_size(scales.weights());
        assert!(
            (cont.integral - b).abs() <= 1e-9 * (1.0 + b.abs()),
            "trial {trial}: integral {} vs brute force {b}",
            cont.integral
        );
        // Sizes are non-increasing from breakpoint to breakpoint.
        for w in cont.breakpoints.windows(2) {
            assert!(w[1].1.len() <= w[0].1.len());
        }
    }
}

#[test]
fn cost_structure_holds_on_random_walks() {
    let mut rng = ChaCha8Rng::seed_from_u64(4242);
    for trial in 0..6u64 {
        let c = random_walk(trial.wrapping_add(90), 20);
        let eps = sample_scales(&c, &mut rng, 4);
        let scales = ScaleSequence::new(eps).unwrap();
        let m = compute_all_errors_naive(&c, ErrorMeasure::Hausdorff);
        let (ps, table) = min_progressive_from_errors(&m, &scales).unwrap();
        assert!(verify_cost_increments(&m, &scales, &table).unwrap());
        assert!(verify_covering_counts(&ps, &table));
    }
}

#[test]
fn greedy_results_are_valid_and_never_beat_optimal() {
    let mut rng = ChaCha8Rng::seed_from_u64(31337);
    for trial in 0..8u64 {
        let c = random_walk(trial.wrapping_add(7000), 35);
        let eps = sample_scales(&c, &mut rng, 4);
        let scales = ScaleSequence::new(eps).unwrap();
        let (opt, _) = min_progressive(&c, &scales, ErrorMeasure::Hausdorff).unwrap();
        let td = greedy_top_down(&c, &scales).unwrap();
        let bu = greedy_bottom_up(&c, &scales).unwrap();
        let cao = greedy_bottom_up_cao(&c, &scales).unwrap();
        for (name, ps) in [("td", &td), ("bu", &bu), ("cao", &cao)] {
            assert!(ps.is_monotone(), "{name} not monotone at trial {trial}");
        }
        // The re-simplifying variant may undercut the optimum because its
        // levels are not bound by the per-scale tolerance on the original
        // curve; the strict variants are true simplifications, so they can't.
        for (name, ps) in [("td", &td), ("bu", &bu)] {
            assert!(
                ps.cumulative_size() >= opt.cumulative_size(),
                "{name} beat the optimum at trial {trial}"
            );
        }
        // The two strict variants stay within each scale; the re-simplifying
        // one only within the accumulated tolerance.
        for ps in [&td, &bu] {
            let errs = ps.max_level_errors(&c, ErrorMeasure::Hausdorff);
            for (e, &bound) in errs.iter().zip(scales.eps()) {
                assert!(e <= &bound);
            }
        }
        let errs = cao.max_level_errors(&c, ErrorMeasure::Hausdorff);
        let mut acc = 0.0;
        for (e, &bound) in errs.iter().zip(scales.eps()) {
            acc += bound;
            assert!(e <= &acc);
        }
    }
}

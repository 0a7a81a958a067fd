//! Progressive simplification across a sequence of error scales.
//!
//! A progressive simplification of a curve under scales
//! `eps_1 < eps_2 < .. < eps_m` is a chain of vertex subsequences
//! `S_m ⊑ .. ⊑ S_1 ⊑ C` where every `S_k` is a valid simplification at
//! `eps_k` (each of its edges has shortcut error at most `eps_k`) and each
//! coarser level uses only vertices of the finer one. [`min_progressive`]
//! minimizes the total (optionally weighted) vertex count across all levels
//! exactly; the `greedy_*` and `dp_progressive` functions are the faster
//! heuristics it is measured against, and
//! [`min_progressive_continuous`] minimizes the integral of the
//! simplification size over all scales up to the error of the single
//! top-level shortcut.
//!
//! The exact algorithm assigns every shortcut `(i, j)` at every scale `k` a
//! cost: the fewest vertices that levels `1..k` must spend between `i` and
//! `j` if the shortcut `(i, j)` is an edge of `S_k`. Costs at scale 1 equal
//! `w_1`; at later scales a shortcut that was already valid one scale below
//! just gains `w_k`, while a newly valid shortcut pays `w_k` plus the
//! cheapest path between its endpoints in the previous scale's graph under
//! the previous costs. The optimal chain is read off the top scale's
//! cheapest start-to-end path and expanded downwards edge by edge.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::error_oracle::{compute_all_errors_hull, compute_all_errors_naive, ErrorMatrix};
use crate::geometry::{point_segment_distance, shortcut_error_on, Curve, ErrorMeasure, Point};
use crate::shortcut_graph::{
    build_graph_from_errors, chan_chin_points, ShortcutIntervalSet,
};
use crate::shortest_path::{range_query_shortest_path, DEFAULT_CUTOFF};

/// Strictly increasing error scales with one non-negative weight per scale.
/// [`ScaleSequence::new`] assigns unit weights.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleSequence {
    eps: Vec<f64>,
    weights: Vec<f64>,
}

impl ScaleSequence {
    pub fn new(eps: Vec<f64>) -> Result<ScaleSequence> {
        let weights = vec![1.0; eps.len()];
        ScaleSequence::with_weights(eps, weights)
    }

    pub fn with_weights(eps: Vec<f64>, weights: Vec<f64>) -> Result<ScaleSequence> {
        if eps.is_empty() || eps.iter().any(|e| !e.is_finite() || *e < 0.0) {
            return Err(Error::InvalidScales);
        }
        if eps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidScales);
        }
        if weights.len() != eps.len() || weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::InvalidWeights);
        }
        Ok(ScaleSequence { eps, weights })
    }

    pub fn eps(&self) -> &[f64] {
        &self.eps
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.eps.len()
    }

    pub fn is_empty(&self) -> bool {
        false // at least one scale by construction
    }
}

/// Per-scale shortcut costs from the exact algorithm. Entry `(k, i, j)` is
/// present iff the shortcut is valid at scale `k`.
#[derive(Clone, Debug)]
pub struct CostTable {
    n: usize,
    eps: Vec<f64>,
    // rows[k][i][j - i - 1]; NaN marks invalid shortcuts.
    rows: Vec<Vec<Vec<f64>>>,
}

impl CostTable {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn scales(&self) -> &[f64] {
        &self.eps
    }

    pub fn cost(&self, k: usize, i: usize, j: usize) -> Option<f64> {
        let v = self.rows[k][i][j - i - 1];
        if v.is_nan() {
            None
        } else {
            Some(v)
        }
    }
}

/// The result of any progressive algorithm: one vertex-index level per
/// scale, finest first, each level sorted ascending from the first to the
/// last vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ProgressiveSimplification {
    pub scales: Vec<f64>,
    pub levels: Vec<Vec<usize>>,
}

impl ProgressiveSimplification {
    pub fn cumulative_size(&self) -> usize {
        self.levels.iter().map(|l| l.len()).sum()
    }

    pub fn weighted_size(&self, weights: &[f64]) -> f64 {
        self.levels
            .iter()
            .zip(weights)
            .map(|(l, w)| l.len() as f64 * w)
            .sum()
    }

    /// Every coarser level must be a subsequence of the finer one.
    pub fn is_monotone(&self) -> bool {
        self.levels.windows(2).all(|w| is_subsequence(&w[1], &w[0]))
    }

    /// Largest shortcut error used by each level.
    pub fn max_level_errors(&self, c: &Curve, measure: ErrorMeasure) -> Vec<f64> {
        self.levels
            .iter()
            .map(|level| {
                level
                    .windows(2)
                    .map(|e| shortcut_error_on(c.points(), e[0], e[1], measure))
                    .fold(0.0f64, f64::max)
            })
            .collect()
    }
}

fn is_subsequence(small: &[usize], big: &[usize]) -> bool {
    let mut it = big.iter();
    small.iter().all(|s| it.any(|b| b == s))
}

/// Minimal breakpoint representation of the continuous problem: the
/// simplification is constant on `[eps_k, eps_{k+1})` for consecutive
/// breakpoints, and `integral` is the area under the size function from
/// zero to the top-level shortcut error.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousSimplification {
    pub breakpoints: Vec<(f64, Vec<usize>)>,
    pub integral: f64,
}

fn error_matrix_for(c: &Curve, measure: ErrorMeasure) -> ErrorMatrix {
    match measure {
        ErrorMeasure::Hausdorff => compute_all_errors_hull(c),
        _ => compute_all_errors_naive(c, measure),
    }
}

/// Cheapest single-source distances in `g` under per-shortcut costs,
/// relaxing vertices in index order (the graph is a DAG).
fn source_dp(g: &ShortcutIntervalSet, costs: &[Vec<f64>], source: usize) -> Vec<f64> {
    let n = g.n();
    let mut dist = vec![f64::INFINITY; n];
    dist[source] = 0.0;
    for v in source..n {
        let dv = dist[v];
        if !dv.is_finite() {
            continue;
        }
        for &(x, y) in g.row(v) {
            for w in x..=y {
                let cand = dv + costs[v][w - v - 1];
                if cand < dist[w] {
                    dist[w] = cand;
                }
            }
        }
    }
    dist
}

/// Cheapest path from `s` to `t` in `g` under per-shortcut costs (NaN =
/// unusable), lexicographically smallest among the optima.
fn min_cost_path(
    g: &ShortcutIntervalSet,
    costs: &[Vec<f64>],
    s: usize,
    t: usize,
) -> Result<Vec<usize>> {
    if s == t {
        return Ok(vec![s]);
    }
    let mut to_t = vec![f64::INFINITY; t + 1];
    to_t[t] = 0.0;
    for v in (s..t).rev() {
        for &(x, y) in g.row(v) {
            let (x, y) = (x.max(v + 1), y.min(t));
            for w in x..=y.min(t) {
                let c = costs[v][w - v - 1];
                if !c.is_nan() {
                    let cand = c + to_t[w];
                    if cand < to_t[v] {
                        to_t[v] = cand;
                    }
                }
            }
        }
    }
    if !to_t[s].is_finite() {
        return Err(Error::Unreachable(s, t));
    }
    let mut path = vec![s];
    let mut v = s;
    'walk: while v != t {
        for &(x, y) in g.row(v) {
            let (x, y) = (x.max(v + 1), y.min(t));
            for w in x..=y {
                let c = costs[v][w - v - 1];
                if !c.is_nan() && c + to_t[w] == to_t[v] {
                    path.push(w);
                    v = w;
                    continue 'walk;
                }
            }
        }
        unreachable!("finite distance label without a witness edge");
    }
    Ok(path)
}

/// Splices per-edge paths into one level.
fn expand_level<F>(coarse: &[usize], mut segment: F) -> Result<Vec<usize>>
where
    F: FnMut(usize, usize) -> Result<Vec<usize>>,
{
    let mut out = vec![coarse[0]];
    for e in coarse.windows(2) {
        let seg = segment(e[0], e[1])?;
        out.extend_from_slice(&seg[1..]);
    }
    Ok(out)
}

/// The exact DP over a prepared error matrix.
pub fn min_progressive_from_errors(
    m: &ErrorMatrix,
    scales: &ScaleSequence,
) -> Result<(ProgressiveSimplification, CostTable)> {
    let n = m.n();
    let eps = scales.eps();
    let weights = scales.weights();
    let graphs: Vec<ShortcutIntervalSet> = eps
        .iter()
        .map(|&e| build_graph_from_errors(m, e))
        .collect::<Result<_>>()?;

    // Cost rows per scale; NaN where the shortcut is invalid.
    let mut cost_rows: Vec<Vec<Vec<f64>>> = Vec::with_capacity(eps.len());
    let first: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = vec![f64::NAN; n - 1 - i];
            for w in graphs[0].targets(i) {
                row[w - i - 1] = weights[0];
            }
            row
        })
        .collect();
    cost_rows.push(first);
    for k in 1..eps.len() {
        let prev = &cost_rows[k - 1];
        let (g, gp) = (&graphs[k], &graphs[k - 1]);
        let wk = weights[k];
        let rows: Vec<Vec<f64>> = (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![f64::NAN; n - 1 - i];
                let mut fresh: Vec<usize> = Vec::new();
                for w in g.targets(i) {
                    let p = prev[i][w - i - 1];
                    if p.is_nan() {
                        fresh.push(w);
                    } else {
                        // Still valid one scale below: the old plan plus one
                        // more appearance of both endpoints.
                        row[w - i - 1] = p + wk;
                    }
                }
                if !fresh.is_empty() {
                    let dist = source_dp(gp, prev, i);
                    for w in fresh {
                        row[w - i - 1] = wk + dist[w];
                    }
                }
                row
            })
            .collect();
        cost_rows.push(rows);
    }

    // Extract the chain from the top scale downwards.
    let top = eps.len() - 1;
    let mut levels = vec![Vec::new(); eps.len()];
    levels[top] = min_cost_path(&graphs[top], &cost_rows[top], 0, n - 1)?;
    for k in (0..top).rev() {
        let coarse = levels[k + 1].clone();
        levels[k] = expand_level(&coarse, |i, j| min_cost_path(&graphs[k], &cost_rows[k], i, j))?;
    }

    Ok((
        ProgressiveSimplification {
            scales: eps.to_vec(),
            levels,
        },
        CostTable {
            n,
            eps: eps.to_vec(),
            rows: cost_rows,
        },
    ))
}

/// Minimal total vertex count across all scales. Cubic per scale in the
/// worst case.
pub fn min_progressive(
    c: &Curve,
    scales: &ScaleSequence,
    measure: ErrorMeasure,
) -> Result<(ProgressiveSimplification, CostTable)> {
    min_progressive_from_errors(&error_matrix_for(c, measure), scales)
}

/// Minimal weighted vertex count; identical machinery, the weights simply
/// replace the unit cost of each level.
pub fn min_progressive_weighted(
    c: &Curve,
    scales: &ScaleSequence,
    measure: ErrorMeasure,
) -> Result<(ProgressiveSimplification, CostTable)> {
    min_progressive_from_errors(&error_matrix_for(c, measure), scales)
}

/// Minimizes the integral of the simplification size over all tolerances in
/// `[0, eps_M]`, where `eps_M` is the error of the single whole-curve
/// shortcut. The size function only changes at shortcut error values, so
/// this reduces to the weighted problem over the distinct error values below
/// `eps_M`, each weighted by the gap to the next one.
pub fn min_progressive_continuous(
    c: &Curve,
    measure: ErrorMeasure,
) -> Result<ContinuousSimplification> {
    let m = error_matrix_for(c, measure);
    let n = m.n();
    let eps_top = m.get(0, n - 1);
    let mut values: Vec<f64> = m
        .entries()
        .map(|(_, _, e)| e)
        .filter(|&e| e <= eps_top)
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup();
    let last = vec![0, n - 1];
    if values.len() <= 1 {
        // Every shortcut the optimum could use is free: the whole range
        // collapses to the top-level segment.
        return Ok(ContinuousSimplification {
            breakpoints: vec![(eps_top, last)],
            integral: 0.0,
        });
    }
    let weights: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let eps: Vec<f64> = values[..values.len() - 1].to_vec();
    let scales = ScaleSequence::with_weights(eps.clone(), weights.clone())?;
    let (ps, _) = min_progressive_from_errors(&m, &scales)?;
    let integral = ps.weighted_size(&weights);
    let mut breakpoints: Vec<(f64, Vec<usize>)> =
        eps.into_iter().zip(ps.levels).collect();
    breakpoints.push((eps_top, last));
    Ok(ContinuousSimplification {
        breakpoints,
        integral,
    })
}

fn scale_graphs(c: &Curve, scales: &ScaleSequence) -> Vec<ShortcutIntervalSet> {
    scales
        .eps()
        .iter()
        .map(|&e| chan_chin_points(c.points(), e))
        .collect()
}

/// Greedy top-down: link-minimal path at the coarsest scale, then each edge
/// is independently refined by a link-minimal path one scale below.
/// Hausdorff measure.
pub fn greedy_top_down(c: &Curve, scales: &ScaleSequence) -> Result<ProgressiveSimplification> {
    greedy_top_down_with_cutoff(c, scales, DEFAULT_CUTOFF)
}

pub fn greedy_top_down_with_cutoff(
    c: &Curve,
    scales: &ScaleSequence,
    cutoff: f64,
) -> Result<ProgressiveSimplification> {
    let n = c.len();
    let graphs = scale_graphs(c, scales);
    let top = graphs.len() - 1;
    let mut levels = vec![Vec::new(); graphs.len()];
    levels[top] = range_query_shortest_path(&graphs[top], 0, n - 1, cutoff)?.vertices;
    for k in (0..top).rev() {
        let coarse = levels[k + 1].clone();
        levels[k] = expand_level(&coarse, |i, j| {
            Ok(range_query_shortest_path(&graphs[k], i, j, cutoff)?.vertices)
        })?;
    }
    Ok(ProgressiveSimplification {
        scales: scales.eps().to_vec(),
        levels,
    })
}

/// Greedy bottom-up: link-minimal simplification at the finest scale, then
/// each coarser level searches the graph restricted to the previous level's
/// vertices. Hausdorff measure.
pub fn greedy_bottom_up(c: &Curve, scales: &ScaleSequence) -> Result<ProgressiveSimplification> {
    greedy_bottom_up_with_cutoff(c, scales, DEFAULT_CUTOFF)
}

pub fn greedy_bottom_up_with_cutoff(
    c: &Curve,
    scales: &ScaleSequence,
    cutoff: f64,
) -> Result<ProgressiveSimplification> {
    let n = c.len();
    let graphs = scale_graphs(c, scales);
    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(graphs.len());
    levels.push(range_query_shortest_path(&graphs[0], 0, n - 1, cutoff)?.vertices);
    for k in 1..graphs.len() {
        let mut members = vec![false; n];
        for &v in levels.last().unwrap() {
            members[v] = true;
        }
        let pruned = graphs[k].prune(&members)?;
        levels.push(range_query_shortest_path(&pruned, 0, n - 1, cutoff)?.vertices);
    }
    Ok(ProgressiveSimplification {
        scales: scales.eps().to_vec(),
        levels,
    })
}

/// Bottom-up variant that re-simplifies the previous level as if it were the
/// input curve. Faster, but level `k` is only guaranteed to stay within the
/// sum of the first `k` scales of the original curve, not within `eps_k`.
pub fn greedy_bottom_up_cao(
    c: &Curve,
    scales: &ScaleSequence,
) -> Result<ProgressiveSimplification> {
    greedy_bottom_up_cao_with_cutoff(c, scales, DEFAULT_CUTOFF)
}

pub fn greedy_bottom_up_cao_with_cutoff(
    c: &Curve,
    scales: &ScaleSequence,
    cutoff: f64,
) -> Result<ProgressiveSimplification> {
    let n = c.len();
    let eps = scales.eps();
    let mut levels: Vec<Vec<usize>> = Vec::with_capacity(eps.len());
    let g0 = chan_chin_points(c.points(), eps[0]);
    levels.push(range_query_shortest_path(&g0, 0, n - 1, cutoff)?.vertices);
    for &e in &eps[1..] {
        let base = levels.last().unwrap();
        let sub: Vec<Point> = base.iter().map(|&v| c.point(v)).collect();
        let g = chan_chin_points(&sub, e);
        let local = range_query_shortest_path(&g, 0, sub.len() - 1, cutoff)?.vertices;
        levels.push(local.into_iter().map(|v| base[v]).collect());
    }
    Ok(ProgressiveSimplification {
        scales: eps.to_vec(),
        levels,
    })
}

/// Douglas-Peucker with a deterministic split rule: the interior vertex
/// farthest from the current segment, ties to the smallest index, recursing
/// while the distance exceeds `eps`. Returns the kept vertex indices.
pub fn douglas_peucker(c: &Curve, eps: f64) -> Result<Vec<usize>> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidEpsilon(eps));
    }
    let pts = c.points();
    let mut keep = vec![0];
    dp_rec(pts, 0, pts.len() - 1, eps, &mut keep);
    keep.push(pts.len() - 1);
    Ok(keep)
}

fn dp_rec(pts: &[Point], lo: usize, hi: usize, eps: f64, keep: &mut Vec<usize>) {
    if hi <= lo + 1 {
        return;
    }
    let mut split = lo + 1;
    let mut worst = point_segment_distance(pts[split], pts[lo], pts[hi]);
    for k in lo + 2..hi {
        let d = point_segment_distance(pts[k], pts[lo], pts[hi]);
        if d > worst {
            worst = d;
            split = k;
        }
    }
    if worst > eps {
        dp_rec(pts, lo, split, eps, keep);
        keep.push(split);
        dp_rec(pts, split, hi, eps, keep);
    }
}

/// Refinement direction for [`dp_progressive`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Direction {
    TopDown,
    BottomUp,
}

/// Progressive simplification from Douglas-Peucker alone. Because the split
/// rule is deterministic, refining the coarsest result edge by edge
/// (top-down) and re-simplifying the previous level (bottom-up) produce the
/// same chain: both equal the Douglas-Peucker recursion tree cut at each
/// tolerance.
pub fn dp_progressive(
    c: &Curve,
    scales: &ScaleSequence,
    direction: Direction,
) -> Result<ProgressiveSimplification> {
    let pts = c.points();
    let eps = scales.eps();
    let mut levels: Vec<Vec<usize>> = vec![Vec::new(); eps.len()];
    match direction {
        Direction::TopDown => {
            let top = eps.len() - 1;
            levels[top] = douglas_peucker(c, eps[top])?;
            for k in (0..top).rev() {
                let coarse = levels[k + 1].clone();
                levels[k] = expand_level(&coarse, |i, j| {
                    let mut seg = vec![i];
                    dp_rec(pts, i, j, eps[k], &mut seg);
                    seg.push(j);
                    Ok(seg)
                })?;
            }
        }
        Direction::BottomUp => {
            levels[0] = douglas_peucker(c, eps[0])?;
            for k in 1..eps.len() {
                let base = levels[k - 1].clone();
                let sub: Vec<Point> = base.iter().map(|&v| pts[v]).collect();
                let mut local = vec![0];
                dp_rec(&sub, 0, sub.len() - 1, eps[k], &mut local);
                local.push(sub.len() - 1);
                levels[k] = local.into_iter().map(|v| base[v]).collect();
            }
        }
    }
    Ok(ProgressiveSimplification {
        scales: eps.to_vec(),
        levels,
    })
}

/// Limit on the curve size accepted by [`brute_force_min_progressive`].
pub const BRUTE_FORCE_MAX_N: usize = 12;

/// Exhaustive reference: enumerates all monotone chains over the interior
/// vertex subsets and returns an optimal one. The lattice is walked with a
/// superset-minimum sweep per scale, so moderate scale counts are fine, but
/// the curve is limited to [`BRUTE_FORCE_MAX_N`] vertices.
pub fn brute_force_min_progressive(
    c: &Curve,
    scales: &ScaleSequence,
    measure: ErrorMeasure,
) -> Result<ProgressiveSimplification> {
    let n = c.len();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::TooLargeForBruteForce {
            n,
            limit: BRUTE_FORCE_MAX_N,
        });
    }
    let m = compute_all_errors_naive(c, measure);
    let eps = scales.eps();
    let weights = scales.weights();
    let bits = n - 2;
    let size = 1usize << bits;

    // valid(mask, k): does the path through {0} ∪ mask ∪ {n-1} stay within
    // eps_k? Masks index interior vertices: bit b is vertex b + 1.
    let edge_ok = |mask: usize, e: f64| -> bool {
        let mut prev = 0usize;
        let mut rest = mask;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize + 1;
            rest &= rest - 1;
            if m.get(prev, v) > e {
                return false;
            }
            prev = v;
        }
        m.get(prev, n - 1) <= e
    };

    // tables[k][mask] = cheapest chain for scales 0..=k with S_k = mask
    // (masks over interior vertices only; endpoints are implicit).
    // prev_mins[k][mask] = min of tables[k-1] over the supersets of mask,
    // kept around so the backtracking below can match values exactly.
    let mut tables: Vec<Vec<f64>> = Vec::with_capacity(eps.len());
    let mut prev_mins: Vec<Vec<f64>> = Vec::with_capacity(eps.len());
    for (k, (&e, &w)) in eps.iter().zip(weights).enumerate() {
        let prev_min: Vec<f64> = if k == 0 {
            vec![0.0; size]
        } else {
            // Superset minimum of the previous table.
            let mut sup = tables[k - 1].clone();
            for b in 0..bits {
                let bit = 1usize << b;
                for mask in (0..size).rev() {
                    if mask & bit == 0 && sup[mask | bit] < sup[mask] {
                        sup[mask] = sup[mask | bit];
                    }
                }
            }
            sup
        };
        let table: Vec<f64> = (0..size)
            .map(|mask| {
                if prev_min[mask].is_finite() && edge_ok(mask, e) {
                    w * (mask.count_ones() as f64 + 2.0) + prev_min[mask]
                } else {
                    f64::INFINITY
                }
            })
            .collect();
        tables.push(table);
        prev_mins.push(prev_min);
    }

    // Recover an optimal chain top-down, smallest mask among the optima.
    let top = tables.last().expect("at least one scale");
    let (mut mask, total) = top
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1).then(a.0.cmp(&b.0)))
        .map(|(m, &v)| (m, v))
        .expect("non-empty lattice");
    if !total.is_finite() {
        // Cannot happen: the full vertex set is valid at every scale.
        return Err(Error::Unreachable(0, n - 1));
    }
    let mut levels_rev: Vec<Vec<usize>> = Vec::with_capacity(eps.len());
    let mask_to_level = |mask: usize| -> Vec<usize> {
        let mut level = vec![0];
        for b in 0..bits {
            if mask & (1 << b) != 0 {
                level.push(b + 1);
            }
        }
        level.push(n - 1);
        level
    };
    for k in (0..eps.len()).rev() {
        levels_rev.push(mask_to_level(mask));
        if k > 0 {
            let residue = prev_mins[k][mask];
            mask = (0..size)
                .find(|&sup| sup & mask == mask && tables[k - 1][sup] == residue)
                .expect("consistent lattice tables");
        }
    }
    levels_rev.reverse();
    Ok(ProgressiveSimplification {
        scales: eps.to_vec(),
        levels: levels_rev,
    })
}

/// Structural check: every shortcut valid at two consecutive scales must
/// cost exactly the previous cost plus the new scale's weight, and every
/// newly valid shortcut must match a fresh cheapest-path computation.
pub fn verify_cost_increments(
    m: &ErrorMatrix,
    scales: &ScaleSequence,
    table: &CostTable,
) -> Result<bool> {
    let n = m.n();
    let weights = scales.weights();
    let graphs: Vec<ShortcutIntervalSet> = scales
        .eps()
        .iter()
        .map(|&e| build_graph_from_errors(m, e))
        .collect::<Result<_>>()?;
    for k in 1..graphs.len() {
        for i in 0..n - 1 {
            let dist = source_dp(&graphs[k - 1], &table.rows[k - 1], i);
            for j in graphs[k].targets(i) {
                let expect = if let Some(p) = table.cost(k - 1, i, j) {
                    p + weights[k]
                } else {
                    weights[k] + dist[j]
                };
                if table.cost(k, i, j) != Some(expect) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// Structural check for unweighted runs: the cost of every edge `(i, j)`
/// used at scale `k` equals the number of edges that levels `1..=k` place
/// inside `[i, j]` (including `(i, j)` itself).
pub fn verify_covering_counts(
    ps: &ProgressiveSimplification,
    table: &CostTable,
) -> bool {
    for (k, level) in ps.levels.iter().enumerate() {
        for e in level.windows(2) {
            let (i, j) = (e[0], e[1]);
            let mut count = 0usize;
            for low in &ps.levels[..=k] {
                count += low
                    .windows(2)
                    .filter(|f| i <= f[0] && f[1] <= j)
                    .count();
            }
            if table.cost(k, i, j) != Some(count as f64) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_fixtures::{curve_l, curve_z};

    #[test]
    fn scale_sequence_validation() {
        assert!(ScaleSequence::new(vec![]).is_err());
        assert!(ScaleSequence::new(vec![1.0, 1.0]).is_err());
        assert!(ScaleSequence::new(vec![2.0, 1.0]).is_err());
        assert!(ScaleSequence::new(vec![0.5, 1.0]).is_ok());
        assert!(ScaleSequence::with_weights(vec![0.5], vec![-1.0]).is_err());
        assert!(ScaleSequence::with_weights(vec![0.5], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn optimal_on_z_two_scales() {
        let z = curve_z();
        let scales = ScaleSequence::new(vec![0.5, 1.0]).unwrap();
        let (ps, table) = min_progressive(&z, &scales, ErrorMeasure::Hausdorff).unwrap();
        assert_eq!(ps.levels[0], vec![0, 1, 2, 3, 4]);
        assert_eq!(ps.levels[1], vec![0, 4]);
        assert_eq!(ps.cumulative_size(), 7);
        assert!(ps.is_monotone());
        assert_eq!(table.cost(1, 0, 4), Some(5.0));
        assert_eq!(table.cost(0, 0, 1), Some(1.0));
        assert_eq!(table.cost(0, 0, 4), None);
    }

    #[test]
    fn optimal_single_scale_is_min_link() {
        let z = curve_z();
        let scales = ScaleSequence::new(vec![0.5]).unwrap();
        let (ps, _) = min_progressive(&z, &scales, ErrorMeasure::Hausdorff).unwrap();
        assert_eq!(ps.cumulative_size(), 5);
    }

    #[test]
    fn scales_beyond_the_top_error_collapse() {
        let l = curve_l();
        let scales = ScaleSequence::new(vec![0.1, 0.2, 0.3]).unwrap();
        let (ps, _) = min_progressive(&l, &scales, ErrorMeasure::Hausdorff).unwrap();
        assert_eq!(ps.cumulative_size(), 6);
        for level in &ps.levels {
            assert_eq!(level, &vec![0, 3]);
        }
    }

    #[test]
    fn weighted_zero_weight_level() {
        let z = curve_z();
        let scales = ScaleSequence::with_weights(vec![0.5, 1.0], vec![0.0, 1.0]).unwrap();
        let (ps, _) = min_progressive_weighted(&z, &scales, ErrorMeasure::Hausdorff).unwrap();
        assert_eq!(ps.levels[1], vec![0, 4]);
        assert_eq!(ps.weighted_size(scales.weights()), 2.0);
    }

    #[test]
    fn continuous_on_fixtures() {
        let z = curve_z();
        let cont = min_progressive_continuous(&z, ErrorMeasure::Hausdorff).unwrap();
        let sizes: Vec<usize> = cont.breakpoints.iter().map(|(_, l)| l.len()).collect();
        assert_eq!(sizes, vec![5, 3, 2]);
        let d = 2.0 / 10.0f64.sqrt();
        assert!((cont.breakpoints[1].0 - d).abs() < 1e-12);
        assert_eq!(cont.breakpoints[2].0, 1.0);
        let expect = 5.0 * d + 3.0 * (1.0 - d);
        assert!((cont.integral - expect).abs() < 1e-12);

        let l = curve_l();
        let cont = min_progressive_continuous(&l, ErrorMeasure::Hausdorff).unwrap();
        assert_eq!(cont.breakpoints.len(), 1);
        assert_eq!(cont.breakpoints[0].1, vec![0, 3]);
        assert_eq!(cont.integral, 0.0);
    }

    #[test]
    fn brute_force_agrees_on_fixtures() {
        let z = curve_z();
        let scales = ScaleSequence::new(vec![0.5, 1.0]).unwrap();
        let bf = brute_force_min_progressive(&z, &scales, ErrorMeasure::Hausdorff).unwrap();
        assert_eq!(bf.cumulative_size(), 7);
        assert!(bf.is_monotone());
    }

    #[test]
    fn brute_force_refuses_large_input() {
        let pts = (0..20).map(|k| Point::new(k as f64, 0.0)).collect();
        let c = Curve::new(pts).unwrap();
        let scales = ScaleSequence::new(vec![0.5]).unwrap();
        assert!(matches!(
            brute_force_min_progressive(&c, &scales, ErrorMeasure::Hausdorff),
            Err(Error::TooLargeForBruteForce { n: 20, .. })
        ));
    }

    #[test]
    fn greedy_variants_on_z() {
        let z = curve_z();
        let scales = ScaleSequence::new(vec![0.5, 1.0]).unwrap();
        for ps in [
            greedy_top_down(&z, &scales).unwrap(),
            greedy_bottom_up(&z, &scales).unwrap(),
            greedy_bottom_up_cao(&z, &scales).unwrap(),
        ] {
            assert!(ps.is_monotone());
            assert_eq!(ps.levels[1], vec![0, 4]);
            assert_eq!(ps.levels[0].len(), 5);
        }
    }

    #[test]
    fn douglas_peucker_split_rule() {
        let z = curve_z();
        assert_eq!(douglas_peucker(&z, 0.5).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(douglas_peucker(&z, 1.0).unwrap(), vec![0, 4]);
        let l = curve_l();
        assert_eq!(douglas_peucker(&l, 0.0).unwrap(), vec![0, 3]);
    }

    #[test]
    fn dp_progressive_directions_agree() {
        let z = curve_z();
        let scales = ScaleSequence::new(vec![0.3, 0.5, 1.0]).unwrap();
        let td = dp_progressive(&z, &scales, Direction::TopDown).unwrap();
        let bu = dp_progressive(&z, &scales, Direction::BottomUp).unwrap();
        assert_eq!(td, bu);
        assert!(td.is_monotone());
    }

    #[test]
    fn structural_cost_checks_on_z() {
        let z = curve_z();
        let m = compute_all_errors_naive(&z, ErrorMeasure::Hausdorff);
        let scales = ScaleSequence::new(vec![0.5, 0.7, 1.0]).unwrap();
        let (ps, table) = min_progressive_from_errors(&m, &scales).unwrap();
        assert!(verify_cost_increments(&m, &scales, &table).unwrap());
        assert!(verify_covering_counts(&ps, &table));
    }
}

//! Everything behind the `progsimp` binary: curve ingestion, synthetic
//! generators, scale sampling, algorithm dispatch, and the CSV/JSON/SVG/PGM
//! writers. Kept in a library so the integration tests can drive it without
//! spawning processes.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;
use std::time::Instant;

use progsimp::geometry::{Curve, ErrorMeasure, Point};
use progsimp::progressive::{
    greedy_bottom_up_cao_with_cutoff, greedy_bottom_up_with_cutoff, greedy_top_down_with_cutoff,
    ScaleSequence,
};
use progsimp::shortcut_graph::ShortcutIntervalSet;
use progsimp::{
    build_graph_chan_chin, build_graph_from_errors, compute_all_errors_hull,
    compute_all_errors_naive, dp_progressive, min_progressive, Direction, ErrorMatrix,
    ProgressiveSimplification, DEFAULT_CUTOFF,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

/// Errors split by exit code: bad input exits 1, internal failures exit 2.
#[derive(Debug)]
pub enum CliError {
    Input(String),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 1,
            CliError::Internal(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) => write!(f, "{m}"),
            CliError::Internal(m) => write!(f, "internal error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<progsimp::Error> for CliError {
    fn from(e: progsimp::Error) -> CliError {
        use progsimp::Error::*;
        match e {
            Unreachable(..) | EmptyIntervalRow(..) | MissingWeight(..) | SizeMismatch(..)
            | VertexOutOfRange(..) => CliError::Internal(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> CliError {
        CliError::Input(e.to_string())
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Reads a curve from `x,y` CSV lines (decimal point, optional header).
/// Consecutive duplicate points are collapsed; the second value returned is
/// how many were dropped.
pub fn ingest_csv<R: BufRead>(r: R) -> CliResult<(Curve, usize)> {
    let mut pts: Vec<Point> = Vec::new();
    let mut dropped = 0usize;
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() {
            continue;
        }
        let parsed = parse_xy(t);
        match parsed {
            Some(p) => {
                if pts.last() == Some(&p) {
                    dropped += 1;
                } else {
                    pts.push(p);
                }
            }
            None if idx == 0 => {} // header
            None => {
                return Err(CliError::Input(format!(
                    "line {}: expected `x,y`, got `{t}`",
                    idx + 1
                )))
            }
        }
    }
    let c = Curve::new(pts)?;
    Ok((c, dropped))
}

fn parse_xy(line: &str) -> Option<Point> {
    let mut it = line.split(',');
    let x: f64 = it.next()?.trim().parse().ok()?;
    let y: f64 = it.next()?.trim().parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some(Point::new(x, y))
}

pub fn write_curve_csv<W: Write>(mut w: W, c: &Curve) -> CliResult<()> {
    writeln!(w, "x,y")?;
    for p in c.points() {
        writeln!(w, "{},{}", p.x, p.y)?;
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SynthKind {
    Zigzag,
    RandomWalk,
    NoisyCircle,
}

impl FromStr for SynthKind {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<SynthKind> {
        match s {
            "zigzag" => Ok(SynthKind::Zigzag),
            "random-walk" => Ok(SynthKind::RandomWalk),
            "noisy-circle" => Ok(SynthKind::NoisyCircle),
            _ => Err(CliError::Input(format!("unknown generator `{s}`"))),
        }
    }
}

/// Deterministic synthetic curves; the same kind, size and seed always yield
/// the same points.
pub fn synth_curve(kind: SynthKind, n: usize, seed: u64) -> CliResult<Curve> {
    if n < 2 {
        return Err(CliError::Input(format!(
            "generator needs at least 2 points, got {n}"
        )));
    }
    let pts = match kind {
        SynthKind::Zigzag => (0..n)
            .map(|k| Point::new(k as f64, (k % 2) as f64))
            .collect(),
        SynthKind::RandomWalk => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let (mut x, mut y) = (0.0f64, 0.0f64);
            let mut pts = vec![Point::new(x, y)];
            for _ in 1..n {
                let angle = rng.gen_range(0.0..std::f64::consts::TAU);
                let step = rng.gen_range(0.5..1.5);
                x += step * angle.cos();
                y += step * angle.sin();
                pts.push(Point::new(x, y));
            }
            pts
        }
        SynthKind::NoisyCircle => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let radius = 10.0;
            (0..n)
                .map(|k| {
                    // Stop short of a full turn so the endpoints differ.
                    let theta = 0.9 * std::f64::consts::TAU * k as f64 / n as f64;
                    let r = radius + rng.gen_range(-0.3..0.3);
                    Point::new(r * theta.cos(), r * theta.sin())
                })
                .collect()
        }
    };
    Ok(Curve::new(pts)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SamplingRule {
    /// Sample from the smallest tenth of the positive shortcut errors.
    SmallestDecile,
    /// Sample from all positive shortcut errors.
    All,
}

impl FromStr for SamplingRule {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<SamplingRule> {
        match s {
            "decile" => Ok(SamplingRule::SmallestDecile),
            "all" => Ok(SamplingRule::All),
            _ => Err(CliError::Input(format!("unknown sampling rule `{s}`"))),
        }
    }
}

/// Picks `count` tolerances linearly spaced through the sorted positive
/// shortcut errors (their multiset, so repeated values weigh more), then
/// drops duplicates.
pub fn sample_scales(m: &ErrorMatrix, count: usize, rule: SamplingRule) -> CliResult<ScaleSequence> {
    if count == 0 {
        return Err(CliError::Input("scale count must be at least 1".into()));
    }
    let mut values: Vec<f64> = m.entries().map(|(_, _, e)| e).filter(|&e| e > 0.0).collect();
    if values.is_empty() {
        return Err(CliError::Input(
            "all shortcut errors are zero (collinear curve); pass explicit --epsilons".into(),
        ));
    }
    values.sort_by(f64::total_cmp);
    if rule == SamplingRule::SmallestDecile {
        let keep = (values.len() + 9) / 10;
        values.truncate(keep.max(1));
    }
    Ok(sample_from_sorted(&values, count)?)
}

/// Same linear sampling, but over an arbitrary pre-sorted value list; used
/// when the full error matrix is too big to materialize.
pub fn sample_from_sorted(values: &[f64], count: usize) -> CliResult<ScaleSequence> {
    let l = values.len();
    let mut eps: Vec<f64> = (0..count)
        .map(|i| values[(((i as f64 + 0.5) * l as f64 / count as f64) as usize).min(l - 1)])
        .collect();
    eps.sort_by(f64::total_cmp);
    eps.dedup();
    Ok(ScaleSequence::new(eps)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    Optimal,
    GreedyTd,
    GreedyBu,
    GreedyBuCao,
    DpTd,
    DpBu,
}

impl Algorithm {
    pub const ALL: [Algorithm; 6] = [
        Algorithm::Optimal,
        Algorithm::GreedyTd,
        Algorithm::GreedyBu,
        Algorithm::GreedyBuCao,
        Algorithm::DpTd,
        Algorithm::DpBu,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Optimal => "optimal",
            Algorithm::GreedyTd => "greedy-td",
            Algorithm::GreedyBu => "greedy-bu",
            Algorithm::GreedyBuCao => "greedy-bu-cao",
            Algorithm::DpTd => "dp-td",
            Algorithm::DpBu => "dp-bu",
        }
    }
}

impl FromStr for Algorithm {
    type Err = CliError;
    fn from_str(s: &str) -> CliResult<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| CliError::Input(format!("unknown algorithm `{s}`")))
    }
}

/// Runs one algorithm. Only the exact solver supports non-Hausdorff
/// measures; the heuristics build their graphs directly from the geometry.
pub fn run_algorithm(
    c: &Curve,
    scales: &ScaleSequence,
    measure: ErrorMeasure,
    algo: Algorithm,
    cutoff: f64,
) -> CliResult<ProgressiveSimplification> {
    if algo != Algorithm::Optimal && measure != ErrorMeasure::Hausdorff {
        return Err(CliError::Input(format!(
            "algorithm `{}` supports only the hausdorff measure",
            algo.as_str()
        )));
    }
    Ok(match algo {
        Algorithm::Optimal => min_progressive(c, scales, measure)?.0,
        Algorithm::GreedyTd => greedy_top_down_with_cutoff(c, scales, cutoff)?,
        Algorithm::GreedyBu => greedy_bottom_up_with_cutoff(c, scales, cutoff)?,
        Algorithm::GreedyBuCao => greedy_bottom_up_cao_with_cutoff(c, scales, cutoff)?,
        Algorithm::DpTd => dp_progressive(c, scales, Direction::TopDown)?,
        Algorithm::DpBu => dp_progressive(c, scales, Direction::BottomUp)?,
    })
}

pub fn write_simplification_csv<W: Write>(
    mut w: W,
    ps: &ProgressiveSimplification,
) -> CliResult<()> {
    writeln!(w, "scale_index,epsilon,vertex_index")?;
    for (k, level) in ps.levels.iter().enumerate() {
        for &v in level {
            writeln!(w, "{},{},{}", k + 1, ps.scales[k], v + 1)?;
        }
    }
    Ok(())
}

pub fn read_simplification_csv<R: BufRead>(r: R) -> CliResult<ProgressiveSimplification> {
    let mut scales: Vec<f64> = Vec::new();
    let mut levels: Vec<Vec<usize>> = Vec::new();
    for (idx, line) in r.lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || idx == 0 {
            continue;
        }
        let bad = || CliError::Input(format!("line {}: bad simplification row `{t}`", idx + 1));
        let mut it = t.split(',');
        let k: usize = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let eps: f64 = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        let v: usize = it.next().and_then(|s| s.parse().ok()).ok_or_else(bad)?;
        if k == 0 || v == 0 || k > levels.len() + 1 {
            return Err(bad());
        }
        if k == levels.len() + 1 {
            levels.push(Vec::new());
            scales.push(eps);
        }
        levels[k - 1].push(v - 1);
    }
    if levels.is_empty() {
        return Err(CliError::Input("empty simplification file".into()));
    }
    Ok(ProgressiveSimplification { scales, levels })
}

pub fn write_continuous_csv<W: Write>(
    mut w: W,
    cont: &progsimp::ContinuousSimplification,
) -> CliResult<()> {
    writeln!(w, "breakpoint_epsilon,vertex_index")?;
    for (eps, level) in &cont.breakpoints {
        for &v in level {
            writeln!(w, "{},{}", eps, v + 1)?;
        }
    }
    writeln!(w, "integral,{}", cont.integral)?;
    Ok(())
}

/// Interval-set dump: one `i,x,y` line per interval, 1-based like the matrix
/// export.
pub fn write_intervals_csv<W: Write>(mut w: W, g: &ShortcutIntervalSet) -> CliResult<()> {
    writeln!(w, "i,x,y")?;
    for i in 0..g.n() {
        for &(x, y) in g.row(i) {
            writeln!(w, "{},{},{}", i + 1, x + 1, y + 1)?;
        }
    }
    Ok(())
}

/// Adjacency raster as a plain-text PGM: valid shortcuts black on white.
pub fn write_density_pgm<W: Write>(mut w: W, g: &ShortcutIntervalSet) -> CliResult<()> {
    let n = g.n();
    writeln!(w, "P2\n{n} {n}\n255")?;
    for i in 0..n {
        let mut row = vec![255u8; n];
        for &(x, y) in g.row(i) {
            for cell in &mut row[x..=y] {
                *cell = 0;
            }
        }
        let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(w, "{}", line.join(" "))?;
    }
    Ok(())
}

#[derive(Serialize)]
pub struct RunSummary {
    pub algorithm: String,
    pub n: usize,
    pub scales: Vec<f64>,
    pub sizes: Vec<usize>,
    pub cumulative: usize,
    pub wall_ms: f64,
}

pub fn summarize(algo: Algorithm, n: usize, ps: &ProgressiveSimplification, wall_ms: f64) -> RunSummary {
    RunSummary {
        algorithm: algo.as_str().to_string(),
        n,
        scales: ps.scales.clone(),
        sizes: ps.levels.iter().map(|l| l.len()).collect(),
        cumulative: ps.cumulative_size(),
        wall_ms,
    }
}

/// One benchmark row; `sizes` always sums to `cumulative`.
#[derive(Serialize)]
pub struct BenchRecord {
    pub algorithm: String,
    pub n: usize,
    pub m: usize,
    pub wall_ms: f64,
    pub cumulative: usize,
    pub sizes: Vec<usize>,
    pub shortcut_count: usize,
    pub interval_count: usize,
}

/// Runs every algorithm over every curve prefix. Failures of individual
/// runs are reported on `log` and skipped.
pub fn run_bench<W: Write, L: Write>(
    c: &Curve,
    ns: &[usize],
    num_scales: usize,
    rule: SamplingRule,
    algos: &[Algorithm],
    cutoff: f64,
    mut records_out: W,
    mut log: L,
) -> CliResult<Vec<BenchRecord>> {
    let mut records = Vec::new();
    writeln!(
        records_out,
        "algorithm,n,m,wall_ms,cumulative,sizes,shortcuts,intervals"
    )?;
    for &n in ns {
        if n > c.len() || n < 2 {
            writeln!(log, "skipping n={n}: curve has {} points", c.len())?;
            continue;
        }
        let prefix = Curve::new(c.points()[..n].to_vec())?;
        let m = compute_all_errors_hull(&prefix);
        let scales = match sample_scales(&m, num_scales, rule) {
            Ok(s) => s,
            Err(e) => {
                writeln!(log, "skipping n={n}: {e}")?;
                continue;
            }
        };
        let top = *scales.eps().last().unwrap();
        let g = build_graph_from_errors(&m, top)?;
        let stats = g.stats();
        for &algo in algos {
            let start = Instant::now();
            let ps = match run_algorithm(&prefix, &scales, ErrorMeasure::Hausdorff, algo, cutoff) {
                Ok(ps) => ps,
                Err(e) => {
                    writeln!(log, "{} failed at n={n}: {e}", algo.as_str())?;
                    continue;
                }
            };
            let wall_ms = start.elapsed().as_secs_f64() * 1e3;
            let sizes: Vec<usize> = ps.levels.iter().map(|l| l.len()).collect();
            let rec = BenchRecord {
                algorithm: algo.as_str().to_string(),
                n,
                m: scales.len(),
                wall_ms,
                cumulative: ps.cumulative_size(),
                sizes,
                shortcut_count: stats.shortcut_count,
                interval_count: stats.interval_count,
            };
            let sizes_str: Vec<String> = rec.sizes.iter().map(|s| s.to_string()).collect();
            writeln!(
                records_out,
                "{},{},{},{},{},{},{},{}",
                rec.algorithm,
                rec.n,
                rec.m,
                rec.wall_ms,
                rec.cumulative,
                sizes_str.join(";"),
                rec.shortcut_count,
                rec.interval_count
            )?;
            records.push(rec);
        }
    }
    Ok(records)
}

/// Per-scale size table: one row per scale index, one column per algorithm.
pub fn write_scale_table<W: Write>(
    mut w: W,
    records: &[BenchRecord],
    n: usize,
) -> CliResult<()> {
    let rows: Vec<&BenchRecord> = records.iter().filter(|r| r.n == n).collect();
    if rows.is_empty() {
        return Ok(());
    }
    let header: Vec<String> = rows.iter().map(|r| r.algorithm.clone()).collect();
    writeln!(w, "scale_index,{}", header.join(","))?;
    let m = rows.iter().map(|r| r.sizes.len()).max().unwrap();
    for k in 0..m {
        let cells: Vec<String> = rows
            .iter()
            .map(|r| r.sizes.get(k).map_or(String::new(), |s| s.to_string()))
            .collect();
        writeln!(w, "{},{}", k + 1, cells.join(","))?;
    }
    Ok(())
}

/// One panel per scale: original curve in light gray, the level's polyline
/// in black, retained vertices as dots, vertices that disappear at the next
/// coarser scale highlighted.
pub fn render_svg<W: Write>(
    mut w: W,
    c: &Curve,
    ps: &ProgressiveSimplification,
) -> CliResult<()> {
    let pts = c.points();
    let (mut min_x, mut min_y, mut max_x, mut max_y) = (f64::MAX, f64::MAX, f64::MIN, f64::MIN);
    for p in pts {
        min_x = min_x.min(p.x);
        min_y = min_y.min(p.y);
        max_x = max_x.max(p.x);
        max_y = max_y.max(p.y);
    }
    let span_x = (max_x - min_x).max(1e-9);
    let span_y = (max_y - min_y).max(1e-9);
    let (pw, ph, pad) = (240.0, 200.0, 12.0);
    let panels = ps.levels.len().max(1);
    let width = panels as f64 * pw;
    writeln!(
        w,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{ph}" viewBox="0 0 {width} {ph}">"#
    )?;
    let project = |p: Point, panel: usize| -> (f64, f64) {
        let x = panel as f64 * pw + pad + (p.x - min_x) / span_x * (pw - 2.0 * pad);
        let y = ph - pad - (p.y - min_y) / span_y * (ph - 2.0 * pad);
        (x, y)
    };
    let polyline = |w: &mut W, idxs: &[usize], panel: usize, style: &str| -> CliResult<()> {
        let coords: Vec<String> = idxs
            .iter()
            .map(|&v| {
                let (x, y) = project(pts[v], panel);
                format!("{x:.2},{y:.2}")
            })
            .collect();
        writeln!(w, r#"<polyline points="{}" fill="none" {style}/>"#, coords.join(" "))?;
        Ok(())
    };
    let all: Vec<usize> = (0..pts.len()).collect();
    for panel in 0..panels {
        polyline(&mut w, &all, panel, r##"stroke="#cccccc" stroke-width="1""##)?;
        if let Some(level) = ps.levels.get(panel) {
            polyline(&mut w, level, panel, r##"stroke="#000000" stroke-width="1.5""##)?;
            let coarser = ps.levels.get(panel + 1);
            for &v in level {
                let kept_later = coarser.map_or(true, |c| c.contains(&v));
                let (x, y) = project(pts[v], panel);
                let fill = if kept_later { "#000000" } else { "#cc0000" };
                writeln!(w, r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{fill}"/>"#)?;
            }
        }
    }
    writeln!(w, "</svg>")?;
    Ok(())
}

/// Hausdorff graphs come straight from the geometry; other measures go
/// through the full error matrix.
pub fn graph_for(c: &Curve, eps: f64, measure: ErrorMeasure) -> CliResult<ShortcutIntervalSet> {
    Ok(match measure {
        ErrorMeasure::Hausdorff => build_graph_chan_chin(c, eps)?,
        _ => build_graph_from_errors(&compute_all_errors_naive(c, measure), eps)?,
    })
}

pub fn default_cutoff() -> f64 {
    DEFAULT_CUTOFF
}

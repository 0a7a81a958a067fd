//! Interval-compressed shortcut graphs.
//!
//! For a fixed tolerance `eps`, vertex `i` can be connected to every `j > i`
//! whose shortcut error is at most `eps`. On trajectory-like curves the valid
//! targets of a vertex cluster into long runs, so each row is stored as a
//! sorted list of maximal inclusive index intervals instead of explicit
//! edges. Adjacent vertices always form a valid shortcut (their error is
//! exactly zero), so every row `i < n-1` contains `i+1`.
//!
//! Two constructions are provided: filtering a precomputed error matrix, and
//! a direct quadratic-time construction for the Hausdorff measure that never
//! materializes the matrix. The latter exploits that a point lies within
//! `eps` of a segment iff it lies within `eps` of both rays spanned by the
//! segment's endpoints; validity against either ray family reduces to a
//! cone-intersection test that is maintained in constant time per vertex.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::error_oracle::ErrorMatrix;
use crate::geometry::{cross, dot, sub, Curve, Point};

/// Per-vertex maximal, disjoint, sorted inclusive intervals of valid targets.
#[derive(Clone, Debug, PartialEq)]
pub struct ShortcutIntervalSet {
    n: usize,
    eps: f64,
    rows: Vec<Vec<(usize, usize)>>,
    /// Set when the graph was restricted to a vertex subset; excluded
    /// vertices keep an empty row.
    mask: Option<Vec<bool>>,
}

/// Adjacency-list form of the same graph. Quadratic in size — intended for
/// small inputs and for cross-checking the interval representation.
#[derive(Clone, Debug, PartialEq)]
pub struct ExplicitShortcutGraph {
    pub n: usize,
    pub eps: f64,
    pub adj: Vec<Vec<usize>>,
}

/// Size statistics of an interval set.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GraphStats {
    pub shortcut_count: usize,
    pub interval_count: usize,
    /// Fraction of the `n(n-1)/2` possible shortcuts that are valid.
    pub density: f64,
}

impl ShortcutIntervalSet {
    fn from_rows(n: usize, eps: f64, rows: Vec<Vec<(usize, usize)>>) -> ShortcutIntervalSet {
        debug_assert_eq!(rows.len(), n);
        ShortcutIntervalSet {
            n,
            eps,
            rows,
            mask: None,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn eps(&self) -> f64 {
        self.eps
    }

    pub fn row(&self, i: usize) -> &[(usize, usize)] {
        &self.rows[i]
    }

    pub fn mask(&self) -> Option<&[bool]> {
        self.mask.as_deref()
    }

    /// Does the graph contain the shortcut `(i, j)`?
    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.rows[i]
            .binary_search_by(|&(x, y)| {
                if y < j {
                    std::cmp::Ordering::Less
                } else if x > j {
                    std::cmp::Ordering::Greater
                } else {
                    std::cmp::Ordering::Equal
                }
            })
            .is_ok()
    }

    /// All valid targets of vertex `i`, ascending.
    pub fn targets(&self, i: usize) -> impl Iterator<Item = usize> + '_ {
        self.rows[i].iter().flat_map(|&(x, y)| x..=y)
    }

    pub fn stats(&self) -> GraphStats {
        let shortcut_count: usize = self
            .rows
            .iter()
            .flat_map(|r| r.iter().map(|&(x, y)| y - x + 1))
            .sum();
        let interval_count: usize = self.rows.iter().map(|r| r.len()).sum();
        let possible = self.n * (self.n - 1) / 2;
        GraphStats {
            shortcut_count,
            interval_count,
            density: shortcut_count as f64 / possible as f64,
        }
    }

    /// Expands to adjacency lists. Rows of interior vertices must be
    /// non-empty unless the vertex is masked out.
    pub fn to_explicit(&self) -> Result<ExplicitShortcutGraph> {
        for i in 0..self.n.saturating_sub(1) {
            let excluded = self.mask.as_ref().map_or(false, |m| !m[i]);
            if self.rows[i].is_empty() && !excluded {
                return Err(Error::EmptyIntervalRow(i));
            }
        }
        Ok(ExplicitShortcutGraph {
            n: self.n,
            eps: self.eps,
            adj: (0..self.n).map(|i| self.targets(i).collect()).collect(),
        })
    }

    /// Restricts the graph to vertices with `members[v] == true`: rows of
    /// excluded vertices become empty and all rows lose excluded targets.
    pub fn prune(&self, members: &[bool]) -> Result<ShortcutIntervalSet> {
        if members.len() != self.n {
            return Err(Error::SizeMismatch(members.len(), self.n));
        }
        // Runs of member vertices, used to clip every row.
        let mut member_runs: Vec<(usize, usize)> = Vec::new();
        let mut k = 0;
        while k < self.n {
            if members[k] {
                let start = k;
                while k + 1 < self.n && members[k + 1] {
                    k += 1;
                }
                member_runs.push((start, k));
            }
            k += 1;
        }
        let rows = (0..self.n)
            .map(|i| {
                if members[i] {
                    intersect_rows(&self.rows[i], &member_runs)
                } else {
                    Vec::new()
                }
            })
            .collect();
        Ok(ShortcutIntervalSet {
            n: self.n,
            eps: self.eps,
            rows,
            mask: Some(members.to_vec()),
        })
    }
}

/// Builds the interval set by thresholding an error matrix: `(i, j)` is valid
/// iff its error is `<= eps`.
pub fn build_graph_from_errors(m: &ErrorMatrix, eps: f64) -> Result<ShortcutIntervalSet> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidEpsilon(eps));
    }
    let n = m.n();
    let rows = (0..n)
        .map(|i| {
            let mut row = Vec::new();
            let mut j = i + 1;
            while j < n {
                if m.get(i, j) <= eps {
                    let start = j;
                    while j + 1 < n && m.get(i, j + 1) <= eps {
                        j += 1;
                    }
                    row.push((start, j));
                }
                j += 1;
            }
            row
        })
        .collect();
    Ok(ShortcutIntervalSet::from_rows(n, eps, rows))
}

/// Converts adjacency lists back into maximal intervals.
pub fn compress(g: &ExplicitShortcutGraph) -> ShortcutIntervalSet {
    let rows = g
        .adj
        .iter()
        .map(|targets| {
            let mut row: Vec<(usize, usize)> = Vec::new();
            for &j in targets {
                match row.last_mut() {
                    Some(last) if last.1 + 1 == j => last.1 = j,
                    _ => row.push((j, j)),
                }
            }
            row
        })
        .collect();
    ShortcutIntervalSet::from_rows(g.n, g.eps, rows)
}

/// Pairwise intersection of two interval sets over the same vertex count.
pub fn intersect_interval_sets(
    a: &ShortcutIntervalSet,
    b: &ShortcutIntervalSet,
) -> Result<ShortcutIntervalSet> {
    if a.n != b.n {
        return Err(Error::SizeMismatch(a.n, b.n));
    }
    let rows = (0..a.n)
        .map(|i| intersect_rows(&a.rows[i], &b.rows[i]))
        .collect();
    Ok(ShortcutIntervalSet::from_rows(a.n, a.eps, rows))
}

/// Intersects two sorted disjoint interval lists by simultaneous stepping.
fn intersect_rows(a: &[(usize, usize)], b: &[(usize, usize)]) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    let (mut p, mut q) = (0, 0);
    while p < a.len() && q < b.len() {
        let lo = a[p].0.max(b[q].0);
        let hi = a[p].1.min(b[q].1);
        if lo <= hi {
            out.push((lo, hi));
        }
        if a[p].1 < b[q].1 {
            p += 1;
        } else {
            q += 1;
        }
    }
    out
}

/// A convex cone of directions, at most a half-plane wide, kept as its
/// clockwise (`lo`) and counterclockwise (`hi`) boundary vectors. A direction
/// `d` belongs to the cone when it is not clockwise of `lo` and not
/// counterclockwise of `hi`.
#[derive(Clone, Copy)]
enum Cone {
    Full,
    Empty,
    Bounded { lo: Point, hi: Point },
}

impl Cone {
    fn contains(&self, d: Point) -> bool {
        match *self {
            Cone::Full => true,
            Cone::Empty => false,
            Cone::Bounded { lo, hi } => cross(lo, d) >= 0.0 && cross(d, hi) >= 0.0,
        }
    }

    fn is_empty(&self) -> bool {
        matches!(self, Cone::Empty)
    }

    /// Intersects with the wedge of half-angle `alpha` around `w`, where
    /// `sin_a = sin(alpha)`, `cos_a = cos(alpha)` and `alpha <= 90°`.
    fn restrict(&mut self, w: Point, sin_a: f64, cos_a: f64) {
        // Wedge boundaries: w rotated by -alpha and +alpha.
        let lo_w = Point::new(w.x * cos_a + w.y * sin_a, -w.x * sin_a + w.y * cos_a);
        let hi_w = Point::new(w.x * cos_a - w.y * sin_a, w.x * sin_a + w.y * cos_a);
        match *self {
            Cone::Empty => {}
            Cone::Full => *self = Cone::Bounded { lo: lo_w, hi: hi_w },
            Cone::Bounded { lo, hi } => {
                let new_lo = if cross(lo, lo_w) > 0.0 { lo_w } else { lo };
                let new_hi = if cross(hi_w, hi) > 0.0 { hi_w } else { hi };
                // Both picked bounds must satisfy both cones, otherwise the
                // intersection is empty.
                let ok = |x: Point| {
                    cross(lo, x) >= 0.0
                        && cross(x, hi) >= 0.0
                        && cross(lo_w, x) >= 0.0
                        && cross(x, hi_w) >= 0.0
                };
                *self = if ok(new_lo) && ok(new_hi) {
                    Cone::Bounded {
                        lo: new_lo,
                        hi: new_hi,
                    }
                } else {
                    Cone::Empty
                };
            }
        }
    }
}

/// For every anchor `i`, the runs of `j > i` such that all interior vertices
/// lie within `eps` of the ray from `p_i` through `p_j`.
///
/// A vertex farther than `eps` from the anchor constrains the ray direction
/// to a wedge of half-angle `asin(eps / dist)`; the running intersection of
/// these wedges is a single convex cone because each wedge is at most a
/// half-plane. Vertices within `eps` of the anchor impose no constraint.
fn ray_valid_rows(pts: &[Point], eps: f64) -> Vec<Vec<(usize, usize)>> {
    let n = pts.len();
    let eps_sq = eps * eps;
    let mut rows: Vec<Vec<(usize, usize)>> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let a = pts[i];
            let mut cone = Cone::Full;
            let mut all_near = true; // every interior vertex so far within eps of the anchor
            let mut row: Vec<(usize, usize)> = Vec::new();
            let mut run: Option<(usize, usize)> = None;
            for (j, &p) in pts.iter().enumerate().skip(i + 1) {
                let d = sub(p, a);
                let valid = if d.x == 0.0 && d.y == 0.0 {
                    // Degenerate segment: only the anchor distances matter.
                    all_near
                } else {
                    cone.contains(d)
                };
                if valid {
                    match &mut run {
                        Some((_, y)) => *y = j,
                        None => run = Some((j, j)),
                    }
                } else if let Some(r) = run.take() {
                    row.push(r);
                }
                // Register p as an interior constraint for later targets.
                let r2 = dot(d, d);
                if r2 > eps_sq {
                    all_near = false;
                    let s2 = eps_sq / r2;
                    cone.restrict(d, s2.sqrt(), (1.0 - s2).max(0.0).sqrt());
                    if cone.is_empty() {
                        break;
                    }
                }
            }
            if let Some(r) = run.take() {
                row.push(r);
            }
            row
        })
        .collect();
    rows.push(Vec::new()); // last vertex has no outgoing shortcuts
    rows
}

/// Transposes a column-major interval description (per column `j`, intervals
/// of rows `i`) into row-major intervals, maintaining the active columns as
/// merged runs so the cost stays proportional to the interval counts.
fn transpose_columns(n: usize, cols: &[Vec<(usize, usize)>]) -> Vec<Vec<(usize, usize)>> {
    let mut starts: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    let mut ends: Vec<Vec<usize>> = vec![Vec::new(); n + 1];
    for (j, col) in cols.iter().enumerate() {
        for &(u, v) in col {
            starts[u].push(j);
            ends[v + 1].push(j);
        }
    }
    let mut runs: BTreeMap<usize, usize> = BTreeMap::new(); // start col -> end col
    let mut rows: Vec<Vec<(usize, usize)>> = Vec::with_capacity(n);
    for i in 0..n {
        for &j in &ends[i] {
            remove_col(&mut runs, j);
        }
        for &j in &starts[i] {
            insert_col(&mut runs, j);
        }
        rows.push(runs.iter().map(|(&a, &b)| (a, b)).collect());
    }
    rows
}

fn insert_col(runs: &mut BTreeMap<usize, usize>, j: usize) {
    let mut start = j;
    let mut end = j;
    if let Some((&s, &e)) = runs.range(..=j).next_back() {
        debug_assert!(e < j, "column inserted twice");
        if e + 1 == j {
            start = s;
            runs.remove(&s);
        }
    }
    if let Some(&e2) = runs.get(&(j + 1)) {
        end = e2;
        runs.remove(&(j + 1));
    }
    runs.insert(start, end);
}

fn remove_col(runs: &mut BTreeMap<usize, usize>, j: usize) {
    let (&s, &e) = runs
        .range(..=j)
        .next_back()
        .expect("removing a column that is not active");
    debug_assert!(s <= j && j <= e);
    runs.remove(&s);
    if s < j {
        runs.insert(s, j - 1);
    }
    if j < e {
        runs.insert(j + 1, e);
    }
}

/// Quadratic-time Hausdorff shortcut graph without an error matrix.
///
/// A shortcut is valid iff every skipped vertex is within `eps` of both the
/// ray from `p_i` through `p_j` and the ray from `p_j` through `p_i` (the
/// larger of the two ray distances equals the segment distance). The first
/// family is produced row-by-row directly; the second is the same sweep on
/// the reversed curve, transposed back. The result is their intersection.
pub fn build_graph_chan_chin(c: &Curve, eps: f64) -> Result<ShortcutIntervalSet> {
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidEpsilon(eps));
    }
    Ok(chan_chin_points(c.points(), eps))
}

pub(crate) fn chan_chin_points(pts: &[Point], eps: f64) -> ShortcutIntervalSet {
    let n = pts.len();
    let forward = ray_valid_rows(pts, eps);
    let reversed: Vec<Point> = pts.iter().rev().copied().collect();
    let rev_rows = ray_valid_rows(&reversed, eps);
    // Reversed pair (a, b) is original (n-1-b, n-1-a): row `a` of the sweep
    // describes one original column `j = n-1-a`.
    let mut cols: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (a, row) in rev_rows.iter().enumerate() {
        let j = n - 1 - a;
        for &(x, y) in row.iter().rev() {
            cols[j].push((n - 1 - y, n - 1 - x));
        }
    }
    let backward = transpose_columns(n, &cols);
    let rows = (0..n)
        .map(|i| intersect_rows(&forward[i], &backward[i]))
        .collect();
    ShortcutIntervalSet::from_rows(n, eps, rows)
}

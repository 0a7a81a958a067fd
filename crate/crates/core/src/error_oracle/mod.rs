//! All-pairs shortcut errors.
//!
//! [`compute_all_errors_naive`] evaluates every shortcut directly and works
//! with any error measure; it is cubic in the curve size and doubles as the
//! reference oracle. [`compute_all_errors_hull`] computes the same matrix for
//! the Hausdorff measure in `O(n^2 log n)` by maintaining one annotated
//! convex hull per anchor vertex and answering each shortcut from a constant
//! number of hull queries: the extreme points perpendicular to the shortcut
//! cover everything projecting onto the segment, and two half-plane searches
//! (one per pass direction) cover the points beyond its endpoints.

mod hull;

pub use hull::{AnnotatedHull, HullChain, HullVertex};

use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::{
    point_segment_distance, shortcut_error_on, sub, Curve, ErrorMeasure, Point,
};

/// Upper-triangular matrix of shortcut errors, stored row-major as a flat
/// `f64` vector. Entry `(i, j)` exists for `0 <= i < j < n`.
#[derive(Clone, Debug, PartialEq)]
pub struct ErrorMatrix {
    n: usize,
    data: Vec<f64>,
}

impl ErrorMatrix {
    pub fn zeroed(n: usize) -> ErrorMatrix {
        assert!(n >= 2, "error matrix needs at least two vertices");
        ErrorMatrix {
            n,
            data: vec![0.0; n * (n - 1) / 2],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    fn idx(&self, i: usize, j: usize) -> usize {
        debug_assert!(i < j && j < self.n);
        // Start of row i, then offset within the row.
        i * (2 * self.n - i - 1) / 2 + (j - i - 1)
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[self.idx(i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let k = self.idx(i, j);
        self.data[k] = v;
    }

    /// Iterates all entries as `(i, j, eps)`.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n).flat_map(move |i| (i + 1..self.n).map(move |j| (i, j, self.get(i, j))))
    }

    /// Writes `i,j,epsilon` lines with 1-based indices.
    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "i,j,epsilon")?;
        for (i, j, e) in self.entries() {
            writeln!(w, "{},{},{}", i + 1, j + 1, e)?;
        }
        Ok(())
    }

    /// Parses the format produced by [`ErrorMatrix::write_csv`].
    pub fn read_csv<R: BufRead>(r: R) -> Result<ErrorMatrix> {
        let mut triples: Vec<(usize, usize, f64)> = Vec::new();
        let mut max_j = 0usize;
        for (lineno, line) in r.lines().enumerate() {
            let line = line.map_err(|e| Error::MatrixParse {
                line: lineno + 1,
                msg: e.to_string(),
            })?;
            let line = line.trim();
            if line.is_empty() || (lineno == 0 && line.starts_with('i')) {
                continue;
            }
            let mut parts = line.split(',');
            let parse = |s: Option<&str>, what: &str| -> Result<f64> {
                s.ok_or_else(|| Error::MatrixParse {
                    line: lineno + 1,
                    msg: format!("missing {what}"),
                })?
                .trim()
                .parse::<f64>()
                .map_err(|e| Error::MatrixParse {
                    line: lineno + 1,
                    msg: format!("bad {what}: {e}"),
                })
            };
            let i = parse(parts.next(), "i")? as usize;
            let j = parse(parts.next(), "j")? as usize;
            let e = parse(parts.next(), "epsilon")?;
            if i < 1 || j <= i {
                return Err(Error::MatrixParse {
                    line: lineno + 1,
                    msg: format!("indices ({i}, {j}) are not 1-based with i < j"),
                });
            }
            max_j = max_j.max(j);
            triples.push((i - 1, j - 1, e));
        }
        if max_j < 2 {
            return Err(Error::CurveTooShort);
        }
        let mut m = ErrorMatrix::zeroed(max_j);
        let mut seen = vec![false; m.data.len()];
        for (i, j, e) in triples {
            let k = m.idx(i, j);
            m.data[k] = e;
            seen[k] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::MatrixParse {
                line: 0,
                msg: "matrix has missing entries".to_string(),
            });
        }
        Ok(m)
    }
}

/// Direct evaluation of every shortcut. `O(n^3)` for Hausdorff and area,
/// slower for Fréchet (one bisection per entry).
pub fn compute_all_errors_naive(c: &Curve, measure: ErrorMeasure) -> ErrorMatrix {
    let pts = c.points();
    let n = pts.len();
    let rows: Vec<Vec<f64>> = (0..n - 1)
        .into_par_iter()
        .map(|i| {
            (i + 1..n)
                .map(|j| shortcut_error_on(pts, i, j, measure))
                .collect()
        })
        .collect();
    let mut m = ErrorMatrix::zeroed(n);
    for (i, row) in rows.into_iter().enumerate() {
        for (off, e) in row.into_iter().enumerate() {
            m.set(i, i + 1 + off, e);
        }
    }
    m
}

/// Hausdorff candidates for the segment `a -> b` against the current hull.
fn candidate_error(hull: &AnnotatedHull, a: Point, b: Point) -> f64 {
    if a == b {
        // Degenerate shortcut: the farthest hull point decides.
        return hull.farthest_from_anchor().point.dist(a);
    }
    let u = sub(b, a);
    let normal = Point::new(-u.y, u.x);
    let neg_normal = Point::new(u.y, -u.x);
    let mut worst = 0.0f64;
    let mut offer = |v: Option<HullVertex>| {
        if let Some(v) = v {
            worst = worst.max(point_segment_distance(v.point, a, b));
        }
    };
    offer(hull.extreme_point(normal));
    offer(hull.extreme_point(neg_normal));
    offer(hull.farthest_in_region_l(a, b));
    worst
}

/// One directional sweep: for every anchor `i`, grow a hull over the
/// following points and score each shortcut `(i, j)` from hull queries.
/// Row `i` of the result holds values for `j = i+1..n`.
fn hull_pass(pts: &[Point]) -> Vec<Vec<f64>> {
    let n = pts.len();
    (0..n - 1)
        .into_par_iter()
        .map(|i| {
            let mut hull = AnnotatedHull::new(pts[i], i);
            let mut row = Vec::with_capacity(n - 1 - i);
            for (j, &p) in pts.iter().enumerate().skip(i + 1) {
                // Query before inserting: only vertices strictly between the
                // endpoints (plus the anchor, at distance zero) may count.
                row.push(candidate_error(&hull, pts[i], p));
                hull.insert(p, j);
            }
            row
        })
        .collect()
}

/// Hausdorff error matrix via annotated hulls, `O(n^2 log n)`.
///
/// The forward pass (anchored at `p_i`) covers points projecting onto the
/// segment and points beyond `p_i`; a second pass over the reversed curve
/// covers points beyond `p_j`. The matrix is the entrywise maximum.
pub fn compute_all_errors_hull(c: &Curve) -> ErrorMatrix {
    let pts = c.points();
    let n = pts.len();
    let forward = hull_pass(pts);
    let reversed: Vec<Point> = pts.iter().rev().copied().collect();
    let backward = hull_pass(&reversed);
    let mut m = ErrorMatrix::zeroed(n);
    for i in 0..n - 1 {
        for j in i + 1..n {
            // Shortcut (i, j) appears in the reversed curve as (n-1-j, n-1-i).
            let (a, b) = (n - 1 - j, n - 1 - i);
            let e = forward[i][j - i - 1].max(backward[a][b - a - 1]);
            m.set(i, j, e);
        }
    }
    m
}

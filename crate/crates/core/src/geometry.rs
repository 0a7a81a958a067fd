//! Planar primitives and the per-shortcut error measures.
//!
//! A *shortcut* `(i, j)` replaces the subcurve `p_i..p_j` by the straight
//! segment from `p_i` to `p_j`. Its error is the distance between the
//! segment and the subcurve it skips, under one of three measures:
//! directed Hausdorff distance (vertices to segment), Fréchet distance,
//! or the enclosed area.

use crate::error::{Error, Result};

/// A point in the plane. Also doubles as a 2-vector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Point {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dist(self, other: Point) -> f64 {
        self.dist_sq(other).sqrt()
    }

    pub fn dist_sq(self, other: Point) -> f64 {
        let dx = self.x - other.x;
        let dy = self.y - other.y;
        dx * dx + dy * dy
    }
}

/// Vector `b - a`.
pub(crate) fn sub(b: Point, a: Point) -> Point {
    Point::new(b.x - a.x, b.y - a.y)
}

pub(crate) fn dot(u: Point, v: Point) -> f64 {
    u.x * v.x + u.y * v.y
}

pub(crate) fn cross(u: Point, v: Point) -> f64 {
    u.x * v.y - u.y * v.x
}

/// A polygonal curve: at least two vertices, finite coordinates, and no two
/// *consecutive* vertices identical (a vertex may reappear later).
#[derive(Clone, Debug, PartialEq)]
pub struct Curve {
    points: Vec<Point>,
}

impl Curve {
    pub fn new(points: Vec<Point>) -> Result<Curve> {
        if points.len() < 2 {
            return Err(Error::CurveTooShort);
        }
        for (k, p) in points.iter().enumerate() {
            if !p.is_finite() {
                return Err(Error::NonFiniteCoordinate(k));
            }
        }
        for k in 1..points.len() {
            if points[k] == points[k - 1] {
                return Err(Error::ConsecutiveDuplicate(k));
            }
        }
        Ok(Curve { points })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        false // by construction a curve has at least two vertices
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn point(&self, k: usize) -> Point {
        self.points[k]
    }
}

/// A shortcut between vertex indices `i < j` (0-based).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ShortcutRef {
    pub i: usize,
    pub j: usize,
}

impl ShortcutRef {
    pub fn new(i: usize, j: usize, n: usize) -> Result<ShortcutRef> {
        if i < j && j < n {
            Ok(ShortcutRef { i, j })
        } else {
            Err(Error::InvalidShortcut { i, j, n })
        }
    }
}

/// Which distance is charged to a shortcut.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorMeasure {
    Hausdorff,
    Frechet,
    Area,
}

impl std::str::FromStr for ErrorMeasure {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "hausdorff" => Ok(ErrorMeasure::Hausdorff),
            "frechet" => Ok(ErrorMeasure::Frechet),
            "area" => Ok(ErrorMeasure::Area),
            other => Err(format!("unknown error measure '{other}'")),
        }
    }
}

/// Distance from `p` to the closed segment `ab`.
pub fn point_segment_distance(p: Point, a: Point, b: Point) -> f64 {
    // Canonical endpoint order so the result is bit-identical regardless of
    // segment orientation.
    let (a, b) = if (b.x, b.y) < (a.x, a.y) { (b, a) } else { (a, b) };
    let d = sub(b, a);
    let len_sq = dot(d, d);
    if len_sq == 0.0 {
        return p.dist(a);
    }
    let t = dot(sub(p, a), d) / len_sq;
    if t <= 0.0 {
        p.dist(a)
    } else if t >= 1.0 {
        p.dist(b)
    } else {
        p.dist(Point::new(a.x + t * d.x, a.y + t * d.y))
    }
}

fn check_shortcut(c: &Curve, s: ShortcutRef) -> Result<()> {
    if s.i < s.j && s.j < c.len() {
        Ok(())
    } else {
        Err(Error::InvalidShortcut {
            i: s.i,
            j: s.j,
            n: c.len(),
        })
    }
}

/// Directed Hausdorff distance from the vertices `p_i..p_j` to segment
/// `p_i p_j`. Zero for adjacent vertices.
pub fn hausdorff_error(c: &Curve, s: ShortcutRef) -> Result<f64> {
    check_shortcut(c, s)?;
    Ok(hausdorff_on(c.points(), s.i, s.j))
}

pub(crate) fn hausdorff_on(pts: &[Point], i: usize, j: usize) -> f64 {
    let (a, b) = (pts[i], pts[j]);
    let mut worst = 0.0f64;
    for &p in &pts[i + 1..j] {
        worst = worst.max(point_segment_distance(p, a, b));
    }
    worst
}

/// Decides whether the Fréchet distance between segment `p_i p_j` and the
/// subcurve `p_i..p_j` is at most `eps`.
///
/// Because one side is a single segment, the free-space diagram is a single
/// row of convex cells; a monotone path exists iff the feasible parameter
/// intervals at the subcurve vertices can be visited in order.
pub fn frechet_valid(c: &Curve, s: ShortcutRef, eps: f64) -> Result<bool> {
    check_shortcut(c, s)?;
    if !(eps >= 0.0) || !eps.is_finite() {
        return Err(Error::InvalidEpsilon(eps));
    }
    Ok(frechet_valid_on(c.points(), s.i, s.j, eps))
}

pub(crate) fn frechet_valid_on(pts: &[Point], i: usize, j: usize, eps: f64) -> bool {
    let (a, b) = (pts[i], pts[j]);
    let d = sub(b, a);
    let mut reach = 0.0f64; // smallest reachable segment parameter
    for &p in &pts[i..=j] {
        // Solve |a + t d - p| <= eps for t, clipped to [0, 1].
        let qa = dot(d, d);
        let w = sub(a, p);
        let qb = 2.0 * dot(d, w);
        let qc = dot(w, w) - eps * eps;
        let (lo, hi) = if qa == 0.0 {
            if qc <= 0.0 {
                (0.0, 1.0)
            } else {
                return false;
            }
        } else {
            let disc = qb * qb - 4.0 * qa * qc;
            if disc < 0.0 {
                return false;
            }
            let sq = disc.sqrt();
            ((-qb - sq) / (2.0 * qa), (-qb + sq) / (2.0 * qa))
        };
        if hi < reach || lo > 1.0 {
            return false;
        }
        reach = reach.max(lo);
    }
    true
}

pub(crate) const FRECHET_DEFAULT_TOL: f64 = 1e-9;

/// Fréchet distance between segment `p_i p_j` and the subcurve, computed by
/// bisection on [`frechet_valid`] to the given absolute tolerance.
pub fn frechet_distance_with_tol(c: &Curve, s: ShortcutRef, tol: f64) -> Result<f64> {
    check_shortcut(c, s)?;
    Ok(frechet_on(c.points(), s.i, s.j, tol))
}

pub fn frechet_distance(c: &Curve, s: ShortcutRef) -> Result<f64> {
    frechet_distance_with_tol(c, s, FRECHET_DEFAULT_TOL)
}

pub(crate) fn frechet_on(pts: &[Point], i: usize, j: usize, tol: f64) -> f64 {
    // The Hausdorff error is a lower bound; matching everything monotonely
    // within the larger of the endpoint distances is always possible, since
    // the distance from a fixed point to the segment parameterization is
    // convex and therefore maximal at an endpoint.
    let lo0 = hausdorff_on(pts, i, j);
    if frechet_valid_on(pts, i, j, lo0) {
        return lo0;
    }
    let mut hi = lo0;
    for &p in &pts[i + 1..j] {
        hi = hi.max(p.dist(pts[i]).max(p.dist(pts[j])));
    }
    let mut lo = lo0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if frechet_valid_on(pts, i, j, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Absolute area enclosed between the subcurve and the shortcut segment,
/// i.e. the shoelace area of the closed polygon `p_i, .., p_j, p_i`.
pub fn area_error(c: &Curve, s: ShortcutRef) -> Result<f64> {
    check_shortcut(c, s)?;
    Ok(area_on(c.points(), s.i, s.j))
}

pub(crate) fn area_on(pts: &[Point], i: usize, j: usize) -> f64 {
    let mut twice = 0.0f64;
    for k in i..j {
        twice += cross(pts[k], pts[k + 1]);
    }
    twice += cross(pts[j], pts[i]);
    twice.abs() * 0.5
}

/// Error of a single shortcut under the chosen measure.
pub fn shortcut_error(c: &Curve, s: ShortcutRef, measure: ErrorMeasure) -> Result<f64> {
    match measure {
        ErrorMeasure::Hausdorff => hausdorff_error(c, s),
        ErrorMeasure::Frechet => frechet_distance(c, s),
        ErrorMeasure::Area => area_error(c, s),
    }
}

pub(crate) fn shortcut_error_on(pts: &[Point], i: usize, j: usize, measure: ErrorMeasure) -> f64 {
    match measure {
        ErrorMeasure::Hausdorff => hausdorff_on(pts, i, j),
        ErrorMeasure::Frechet => frechet_on(pts, i, j, FRECHET_DEFAULT_TOL),
        ErrorMeasure::Area => area_on(pts, i, j),
    }
}

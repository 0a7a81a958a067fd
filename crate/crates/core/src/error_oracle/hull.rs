//! Incrementally maintained convex hull with subtree annotations.
//!
//! The hull is stored as two convex chains (upper and lower), each held in a
//! randomized balanced search tree ordered by x-coordinate. Every subtree
//! carries three annotations: the point of the subtree farthest from a fixed
//! anchor, and the first/last points of the subtree in chain order. These
//! support three queries in logarithmic time:
//!
//! * extreme point in a direction (unimodal descent along a convex chain),
//! * farthest-from-anchor point over the whole hull (root annotation),
//! * farthest-from-anchor point restricted to an open half-plane, used to
//!   find candidates lying beyond the endpoints of a query segment.

use crate::geometry::{cross, dot, sub, Point};

const NONE: u32 = u32::MAX;

/// A hull member: its coordinates plus the index of the curve vertex it
/// came from (used for deterministic tie-breaking).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HullVertex {
    pub point: Point,
    pub index: usize,
}

#[derive(Clone)]
struct Node {
    v: HullVertex,
    prio: u64,
    left: u32,
    right: u32,
    // Subtree annotations.
    far: HullVertex,
    far_d2: f64,
    first: HullVertex,
    last: HullVertex,
}

/// One convex chain (upper or lower), ordered by x.
pub struct HullChain {
    nodes: Vec<Node>,
    free: Vec<u32>,
    root: u32,
    anchor: Point,
    upper: bool,
    rng: u64,
    len: usize,
}

fn splitmix(state: &mut u64) -> u64 {
    *state = state.wrapping_add(0x9e3779b97f4a7c15);
    let mut z = *state;
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

impl HullChain {
    fn new(anchor: Point, upper: bool) -> HullChain {
        HullChain {
            nodes: Vec::new(),
            free: Vec::new(),
            root: NONE,
            anchor,
            upper,
            rng: if upper { 0x5eed } else { 0xf00d },
            len: 0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn better_far(&self, a: (f64, HullVertex), b: (f64, HullVertex)) -> (f64, HullVertex) {
        // Larger distance wins; ties to the smaller vertex index.
        if b.0 > a.0 || (b.0 == a.0 && b.1.index < a.1.index) {
            b
        } else {
            a
        }
    }

    fn pull(&mut self, t: u32) {
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        let v = self.nodes[t as usize].v;
        let mut far = (v.point.dist_sq(self.anchor), v);
        let mut first = v;
        let mut last = v;
        if l != NONE {
            let ln = &self.nodes[l as usize];
            far = self.better_far(far, (ln.far_d2, ln.far));
            first = self.nodes[l as usize].first;
        }
        if r != NONE {
            let rn = &self.nodes[r as usize];
            far = self.better_far(far, (rn.far_d2, rn.far));
            last = self.nodes[r as usize].last;
        }
        let n = &mut self.nodes[t as usize];
        n.far_d2 = far.0;
        n.far = far.1;
        n.first = first;
        n.last = last;
    }

    fn alloc(&mut self, v: HullVertex) -> u32 {
        let prio = splitmix(&mut self.rng);
        let node = Node {
            v,
            prio,
            left: NONE,
            right: NONE,
            far: v,
            far_d2: v.point.dist_sq(self.anchor),
            first: v,
            last: v,
        };
        if let Some(id) = self.free.pop() {
            self.nodes[id as usize] = node;
            id
        } else {
            self.nodes.push(node);
            (self.nodes.len() - 1) as u32
        }
    }

    /// Split into keys < x and keys >= x.
    fn split(&mut self, t: u32, x: f64) -> (u32, u32) {
        if t == NONE {
            return (NONE, NONE);
        }
        if self.nodes[t as usize].v.point.x < x {
            let (a, b) = self.split(self.nodes[t as usize].right, x);
            self.nodes[t as usize].right = a;
            self.pull(t);
            (t, b)
        } else {
            let (a, b) = self.split(self.nodes[t as usize].left, x);
            self.nodes[t as usize].left = b;
            self.pull(t);
            (a, t)
        }
    }

    fn merge(&mut self, a: u32, b: u32) -> u32 {
        if a == NONE {
            return b;
        }
        if b == NONE {
            return a;
        }
        if self.nodes[a as usize].prio > self.nodes[b as usize].prio {
            let m = self.merge(self.nodes[a as usize].right, b);
            self.nodes[a as usize].right = m;
            self.pull(a);
            a
        } else {
            let m = self.merge(a, self.nodes[b as usize].left);
            self.nodes[b as usize].left = m;
            self.pull(b);
            b
        }
    }

    fn insert_node(&mut self, v: HullVertex) {
        let id = self.alloc(v);
        let (a, b) = self.split(self.root, v.point.x);
        let ab = self.merge(a, id);
        self.root = self.merge(ab, b);
        self.len += 1;
    }

    /// Remove the node with key exactly `x` (must exist).
    fn remove_key(&mut self, x: f64) {
        let (a, rest) = self.split(self.root, x);
        // `rest` starts with the node keyed x; peel off its leftmost node.
        let (mid, b) = self.split_first(rest);
        debug_assert!(mid != NONE && self.nodes[mid as usize].v.point.x == x);
        self.free.push(mid);
        self.root = self.merge(a, b);
        self.len -= 1;
    }

    /// Detach the leftmost node of subtree `t`; returns (node, remainder).
    fn split_first(&mut self, t: u32) -> (u32, u32) {
        if t == NONE {
            return (NONE, NONE);
        }
        if self.nodes[t as usize].left == NONE {
            let rest = self.nodes[t as usize].right;
            self.nodes[t as usize].right = NONE;
            self.pull(t);
            return (t, rest);
        }
        let (first, rem) = self.split_first(self.nodes[t as usize].left);
        self.nodes[t as usize].left = rem;
        self.pull(t);
        (first, t)
    }

    fn find(&self, x: f64) -> Option<HullVertex> {
        let mut t = self.root;
        while t != NONE {
            let n = &self.nodes[t as usize];
            if n.v.point.x == x {
                return Some(n.v);
            }
            t = if x < n.v.point.x { n.left } else { n.right };
        }
        None
    }

    /// Greatest key strictly below `x`.
    fn pred(&self, x: f64) -> Option<HullVertex> {
        let mut t = self.root;
        let mut best = None;
        while t != NONE {
            let n = &self.nodes[t as usize];
            if n.v.point.x < x {
                best = Some(n.v);
                t = n.right;
            } else {
                t = n.left;
            }
        }
        best
    }

    /// Smallest key strictly above `x`.
    fn succ(&self, x: f64) -> Option<HullVertex> {
        let mut t = self.root;
        let mut best = None;
        while t != NONE {
            let n = &self.nodes[t as usize];
            if n.v.point.x > x {
                best = Some(n.v);
                t = n.left;
            } else {
                t = n.right;
            }
        }
        best
    }

    /// Signed test: positive when `m` lies strictly on the hull side of the
    /// chord `a -> b` (above for the upper chain, below for the lower).
    fn outside(&self, a: Point, b: Point, m: Point) -> f64 {
        let s = cross(sub(b, a), sub(m, a));
        if self.upper {
            s
        } else {
            -s
        }
    }

    /// Insert a point, maintaining strict convexity of the chain. Points on
    /// or inside the current chain are ignored; dominated neighbours are
    /// evicted. Returns whether the chain changed.
    fn insert_hull(&mut self, v: HullVertex) -> bool {
        if let Some(ex) = self.find(v.point.x) {
            let replaces = if self.upper {
                v.point.y > ex.point.y
            } else {
                v.point.y < ex.point.y
            };
            if !replaces {
                return false;
            }
            self.remove_key(ex.point.x);
        }
        let pred = self.pred(v.point.x);
        let succ = self.succ(v.point.x);
        if let (Some(a), Some(b)) = (pred, succ) {
            if self.outside(a.point, b.point, v.point) <= 0.0 {
                return false;
            }
        }
        self.insert_node(v);
        // Evict left neighbours that are no longer strictly convex.
        while let Some(l1) = self.pred(v.point.x) {
            match self.pred(l1.point.x) {
                Some(l2) if self.outside(l2.point, v.point, l1.point) <= 0.0 => {
                    self.remove_key(l1.point.x);
                }
                _ => break,
            }
        }
        // Same on the right.
        while let Some(r1) = self.succ(v.point.x) {
            match self.succ(r1.point.x) {
                Some(r2) if self.outside(v.point, r2.point, r1.point) <= 0.0 => {
                    self.remove_key(r1.point.x);
                }
                _ => break,
            }
        }
        true
    }

    /// Chain contents in x-order.
    pub fn in_order(&self) -> Vec<HullVertex> {
        let mut out = Vec::with_capacity(self.len);
        self.collect(self.root, &mut out);
        out
    }

    fn collect(&self, t: u32, out: &mut Vec<HullVertex>) {
        if t == NONE {
            return;
        }
        self.collect(self.nodes[t as usize].left, out);
        out.push(self.nodes[t as usize].v);
        self.collect(self.nodes[t as usize].right, out);
    }

    /// Farthest point from the anchor within this chain.
    fn farthest(&self) -> Option<(f64, HullVertex)> {
        if self.root == NONE {
            None
        } else {
            let n = &self.nodes[self.root as usize];
            Some((n.far_d2, n.far))
        }
    }

    /// Maximizes `dot(dir, q)` over the chain. Requires the dot product to be
    /// unimodal along the chain, which holds for the upper chain when
    /// `dir.y > 0`, for the lower chain when `dir.y < 0`, and for either
    /// chain when `dir.y == 0` (monotone case).
    fn extreme(&self, dir: Point) -> Option<HullVertex> {
        if self.root == NONE {
            return None;
        }
        if dir.y == 0.0 {
            let n = &self.nodes[self.root as usize];
            return Some(if dir.x >= 0.0 { n.last } else { n.first });
        }
        let f = |v: HullVertex| dot(dir, v.point);
        let mut t = self.root;
        let mut pred_ctx: Option<HullVertex> = None;
        let mut succ_ctx: Option<HullVertex> = None;
        loop {
            let n = &self.nodes[t as usize];
            let succ = if n.right != NONE {
                Some(self.nodes[n.right as usize].first)
            } else {
                succ_ctx
            };
            let pred = if n.left != NONE {
                Some(self.nodes[n.left as usize].last)
            } else {
                pred_ctx
            };
            if let Some(s) = succ {
                if f(s) > f(n.v) {
                    pred_ctx = Some(n.v);
                    t = n.right;
                    continue;
                }
            }
            if let Some(p) = pred {
                if f(p) > f(n.v) {
                    succ_ctx = Some(n.v);
                    t = n.left;
                    continue;
                }
            }
            // At a maximum; a strictly convex chain can tie on at most one
            // neighbour. Prefer the smaller vertex index.
            let mut best = n.v;
            for nb in [self.pred(n.v.point.x), self.succ(n.v.point.x)]
                .into_iter()
                .flatten()
            {
                if f(nb) == f(best) && nb.index < best.index {
                    best = nb;
                }
            }
            return Some(best);
        }
    }

    /// Farthest point from `origin` among chain points strictly inside the
    /// half-plane `dot(u, q - origin) < 0`.
    ///
    /// Subtrees whose first and last points both lie inside the half-plane
    /// are resolved through their annotation; subtrees with both outside are
    /// pruned — except when `origin` lies horizontally between the subtree's
    /// extremes, where convexity of the spanned arc no longer pins down
    /// membership and both children are searched.
    fn farthest_in_halfplane(
        &self,
        origin: Point,
        u: Point,
        best: &mut Option<(f64, HullVertex)>,
    ) {
        self.halfplane_rec(self.root, origin, u, best);
    }

    fn halfplane_rec(&self, t: u32, origin: Point, u: Point, best: &mut Option<(f64, HullVertex)>) {
        if t == NONE {
            return;
        }
        let n = &self.nodes[t as usize];
        let inside = |q: Point| dot(u, sub(q, origin)) < 0.0;
        let in_first = inside(n.first.point);
        let in_last = inside(n.last.point);
        let straddle = n.first.point.x <= origin.x && origin.x <= n.last.point.x;
        if !straddle && in_first && in_last && origin == self.anchor {
            // The whole arc lies inside; the annotation (farthest from the
            // anchor) answers the query directly.
            self.offer(best, (n.far_d2, n.far));
            return;
        }
        if !straddle && !in_first && !in_last {
            return;
        }
        if inside(n.v.point) {
            self.offer(best, (n.v.point.dist_sq(origin), n.v));
        }
        self.halfplane_rec(n.left, origin, u, best);
        self.halfplane_rec(n.right, origin, u, best);
    }

    fn offer(&self, best: &mut Option<(f64, HullVertex)>, cand: (f64, HullVertex)) {
        match best {
            None => *best = Some(cand),
            Some(b) => *b = self.better_far(*b, cand),
        }
    }

    /// Recomputes every subtree annotation from scratch and checks chain
    /// order plus strict convexity. Test hook.
    pub fn check_invariants(&self) -> bool {
        if self.root != NONE && !self.check_rec(self.root).0 {
            return false;
        }
        let pts = self.in_order();
        for w in pts.windows(2) {
            if w[0].point.x >= w[1].point.x {
                return false;
            }
        }
        for w in pts.windows(3) {
            if self.outside(w[0].point, w[2].point, w[1].point) <= 0.0 {
                return false;
            }
        }
        true
    }

    fn check_rec(&self, t: u32) -> (bool, f64, HullVertex, HullVertex, HullVertex) {
        let n = &self.nodes[t as usize];
        let mut far = (n.v.point.dist_sq(self.anchor), n.v);
        let mut first = n.v;
        let mut last = n.v;
        let mut ok = true;
        if n.left != NONE {
            if self.nodes[n.left as usize].prio > n.prio {
                ok = false;
            }
            let (o, d2, f, fi, _la) = self.check_rec(n.left);
            ok &= o;
            far = self.better_far(far, (d2, f));
            first = fi;
        }
        if n.right != NONE {
            if self.nodes[n.right as usize].prio > n.prio {
                ok = false;
            }
            let (o, d2, f, _fi, la) = self.check_rec(n.right);
            ok &= o;
            far = self.better_far(far, (d2, f));
            last = la;
        }
        ok &= far.0 == n.far_d2
            && far.1 == n.far
            && first == n.first
            && last == n.last;
        (ok, n.far_d2, n.far, n.first, n.last)
    }
}

/// Convex hull of a growing point set, anchored at a fixed first point.
pub struct AnnotatedHull {
    upper: HullChain,
    lower: HullChain,
    anchor: HullVertex,
}

impl AnnotatedHull {
    /// Creates a hull containing just the anchor point.
    pub fn new(anchor: Point, index: usize) -> AnnotatedHull {
        let v = HullVertex {
            point: anchor,
            index,
        };
        let mut h = AnnotatedHull {
            upper: HullChain::new(anchor, true),
            lower: HullChain::new(anchor, false),
            anchor: v,
        };
        h.upper.insert_hull(v);
        h.lower.insert_hull(v);
        h
    }

    pub fn anchor(&self) -> HullVertex {
        self.anchor
    }

    /// Inserts one point. Interior points leave both chains untouched.
    pub fn insert(&mut self, p: Point, index: usize) {
        let v = HullVertex { point: p, index };
        self.upper.insert_hull(v);
        self.lower.insert_hull(v);
    }

    /// Hull point maximizing the dot product with `dir`; ties broken towards
    /// the smaller vertex index. `dir` must be non-zero.
    pub fn extreme_point(&self, dir: Point) -> Option<HullVertex> {
        if dir.y > 0.0 {
            self.upper.extreme(dir)
        } else if dir.y < 0.0 {
            self.lower.extreme(dir)
        } else {
            // Horizontal direction: both chains share their endpoints.
            self.upper.extreme(dir)
        }
    }

    /// Farthest hull point from `seg_from` strictly beyond the line through
    /// `seg_from` perpendicular to `seg_to - seg_from`, away from `seg_to`.
    pub fn farthest_in_region_l(&self, seg_from: Point, seg_to: Point) -> Option<HullVertex> {
        let u = sub(seg_to, seg_from);
        let mut best = None;
        self.upper.farthest_in_halfplane(seg_from, u, &mut best);
        self.lower.farthest_in_halfplane(seg_from, u, &mut best);
        best.map(|(_, v)| v)
    }

    /// Farthest hull point from the anchor (root annotations).
    pub fn farthest_from_anchor(&self) -> HullVertex {
        let a = self.upper.farthest();
        let b = self.lower.farthest();
        match (a, b) {
            (Some(x), Some(y)) => self.upper.better_far(x, y).1,
            (Some(x), None) => x.1,
            (None, Some(y)) => y.1,
            (None, None) => self.anchor,
        }
    }

    pub fn upper_chain(&self) -> Vec<HullVertex> {
        self.upper.in_order()
    }

    pub fn lower_chain(&self) -> Vec<HullVertex> {
        self.lower.in_order()
    }

    /// Test hook: structural and annotation invariants of both chains.
    pub fn check_invariants(&self) -> bool {
        self.upper.check_invariants() && self.lower.check_invariants()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::test_fixtures::{curve_l, curve_z};

    fn xy(vs: &[HullVertex]) -> Vec<(f64, f64)> {
        vs.iter().map(|v| (v.point.x, v.point.y)).collect()
    }

    fn hull_of(points: &[Point]) -> AnnotatedHull {
        let mut h = AnnotatedHull::new(points[0], 0);
        for (k, &p) in points.iter().enumerate().skip(1) {
            h.insert(p, k);
        }
        h
    }

    #[test]
    fn insert_builds_both_chains() {
        let mut h = AnnotatedHull::new(Point::new(0.0, 0.0), 0);
        h.insert(Point::new(1.0, 1.0), 1);
        h.insert(Point::new(2.0, 0.0), 2);
        assert_eq!(xy(&h.upper_chain()), vec![(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]);
        assert_eq!(xy(&h.lower_chain()), vec![(0.0, 0.0), (2.0, 0.0)]);
        assert!(h.check_invariants());
    }

    #[test]
    fn interior_points_change_nothing() {
        let mut h = AnnotatedHull::new(Point::new(0.0, 0.0), 0);
        h.insert(Point::new(4.0, 0.0), 1);
        h.insert(Point::new(2.0, 2.0), 2);
        let up = xy(&h.upper_chain());
        let lo = xy(&h.lower_chain());
        h.insert(Point::new(2.0, 1.0), 3); // strictly inside
        assert_eq!(xy(&h.upper_chain()), up);
        assert_eq!(xy(&h.lower_chain()), lo);
        assert!(h.check_invariants());
    }

    #[test]
    fn collinear_middle_points_are_evicted() {
        let l = curve_l();
        let h = hull_of(l.points());
        assert_eq!(xy(&h.upper_chain()), vec![(0.0, 0.0), (3.0, 0.0)]);
        assert_eq!(xy(&h.lower_chain()), vec![(0.0, 0.0), (3.0, 0.0)]);
        assert!(h.check_invariants());
    }

    #[test]
    fn extreme_point_queries_with_ties() {
        let z = curve_z();
        let h = hull_of(z.points());
        // Two hull points attain y = 1; the smaller index wins.
        let top = h.extreme_point(Point::new(0.0, 1.0)).unwrap();
        assert_eq!((top.point.x, top.point.y, top.index), (1.0, 1.0, 1));
        let bottom = h.extreme_point(Point::new(0.0, -1.0)).unwrap();
        assert_eq!((bottom.point.x, bottom.point.y, bottom.index), (0.0, 0.0, 0));
        let right = h.extreme_point(Point::new(1.0, 0.0)).unwrap();
        assert_eq!(right.point.x, 4.0);
    }

    #[test]
    fn farthest_annotation_tracks_anchor() {
        let z = curve_z();
        let h = hull_of(z.points());
        let far = h.farthest_from_anchor();
        assert_eq!((far.point.x, far.point.y), (4.0, 0.0));
    }

    #[test]
    fn region_l_queries() {
        let z = curve_z();
        let h = hull_of(z.points());
        // Query segment p_2 -> p_4 (0-based 1 -> 3): only (0,0) lies behind p_2.
        let got = h
            .farthest_in_region_l(z.point(1), z.point(3))
            .expect("region should hold the start point");
        assert_eq!((got.point.x, got.point.y), (0.0, 0.0));
        // Whole-curve segment: nothing lies before the first vertex.
        assert!(h.farthest_in_region_l(z.point(0), z.point(4)).is_none());

        let l = curve_l();
        let h = hull_of(l.points());
        let got = h
            .farthest_in_region_l(l.point(1), l.point(2))
            .expect("collinear prefix lies in the region");
        assert_eq!((got.point.x, got.point.y), (0.0, 0.0));
    }

    #[test]
    fn duplicate_x_keeps_the_dominating_point() {
        let mut h = AnnotatedHull::new(Point::new(0.0, 0.0), 0);
        h.insert(Point::new(1.0, 1.0), 1);
        h.insert(Point::new(1.0, 3.0), 2);
        h.insert(Point::new(2.0, 0.0), 3);
        assert_eq!(xy(&h.upper_chain()), vec![(0.0, 0.0), (1.0, 3.0), (2.0, 0.0)]);
        assert!(h.check_invariants());
    }
}

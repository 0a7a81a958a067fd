//! Link-minimal and cost-minimal paths in shortcut graphs.
//!
//! Shortcut graphs are DAGs whose edges always point from a smaller to a
//! larger vertex index, which keeps every search here simple and
//! deterministic. Ties are broken towards the lexicographically smallest
//! vertex sequence throughout.
//!
//! [`range_query_shortest_path`] exploits the interval representation: the
//! vertices are processed from the target backwards while a balanced tree
//! over the processed suffix maintains, per subtree, the vertex with the
//! fewest remaining links. Each interval of a row is then answered either by
//! one tree range query or — for short intervals — by scanning its vertices
//! directly; the crossover is `c * log2(n)` with a configurable `c`.

use crate::error::{Error, Result};
use crate::shortcut_graph::{ExplicitShortcutGraph, ShortcutIntervalSet};

/// A path through the curve's vertex indices plus its link count.
#[derive(Clone, Debug, PartialEq)]
pub struct PathResult {
    pub vertices: Vec<usize>,
    pub links: usize,
}

/// Distances and predecessors from a single source, as produced by
/// [`dijkstra_min_cost`]. Unreachable vertices hold `f64::INFINITY` / `None`.
#[derive(Clone, Debug)]
pub struct ShortestPathTree {
    pub source: usize,
    pub dist: Vec<f64>,
    pub pred: Vec<Option<usize>>,
}

/// Default crossover constant for [`range_query_shortest_path`].
pub const DEFAULT_CUTOFF: f64 = 4.0;

fn check_pair(n: usize, s: usize, t: usize) -> Result<()> {
    if s >= n {
        return Err(Error::VertexOutOfRange(s, n));
    }
    if t >= n {
        return Err(Error::VertexOutOfRange(t, n));
    }
    if s > t {
        return Err(Error::Unreachable(s, t));
    }
    Ok(())
}

/// Minimum-link path from `s` to `t`, lexicographically smallest among the
/// optima. Hop counts are computed backwards from `t` in topological order;
/// the walk then greedily picks the smallest usable successor.
pub fn bfs_min_links(g: &ExplicitShortcutGraph, s: usize, t: usize) -> Result<PathResult> {
    check_pair(g.n, s, t)?;
    if s == t {
        return Ok(PathResult {
            vertices: vec![s],
            links: 0,
        });
    }
    const UNREACHED: usize = usize::MAX;
    let mut dist = vec![UNREACHED; t + 1];
    dist[t] = 0;
    for v in (s..t).rev() {
        for &w in &g.adj[v] {
            if w <= t && dist[w] != UNREACHED {
                dist[v] = dist[v].min(dist[w] + 1);
            }
        }
    }
    if dist[s] == UNREACHED {
        return Err(Error::Unreachable(s, t));
    }
    let mut vertices = vec![s];
    let mut v = s;
    while v != t {
        let next = g.adj[v]
            .iter()
            .copied()
            .find(|&w| w <= t && dist[w] != UNREACHED && dist[w] + 1 == dist[v])
            .expect("consistent distance labels");
        vertices.push(next);
        v = next;
    }
    Ok(PathResult {
        vertices,
        links: dist[s],
    })
}

/// Single-source cheapest paths over an interval graph with per-shortcut
/// weights. Weights must be non-negative; `None` from the weight function is
/// reported as an error. Equal-cost relaxations keep the smaller predecessor.
pub fn dijkstra_min_cost(
    g: &ShortcutIntervalSet,
    source: usize,
    weight: &dyn Fn(usize, usize) -> Option<f64>,
) -> Result<ShortestPathTree> {
    let n = g.n();
    if source >= n {
        return Err(Error::VertexOutOfRange(source, n));
    }
    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut done = vec![false; n];
    dist[source] = 0.0;

    use std::cmp::Reverse;
    use std::collections::BinaryHeap;

    #[derive(PartialEq)]
    struct Item(f64, usize);
    impl Eq for Item {}
    impl Ord for Item {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            self.0
                .total_cmp(&other.0)
                .then(self.1.cmp(&other.1))
        }
    }
    impl PartialOrd for Item {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }

    let mut heap = BinaryHeap::new();
    heap.push(Reverse(Item(0.0, source)));
    while let Some(Reverse(Item(d, v))) = heap.pop() {
        if done[v] || d > dist[v] {
            continue;
        }
        done[v] = true;
        for w in g.targets(v) {
            let c = weight(v, w).ok_or(Error::MissingWeight(v, w))?;
            let cand = dist[v] + c;
            if cand < dist[w] || (cand == dist[w] && pred[w].map_or(false, |p| v < p)) {
                dist[w] = cand;
                pred[w] = Some(v);
                heap.push(Reverse(Item(cand, w)));
            }
        }
    }
    Ok(ShortestPathTree {
        source,
        dist,
        pred,
    })
}

const NONE: u32 = u32::MAX;

/// Balanced tree over a suffix of vertices, annotated per subtree with the
/// vertex having the fewest remaining links to the target.
struct PathTree {
    nodes: Vec<PNode>,
    root: u32,
    rng: u64,
}

struct PNode {
    v: usize,
    links: Option<usize>,
    prio: u64,
    left: u32,
    right: u32,
    min_v: usize,
    max_v: usize,
    best: Option<(usize, usize)>, // (links, vertex), min over subtree
}

fn take_best(a: Option<(usize, usize)>, b: Option<(usize, usize)>) -> Option<(usize, usize)> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

impl PathTree {
    fn new(cap: usize) -> PathTree {
        PathTree {
            nodes: Vec::with_capacity(cap),
            root: NONE,
            rng: 0xdecaf,
        }
    }

    fn pull(&mut self, t: u32) {
        let (l, r) = (self.nodes[t as usize].left, self.nodes[t as usize].right);
        let me = &self.nodes[t as usize];
        let mut best = me.links.map(|l| (l, me.v));
        let mut min_v = me.v;
        let mut max_v = me.v;
        if l != NONE {
            best = take_best(best, self.nodes[l as usize].best);
            min_v = self.nodes[l as usize].min_v;
        }
        if r != NONE {
            best = take_best(best, self.nodes[r as usize].best);
            max_v = self.nodes[r as usize].max_v;
        }
        let me = &mut self.nodes[t as usize];
        me.best = best;
        me.min_v = min_v;
        me.max_v = max_v;
    }

    /// Inserts a vertex smaller than everything currently stored.
    fn insert_min(&mut self, v: usize, links: Option<usize>) {
        self.rng = self.rng.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.rng;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        let prio = z ^ (z >> 31);
        self.nodes.push(PNode {
            v,
            links,
            prio,
            left: NONE,
            right: NONE,
            min_v: v,
            max_v: v,
            best: links.map(|l| (l, v)),
        });
        let id = (self.nodes.len() - 1) as u32;
        self.root = self.insert_rec(self.root, id);
        debug_assert!(self.verify(self.root).0, "path tree annotations corrupt");
    }

    fn insert_rec(&mut self, t: u32, id: u32) -> u32 {
        if t == NONE {
            return id;
        }
        if self.nodes[id as usize].prio > self.nodes[t as usize].prio {
            // New node becomes the subtree root; everything here is larger.
            self.nodes[id as usize].right = t;
            self.pull(id);
            return id;
        }
        let l = self.insert_rec(self.nodes[t as usize].left, id);
        self.nodes[t as usize].left = l;
        self.pull(t);
        t
    }

    /// Minimum `(links, vertex)` over stored vertices in `[x, y]`.
    fn query(&self, x: usize, y: usize) -> Option<(usize, usize)> {
        let mut acc = None;
        self.query_rec(self.root, x, y, &mut acc);
        acc
    }

    fn query_rec(&self, t: u32, x: usize, y: usize, acc: &mut Option<(usize, usize)>) {
        if t == NONE {
            return;
        }
        let n = &self.nodes[t as usize];
        if n.max_v < x || n.min_v > y {
            return;
        }
        if x <= n.min_v && n.max_v <= y {
            *acc = take_best(*acc, n.best);
            return;
        }
        self.query_rec(n.left, x, y, acc);
        if x <= n.v && n.v <= y {
            *acc = take_best(*acc, n.links.map(|l| (l, n.v)));
        }
        self.query_rec(n.right, x, y, acc);
    }

    fn verify(&self, t: u32) -> (bool, Option<(usize, usize)>, usize, usize) {
        if t == NONE {
            return (true, None, usize::MAX, 0);
        }
        let n = &self.nodes[t as usize];
        let (lo, lb, lmin, lmax) = self.verify(n.left);
        let (ro, rb, rmin, rmax) = self.verify(n.right);
        let best = take_best(n.links.map(|l| (l, n.v)), take_best(lb, rb));
        let min_v = if n.left != NONE { lmin } else { n.v };
        let max_v = if n.right != NONE { rmax } else { n.v };
        let order_ok = (n.left == NONE || lmax < n.v) && (n.right == NONE || rmin > n.v);
        let ok = lo && ro && order_ok && best == n.best && min_v == n.min_v && max_v == n.max_v;
        (ok, best, min_v, max_v)
    }
}

/// Minimum-link path from `s` to `t` over an interval graph.
///
/// Vertices are labelled from `t` down to `s` with their remaining link
/// count. Each interval `[x, y]` of a row is resolved by a tree range query,
/// or by scanning when `y - x < cutoff * log2(n)`; `cutoff = 0` always
/// queries the tree, `cutoff = inf` always scans. The returned path does not
/// depend on the cutoff.
pub fn range_query_shortest_path(
    g: &ShortcutIntervalSet,
    s: usize,
    t: usize,
    cutoff: f64,
) -> Result<PathResult> {
    check_pair(g.n(), s, t)?;
    if s == t {
        return Ok(PathResult {
            vertices: vec![s],
            links: 0,
        });
    }
    let n = g.n();
    let scan_below = cutoff * (n as f64).log2();
    let mut tree = PathTree::new(t - s + 1);
    // labels[v] = (links to t, chosen successor)
    let mut labels: Vec<Option<(usize, usize)>> = vec![None; t + 1];
    labels[t] = Some((0, t));
    tree.insert_min(t, Some(0));
    for v in (s..t).rev() {
        let mut best: Option<(usize, usize)> = None; // (links at successor, successor)
        for &(ix, iy) in g.row(v) {
            let (x, y) = (ix.max(v + 1), iy.min(t));
            if x > y {
                continue;
            }
            let cand = if ((y - x) as f64) < scan_below {
                let mut acc: Option<(usize, usize)> = None;
                for w in x..=y {
                    if let Some((l, _)) = labels[w] {
                        acc = take_best(acc, Some((l, w)));
                    }
                }
                acc
            } else {
                tree.query(x, y)
            };
            best = take_best(best, cand);
        }
        let links = best.map(|(l, _)| l + 1);
        labels[v] = best.map(|(l, w)| (l + 1, w));
        tree.insert_min(v, links);
    }
    let Some((links, _)) = labels[s] else {
        return Err(Error::Unreachable(s, t));
    };
    let mut vertices = vec![s];
    let mut v = s;
    while v != t {
        v = labels[v].expect("labelled path prefix").1;
        vertices.push(v);
    }
    Ok(PathResult { vertices, links })
}

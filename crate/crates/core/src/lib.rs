//! Minimal progressive simplification of polygonal curves.
//!
//! Given a curve and a sequence of increasing error tolerances, the
//! algorithms here build a chain of simplifications — one per tolerance,
//! each a subsequence of the previous — that minimizes the total number of
//! vertices across all levels (optionally weighted per level, or integrated
//! over all tolerances at once). The exact solver runs in cubic time per
//! scale; the greedy and Douglas-Peucker based heuristics trade optimality
//! for speed and are exposed for comparison.
//!
//! The supporting machinery is usable on its own:
//!
//! * [`geometry`] — curves, points, and the Hausdorff / Fréchet / area
//!   shortcut error measures;
//! * [`error_oracle`] — all-pairs shortcut errors, either naively or via
//!   incremental convex hulls in near-quadratic time;
//! * [`shortcut_graph`] — compressed interval representations of all valid
//!   shortcuts at a tolerance, built from an error matrix or directly from
//!   the curve without one;
//! * [`shortest_path`] — link-minimal paths through interval graphs,
//!   including a tree-assisted range-query variant;
//! * [`progressive`] — the exact progressive solver, its continuous
//!   variant, the heuristics, and a brute-force reference for small inputs.

pub mod error;
pub mod error_oracle;
pub mod geometry;
pub mod progressive;
pub mod shortcut_graph;
pub mod shortest_path;

#[cfg(test)]
mod test_fixtures;

pub use error::{Error, Result};
pub use error_oracle::{compute_all_errors_hull, compute_all_errors_naive, ErrorMatrix};
pub use geometry::{shortcut_error, Curve, ErrorMeasure, Point, ShortcutRef};
pub use progressive::{
    brute_force_min_progressive, douglas_peucker, dp_progressive, greedy_bottom_up,
    greedy_bottom_up_cao, greedy_top_down, min_progressive, min_progressive_continuous,
    min_progressive_from_errors, min_progressive_weighted, ContinuousSimplification, CostTable,
    Direction,
    ProgressiveSimplification, ScaleSequence,
};
pub use shortcut_graph::{
    build_graph_chan_chin, build_graph_from_errors, ExplicitShortcutGraph, GraphStats,
    ShortcutIntervalSet,
};
pub use shortest_path::{
    bfs_min_links, dijkstra_min_cost, range_query_shortest_path, PathResult, ShortestPathTree,
    DEFAULT_CUTOFF,
};

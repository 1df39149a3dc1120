//! Independent certification of a computed packing.
//!
//! Everything here is recomputed from raw positions and radii, on a
//! different arithmetic path than the solver and layout took, so a bug
//! upstream cannot vouch for itself. Angle sums use radius ratios and
//! `atan` directly (not the log-difference kernel), tangency and
//! orthogonality come straight from coordinates, and the radius-ratio
//! diagnostic is evaluated in log space where it cannot overflow.
//!
//! Residuals are normalized by the local scale of the circles involved:
//! tangency by the sum of the two radii, tangency-point coincidence by the
//! smallest radius in the quad. A residual of 1e-6 means the same thing
//! next to a circle of radius 1e-4 as next to one of radius 1.

use std::f64::consts::{FRAC_PI_3, PI};

use serde::{Deserialize, Serialize};

use crate::angle_graph::AngleGraph;
use crate::layout::{Layout, Point};
use crate::objective::LogRadii;
use crate::solver::{Mode, SolveReport};

/// Circle of the unbounded face: the incircle of the outer triangle.
pub fn outer_circle() -> (Point, f64) {
    (Point { x: 3.0f64.sqrt(), y: 1.0 }, 1.0)
}

/// Max, mean and count of one residual family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResidualSummary {
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

#[derive(Default)]
struct Acc {
    max: f64,
    sum: f64,
    count: usize,
}

impl Acc {
    fn push(&mut self, v: f64) {
        self.max = self.max.max(v);
        self.sum += v;
        self.count += 1;
    }

    fn summary(self) -> ResidualSummary {
        let mean = if self.count == 0 { 0.0 } else { self.sum / self.count as f64 };
        ResidualSummary { max: self.max, mean, count: self.count }
    }
}

/// Edge-local geometric residuals of a laid-out packing.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeometricReport {
    /// `| |p_u - p_v| - (r_u + r_v) | / (r_u + r_v)` per primal edge.
    pub primal_tangency: ResidualSummary,
    /// Same for dual edges; pairs with the unbounded face measure internal
    /// tangency against the unit circle instead.
    pub dual_tangency: ResidualSummary,
    /// `|cos|` of the angle between a primal edge and its dual edge.
    pub orthogonality: ResidualSummary,
    /// Distance between the primal and dual tangency points of a quad,
    /// over the smallest radius involved.
    pub coincidence: ResidualSummary,
}

fn dist(a: Point, b: Point) -> f64 {
    (a.x - b.x).hypot(a.y - b.y)
}

fn tangency_residual(pa: Point, ra: f64, pb: Point, rb: f64) -> f64 {
    (dist(pa, pb) - (ra + rb)).abs() / (ra + rb)
}

/// Point where the circle at `pa` touches the circle at `pb`, assuming
/// external tangency: `ra` along the center line.
fn touch_point(pa: Point, ra: f64, pb: Point) -> Point {
    let d = dist(pa, pb);
    Point { x: pa.x + ra * (pb.x - pa.x) / d, y: pa.y + ra * (pb.y - pa.y) / d }
}

/// Recompute all edge-local residuals from coordinates.
///
/// Interior primal edges and their dual partners come from the quads; the
/// three outer triangle sides are paired with the unbounded face, whose
/// circle is the fixed incircle. When a boundary face's circle approaches
/// radius 1 its center collides with the incircle center and the dual
/// direction becomes meaningless, so orthogonality and coincidence are
/// skipped for that pair (tangency is still well defined and checked).
pub fn geometric_residuals(h: &AngleGraph, layout: &Layout) -> GeometricReport {
    let p = &layout.positions;
    let r = &layout.radii;
    let mut primal = Acc::default();
    let mut dual = Acc::default();
    let mut ortho = Acc::default();
    let mut coin = Acc::default();

    for &[u, f, v, g] in &h.quads {
        primal.push(tangency_residual(p[u], r[u], p[v], r[v]));
        dual.push(tangency_residual(p[f], r[f], p[g], r[g]));

        let (ex, ey) = (p[v].x - p[u].x, p[v].y - p[u].y);
        let (dx, dy) = (p[g].x - p[f].x, p[g].y - p[f].y);
        let en = ex.hypot(ey);
        let dn = dx.hypot(dy);
        if en > 0.0 && dn > 0.0 {
            ortho.push((ex * dx + ey * dy).abs() / (en * dn));
        }
        let scale = r[u].min(r[v]).min(r[f]).min(r[g]);
        coin.push(dist(touch_point(p[u], r[u], p[v]), touch_point(p[f], r[f], p[g])) / scale);
    }

    let (c_inf, r_inf) = outer_circle();
    for i in 0..3 {
        let u = h.pinned[i];
        let v = h.pinned[(i + 1) % 3];
        let t = h.boundary_faces[i];
        primal.push(tangency_residual(p[u], r[u], p[v], r[v]));

        // C_t sits inside the incircle, touching it from within.
        let d = dist(p[t], c_inf);
        dual.push((d - (r_inf - r[t])).abs() / (r_inf + r[t]));

        if r_inf - r[t] < 1e-8 || d == 0.0 {
            continue; // degenerate: C_t is (numerically) the incircle itself
        }
        let (ex, ey) = (p[v].x - p[u].x, p[v].y - p[u].y);
        let (dx, dy) = (p[t].x - c_inf.x, p[t].y - c_inf.y);
        let en = ex.hypot(ey);
        if en > 0.0 {
            ortho.push((ex * dx + ey * dy).abs() / (en * d));
        }
        let on_rim = Point { x: c_inf.x + r_inf * dx / d, y: c_inf.y + r_inf * dy / d };
        let scale = r[u].min(r[v]).min(r[t]).min(r_inf);
        coin.push(dist(touch_point(p[u], r[u], p[v]), on_rim) / scale);
    }

    GeometricReport {
        primal_tangency: primal.summary(),
        dual_tangency: dual.summary(),
        orthogonality: ortho.summary(),
        coincidence: coin.summary(),
    }
}

/// Full-turn angle residual per H-vertex, from radii alone.
///
/// At every vertex the incident kites contribute `2 arctan(r_w / r_u)`
/// each; a correct packing closes the full angle `2 pi` at free vertices
/// and the equilateral corner angle `pi / 3` at the pinned ones. This is
/// the doubled form of the solver's internal residual, recomputed from
/// radius ratios rather than log differences.
pub fn angle_residuals(h: &AngleGraph, radii: &[f64]) -> Vec<f64> {
    let g = &h.graph;
    (0..h.n_vertices())
        .map(|u| {
            let sum: f64 =
                g.neighbors(u).iter().map(|&w| 2.0 * (radii[w] / radii[u]).atan()).sum();
            let target = if h.is_pinned(u) { FRAC_PI_3 } else { 2.0 * PI };
            (sum - target).abs()
        })
        .collect()
}

/// Radius spread diagnostic, evaluated in log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioDiagnostics {
    /// `log(r_max / r_min)` over all H-vertices.
    pub log_ratio: f64,
    /// `r_max / r_min`; may overflow to infinity, `log_ratio` never does.
    pub ratio: f64,
    /// Primal plus dual vertex count (the unbounded face included).
    pub n: usize,
    /// Whether `log R <= n log(2n)`, the worst-case packing bound.
    pub within_bound: bool,
}

pub fn ratio_diagnostics(h: &AngleGraph, x: &LogRadii) -> RatioDiagnostics {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for v in 0..h.n_vertices() {
        let xv = x.get(h, v);
        lo = lo.min(xv);
        hi = hi.max(xv);
    }
    let log_ratio = hi - lo;
    let n = h.n_vertices() + 1;
    RatioDiagnostics {
        log_ratio,
        ratio: log_ratio.exp(),
        n,
        within_bound: log_ratio <= n as f64 * (2.0 * n as f64).ln(),
    }
}

/// One overlapping pair found by the brute-force sweep.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Overlap {
    pub a: usize,
    pub b: usize,
    /// `(r_a + r_b - |p_a - p_b|) / (r_a + r_b)`, positive depth.
    pub depth: f64,
}

/// Quadratic-time global overlap check, for small instances only.
///
/// Primal circles must have pairwise disjoint interiors, and so must the
/// circles of the bounded faces; a pair counts as overlapping when its
/// relative penetration depth exceeds `slack`. Crossings between the two
/// families are the whole point of the construction and are not flagged.
pub fn overlapping_pairs(h: &AngleGraph, layout: &Layout, slack: f64) -> Vec<Overlap> {
    let mut out = Vec::new();
    let mut scan = |lo: usize, hi: usize| {
        for a in lo..hi {
            for b in (a + 1)..hi {
                let rr = layout.radii[a] + layout.radii[b];
                let depth = (rr - dist(layout.positions[a], layout.positions[b])) / rr;
                if depth > slack {
                    out.push(Overlap { a, b, depth });
                }
            }
        }
    };
    scan(0, h.n_primal);
    scan(h.n_primal, h.n_vertices());
    out
}

/// Solver statistics that are stable across reruns.
///
/// Wall-clock time and the per-iteration trajectories are deliberately not
/// carried here: serialized reports must be byte-identical for identical
/// inputs, and timing is the one field that never is. The driver prints
/// timing separately.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverStats {
    pub mode: Mode,
    pub converged: bool,
    pub outer_iterations: usize,
    pub pcg_iterations: usize,
    pub cholesky_solves: usize,
    pub pcg_fallbacks: usize,
    pub final_residual: f64,
    pub final_gradient_norm: f64,
    pub r_inf: Option<f64>,
    pub epsilon_phi: Option<f64>,
    pub regularizer_excess: Option<f64>,
}

impl SolverStats {
    pub fn from_report(mode: Mode, report: &SolveReport) -> Self {
        SolverStats {
            mode,
            converged: report.converged,
            outer_iterations: report.outer_iterations,
            pcg_iterations: report.pcg_iterations,
            cholesky_solves: report.cholesky_solves,
            pcg_fallbacks: report.pcg_fallbacks,
            final_residual: report.final_residual,
            final_gradient_norm: report.final_gradient_norm,
            r_inf: report.r_inf,
            epsilon_phi: report.epsilon_phi,
            regularizer_excess: report.regularizer_excess,
        }
    }
}

/// Everything a consumer needs to judge a packing, in one serializable
/// record: residual families, radius spread, placement bookkeeping, and
/// the solver's own account of the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PackingReport {
    pub n_primal: usize,
    pub n_h_vertices: usize,
    pub angle: ResidualSummary,
    pub primal_tangency: ResidualSummary,
    pub dual_tangency: ResidualSummary,
    pub orthogonality: ResidualSummary,
    pub coincidence: ResidualSummary,
    /// Largest disagreement between placements reached along different
    /// traversal paths.
    pub placement_discrepancy: f64,
    pub log_radius_ratio: f64,
    pub radius_ratio: f64,
    pub ratio_within_bound: bool,
    /// Whether the brute-force overlap sweep ran, and what it found.
    pub overlap_checked: bool,
    pub overlap_violations: usize,
    pub solver: SolverStats,
}

pub fn packing_report(
    h: &AngleGraph,
    x: &LogRadii,
    layout: &Layout,
    mode: Mode,
    solve: &SolveReport,
) -> PackingReport {
    let geo = geometric_residuals(h, layout);
    let angles = angle_residuals(h, &layout.radii);
    let mut angle = Acc::default();
    for a in angles {
        angle.push(a);
    }
    let ratio = ratio_diagnostics(h, x);
    PackingReport {
        n_primal: h.n_primal,
        n_h_vertices: h.n_vertices(),
        angle: angle.summary(),
        primal_tangency: geo.primal_tangency,
        dual_tangency: geo.dual_tangency,
        orthogonality: geo.orthogonality,
        coincidence: geo.coincidence,
        placement_discrepancy: layout.max_discrepancy,
        log_radius_ratio: ratio.log_ratio,
        radius_ratio: ratio.ratio,
        ratio_within_bound: ratio.within_bound,
        overlap_checked: false,
        overlap_violations: 0,
        solver: SolverStats::from_report(mode, solve),
    }
}

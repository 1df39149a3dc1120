//! Vertex placement from converged radii.
//!
//! The outer triangle is laid down analytically and every other H-vertex is
//! reached by a breadth-first sweep over directed H-edges with known
//! direction angles. Around a placed vertex the rotation list turns angles
//! into each other by kite trigonometry: stepping to the next neighbor adds
//! the two half-angles `arctan(r_prev/r_u) + arctan(r_next/r_u)`. A vertex
//! is placed by walking a known direction for the kite diagonal
//! `sqrt(r_u^2 + r_w^2)`, but only across edges whose radius ratio is within
//! the approximately-good window; extreme-ratio edges still relay angles
//! (the trigonometry holds regardless), they just never carry a placement.
//! The first placement of a vertex wins; later arrivals only widen the
//! recorded multi-path discrepancy.

use std::collections::VecDeque;
use std::f64::consts::{FRAC_PI_3, PI};

use thiserror::Error;

use crate::angle_graph::AngleGraph;
use crate::kernel;
use crate::objective::{gradient, LogRadii};
use crate::plane_graph::Vertex;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

#[derive(Debug, Error)]
pub enum LayoutError {
    /// The good-edge subgraph did not reach every vertex, which signals
    /// radii far from convergence or a too-strict classification.
    #[error("{count} vertices left unplaced after traversal (first few: {sample:?})")]
    Unplaced { count: usize, sample: Vec<Vertex> },
}

/// Positions for every H-vertex plus the traversal's audit trail.
#[derive(Debug, Clone)]
pub struct Layout {
    pub positions: Vec<Point>,
    pub radii: Vec<f64>,
    /// Directed H-edge whose crossing placed each vertex; `None` for the
    /// six analytically seeded boundary vertices.
    pub provenance: Vec<Option<usize>>,
    /// Direction angle per directed H-edge where one became known;
    /// unwrapped (not reduced mod 2 pi).
    pub angles: Vec<Option<f64>>,
    /// Largest distance between a vertex's accepted position and a
    /// candidate position proposed later by another good edge.
    pub max_discrepancy: f64,
    /// Classification tolerance the traversal ran with.
    pub eps: f64,
}

/// Log-space half-width of the approximately-good window:
/// `|x_u - x_w| <= log(2n) + log((1+eps)/(1-eps))`.
pub fn good_edge_threshold(n_h_vertices: usize, eps: f64) -> f64 {
    assert!((0.0..0.5).contains(&eps), "eps must lie in [0, 1/2)");
    (2.0 * n_h_vertices as f64).ln() + ((1.0 + eps) / (1.0 - eps)).ln()
}

/// Marks each directed H-edge as approximately-good (symmetric in the two
/// directions).
pub fn classify_edges(h: &AngleGraph, x: &LogRadii, eps: f64) -> Vec<bool> {
    let threshold = good_edge_threshold(h.n_vertices(), eps);
    let g = &h.graph;
    (0..g.n_directed_edges())
        .map(|e| (x.get(h, g.tail(e)) - x.get(h, g.head(e))).abs() <= threshold)
        .collect()
}

/// Conservative sup-norm error bound on the log-radii from strong
/// convexity: gradient norm over the curvature floor n^-3, capped below
/// the classification precondition.
pub fn radii_error_estimate(h: &AngleGraph, x: &LogRadii) -> f64 {
    let g = gradient(h, x);
    let norm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
    let n = h.n_vertices() as f64;
    (norm * n.powi(3)).min(0.49)
}

pub fn place_vertices(h: &AngleGraph, x: &LogRadii, eps: f64) -> Result<Layout, LayoutError> {
    let good = classify_edges(h, x, eps);
    let g = &h.graph;
    let n = h.n_vertices();
    let radii: Vec<f64> = (0..n).map(|v| x.radius(h, v)).collect();
    let mut positions: Vec<Option<Point>> = vec![None; n];
    let mut provenance: Vec<Option<usize>> = vec![None; n];
    let mut angles: Vec<Option<f64>> = vec![None; g.n_directed_edges()];
    let mut queue: VecDeque<usize> = VecDeque::new();
    let mut max_discrepancy = 0.0f64;

    // Outer corners: equilateral, side 2 sqrt(3), counterclockwise.
    let s3 = 3.0f64.sqrt();
    let corner = [Point { x: 0.0, y: 0.0 }, Point { x: 2.0 * s3, y: 0.0 }, Point { x: s3, y: 3.0 }];
    for i in 0..3 {
        positions[h.pinned[i]] = Some(corner[i]);
    }
    // Each boundary face t_i starts a kite against both ends of its outer
    // edge: the known side direction tilted inward by the kite half-angle.
    for i in 0..3 {
        let (si, sj) = (h.pinned[i], h.pinned[(i + 1) % 3]);
        let ti = h.boundary_faces[i];
        let base = 2.0 * FRAC_PI_3 * i as f64;
        let half = kernel::slope(x.get(h, ti) - x.get(h, si));
        let e_fwd = g.directed_edge(si, ti).expect("boundary face adjoins its corner");
        let e_bwd = g.directed_edge(sj, ti).expect("boundary face adjoins its corner");
        angles[e_fwd] = Some(base + half);
        angles[e_bwd] = Some(base + PI - half);
        queue.push_back(e_fwd);
        queue.push_back(e_bwd);
    }

    while let Some(e) = queue.pop_front() {
        let (u, w) = (g.tail(e), g.head(e));
        let alpha = angles[e].expect("queued edges carry an angle");
        let pu = positions[u].expect("queued edges start at a placed vertex");

        if good[e] {
            let len = (radii[u] * radii[u] + radii[w] * radii[w]).sqrt();
            let candidate =
                Point { x: pu.x + len * alpha.cos(), y: pu.y + len * alpha.sin() };
            match positions[w] {
                None => {
                    positions[w] = Some(candidate);
                    provenance[w] = Some(e);
                    let rev = g.twin(e);
                    if angles[rev].is_none() {
                        angles[rev] = Some(alpha + PI);
                        queue.push_back(rev);
                    }
                }
                Some(p) => {
                    let d = (candidate.x - p.x).hypot(candidate.y - p.y);
                    max_discrepancy = max_discrepancy.max(d);
                }
            }
        }

        // Relay the direction to the rotation neighbors of w around u.
        let out = g.out_edges(u);
        let degree = out.len();
        let k = e - out.start;
        let half_w = kernel::slope(x.get(h, w) - x.get(h, u));
        let pinned = h.is_pinned(u);
        // Pinned fans are linear: the rotation does not wrap across the
        // outer gap.
        let steps: [Option<usize>; 2] = [
            if k + 1 < degree {
                Some(k + 1)
            } else if pinned {
                None
            } else {
                Some(0)
            },
            if k > 0 {
                Some(k - 1)
            } else if pinned {
                None
            } else {
                Some(degree - 1)
            },
        ];
        for (dir, step) in steps.iter().enumerate() {
            let Some(k2) = *step else { continue };
            let e2 = out.start + k2;
            if angles[e2].is_some() {
                continue;
            }
            let w2 = g.head(e2);
            let half_w2 = kernel::slope(x.get(h, w2) - x.get(h, u));
            let turn = half_w + half_w2;
            angles[e2] = Some(if dir == 0 { alpha + turn } else { alpha - turn });
            queue.push_back(e2);
        }
    }

    let unplaced: Vec<Vertex> = (0..n).filter(|&v| positions[v].is_none()).collect();
    if !unplaced.is_empty() {
        let count = unplaced.len();
        let sample = unplaced.into_iter().take(8).collect();
        return Err(LayoutError::Unplaced { count, sample });
    }
    Ok(Layout {
        positions: positions.into_iter().map(|p| p.unwrap()).collect(),
        radii,
        provenance,
        angles,
        max_discrepancy,
        eps,
    })
}

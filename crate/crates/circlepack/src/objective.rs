//! The convex potential over log-radii whose minimizer solves the angle
//! constraints.
//!
//! With one coordinate `x_u = log r_u` per vertex of the incidence graph H
//! (the three outer vertices pinned at `log tan(pi/3)`), the potential is
//!
//! ```text
//! phi(x) = sum_{uw in E(H)} [ K(x_u - x_w) + K(x_w - x_u) - (pi/2)(x_u + x_w) ]
//!        + 2 pi sum_{u in V(H)} x_u
//! ```
//!
//! where `K` is [`kernel::value`]. Its partial derivative at a free vertex is
//! `2 pi - 2 sum_w arctan(r_w / r_u)`, so stationarity is exactly the angle
//! condition that the kites around each interior vertex close up. The Hessian
//! is symmetric diagonally dominant with nonpositive off-diagonal entries
//! `-2 K''(x_u - x_w)` on free-free edges; pinned neighbors contribute to the
//! diagonal only, which makes it positive definite.

use std::f64::consts::PI;

use crate::angle_graph::AngleGraph;
use crate::kernel;
use crate::plane_graph::Vertex;

/// `log tan(pi/3) = log sqrt(3)`: the pinned coordinate of the outer
/// vertices, making their radius sqrt(3).
pub const PINNED_LOG_RADIUS: f64 = 0.549_306_144_334_054_9;

/// Log-radii of the free vertices, in [`AngleGraph::free`] order.
#[derive(Debug, Clone, PartialEq)]
pub struct LogRadii {
    values: Vec<f64>,
}

impl LogRadii {
    pub fn zeros(h: &AngleGraph) -> Self {
        LogRadii { values: vec![0.0; h.n_free()] }
    }

    pub fn from_values(h: &AngleGraph, values: Vec<f64>) -> Self {
        assert_eq!(values.len(), h.n_free());
        LogRadii { values }
    }

    pub fn free(&self) -> &[f64] {
        &self.values
    }

    pub fn free_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    /// Coordinate of any H vertex; pinned vertices read as the constant.
    pub fn get(&self, h: &AngleGraph, v: Vertex) -> f64 {
        match h.free_index[v] {
            Some(i) => self.values[i],
            None => PINNED_LOG_RADIUS,
        }
    }

    pub fn radius(&self, h: &AngleGraph, v: Vertex) -> f64 {
        self.get(h, v).exp()
    }
}

/// Potential value. Summed in fixed order with Neumaier compensation: the
/// line search compares values whose difference is many orders below the
/// total's magnitude on large instances.
pub fn phi(h: &AngleGraph, x: &LogRadii) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut add = |t: f64| {
        let s = sum + t;
        comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
        sum = s;
    };
    let g = &h.graph;
    for e in 0..g.n_directed_edges() {
        let (u, w) = (g.tail(e), g.head(e));
        if u > w {
            continue;
        }
        let (xu, xw) = (x.get(h, u), x.get(h, w));
        let d = xu - xw;
        add(kernel::value(d) + kernel::value(-d) - 0.5 * PI * (xu + xw));
    }
    for v in 0..h.n_vertices() {
        add(2.0 * PI * x.get(h, v));
    }
    sum + comp
}

/// Gradient over the free coordinates: `2 pi - 2 sum_w arctan(r_w / r_u)`.
pub fn gradient(h: &AngleGraph, x: &LogRadii) -> Vec<f64> {
    let mut grad = vec![0.0; h.n_free()];
    for (i, &u) in h.free.iter().enumerate() {
        let xu = x.get(h, u);
        let mut s = 0.0;
        for &w in h.graph.neighbors(u) {
            s += kernel::slope(x.get(h, w) - xu);
        }
        grad[i] = 2.0 * PI - 2.0 * s;
    }
    grad
}

/// Angle defect at every H vertex: `|sum_w arctan(r_w/r_u) - target|` with
/// target `pi` for free vertices and `pi/6` (a pinned corner's half-angle)
/// for the outer three. The solver terminates on the max over free vertices;
/// the pinned defects are a consistency diagnostic.
pub fn angle_residuals(h: &AngleGraph, x: &LogRadii) -> Vec<f64> {
    (0..h.n_vertices())
        .map(|u| {
            let xu = x.get(h, u);
            let s: f64 =
                h.graph.neighbors(u).iter().map(|&w| kernel::slope(x.get(h, w) - xu)).sum();
            let target = if h.is_pinned(u) { PI / 6.0 } else { PI };
            (s - target).abs()
        })
        .collect()
}

/// Max angle defect over free vertices; the solver's termination quantity.
pub fn max_angle_residual(h: &AngleGraph, x: &LogRadii) -> f64 {
    h.free
        .iter()
        .map(|&u| {
            let xu = x.get(h, u);
            let s: f64 =
                h.graph.neighbors(u).iter().map(|&w| kernel::slope(x.get(h, w) - xu)).sum();
            (s - PI).abs()
        })
        .fold(0.0, f64::max)
}

/// Sparse symmetric diagonally dominant matrix in CSR over the free
/// coordinates. Off-diagonal entries are nonpositive; rows are sorted by
/// column with the diagonal entry included.
#[derive(Debug, Clone)]
pub struct SparseSdd {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col: Vec<usize>,
    pub val: Vec<f64>,
}

impl SparseSdd {
    pub fn apply(&self, x: &[f64], out: &mut [f64]) {
        debug_assert_eq!(x.len(), self.n);
        for i in 0..self.n {
            let mut s = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                s += self.val[k] * x[self.col[k]];
            }
            out[i] = s;
        }
    }

    /// Adds `v` to entry `(i, i)`. Every row stores its diagonal.
    pub fn add_to_diagonal(&mut self, i: usize, v: f64) {
        for k in self.row_ptr[i]..self.row_ptr[i + 1] {
            if self.col[k] == i {
                self.val[k] += v;
                return;
            }
        }
        unreachable!("row {i} is missing its diagonal entry");
    }

    pub fn diagonal(&self) -> Vec<f64> {
        let mut d = vec![0.0; self.n];
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.col[k] == i {
                    d[i] = self.val[k];
                }
            }
        }
        d
    }

    /// Each row's diagonal dominates the absolute off-diagonal sum (up to
    /// roundoff slack).
    pub fn is_diagonally_dominant(&self) -> bool {
        for i in 0..self.n {
            let mut diag = 0.0;
            let mut off = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                if self.col[k] == i {
                    diag = self.val[k];
                } else {
                    off += self.val[k].abs();
                }
            }
            if diag < off * (1.0 - 1e-12) {
                return false;
            }
        }
        true
    }

    #[cfg(test)]
    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut m = vec![vec![0.0; self.n]; self.n];
        for i in 0..self.n {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                m[i][self.col[k]] = self.val[k];
            }
        }
        m
    }
}

/// Hessian of [`phi`] at `x`, restricted to the free coordinates: edge
/// weights `2 K''(x_u - x_w)`, accumulated Laplacian-style; edges to pinned
/// vertices add to the diagonal only.
pub fn hessian(h: &AngleGraph, x: &LogRadii) -> SparseSdd {
    let n = h.n_free();
    let mut row_ptr = Vec::with_capacity(n + 1);
    let mut col = Vec::new();
    let mut val = Vec::new();
    row_ptr.push(0);
    for (i, &u) in h.free.iter().enumerate() {
        let xu = x.get(h, u);
        // Neighbor H-ids are not sorted; gather (column, weight) then sort.
        let mut diag = 0.0;
        let mut entries: Vec<(usize, f64)> = Vec::with_capacity(h.graph.degree(u) + 1);
        for &w in h.graph.neighbors(u) {
            let weight = 2.0 * kernel::curvature(xu - x.get(h, w));
            diag += weight;
            if let Some(j) = h.free_index[w] {
                entries.push((j, -weight));
            }
        }
        entries.push((i, diag));
        entries.sort_unstable_by_key(|&(j, _)| j);
        for (j, v) in entries {
            col.push(j);
            val.push(v);
        }
        row_ptr.push(col.len());
    }
    let m = SparseSdd { n, row_ptr, col, val };
    debug_assert!(m.is_diagonally_dominant());
    m
}

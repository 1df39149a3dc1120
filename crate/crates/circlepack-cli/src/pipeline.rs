//! End-to-end drivers: instance in, certified solution out.
//!
//! `run_pdpack` packs a planar triangulation and reports both circle
//! families. `run_pack` handles any 2-connected simple plane graph by
//! triangulating with star vertices, packing that, and discarding the
//! helper circles; only the input graph's own vertices are reported, and
//! their mutual tangencies are re-verified on the delivered circles. The
//! radius-spread diagnostics in a `pack` report keep describing the full
//! primal-dual construction, which is the quantity the runtime bounds are
//! stated in.

use circlepack::angle_graph::build_angle_graph;
use circlepack::layout::{place_vertices, radii_error_estimate};
use circlepack::plane_graph::{build_faces, find_face, star_triangulate, GraphError, Vertex};
use circlepack::solver::{
    default_tolerance, solve_radii, LinearSolver, Mode, SolveReport, SolverConfig,
};
use circlepack::verify::{overlapping_pairs, packing_report, outer_circle, ResidualSummary};
use thiserror::Error;

use crate::instance::Instance;
use crate::solution::{Circle, Provenance, SolutionFile, SOLUTION_FORMAT};

/// Largest instance the quadratic overlap audit will accept.
pub const OVERLAP_LIMIT: usize = 1_000;
/// Relative penetration depth beyond which a circle pair counts as
/// overlapping in the audit.
pub const OVERLAP_SLACK: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct RunConfig {
    /// Angle-residual target; `None` picks the size-based default.
    pub tol: Option<f64>,
    pub max_iter: usize,
    pub mode: Mode,
    pub linear_solver: LinearSolver,
    pub check_overlap: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            tol: None,
            max_iter: 500,
            mode: Mode::Plain,
            linear_solver: LinearSolver::PcgJacobi,
            check_overlap: false,
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    /// Structural rejection; maps to the invalid-input exit code.
    #[error("graph: {0}")]
    Graph(#[from] GraphError),
    /// The radii were too far from converged to lay out; maps to the
    /// non-convergence exit code.
    #[error("layout failed: {0}")]
    Unplaced(String),
}

/// A finished run: the serializable solution plus the solver's full
/// in-memory report (which still has wall time and trajectories).
#[derive(Debug, Clone)]
pub struct RunOutput {
    pub solution: SolutionFile,
    pub solve: SolveReport,
}

impl RunOutput {
    pub fn converged(&self) -> bool {
        self.solution.report.solver.converged
    }
}

pub fn run_pdpack(inst: &Instance, cfg: &RunConfig) -> Result<RunOutput, PipelineError> {
    let dual = build_faces(&inst.graph)?;
    let outer = find_face(&inst.graph, &dual, &inst.outer)
        .ok_or_else(|| GraphError::OuterFaceNotFound(inst.outer.clone()))?;
    // rejects non-triangulations with a face-by-face diagnostic
    let h = build_angle_graph(&inst.graph, &dual, outer)?;

    let solver_cfg = SolverConfig {
        mode: cfg.mode,
        tol: cfg.tol,
        max_iter: cfg.max_iter,
        linear_solver: cfg.linear_solver,
        ..Default::default()
    };
    let (x, solve) = solve_radii(&h, &solver_cfg);

    let eps = radii_error_estimate(&h, &x);
    let layout =
        place_vertices(&h, &x, eps).map_err(|e| PipelineError::Unplaced(e.to_string()))?;

    let mut report = packing_report(&h, &x, &layout, cfg.mode, &solve);
    if cfg.check_overlap && h.n_primal <= OVERLAP_LIMIT {
        report.overlap_checked = true;
        report.overlap_violations = overlapping_pairs(&h, &layout, OVERLAP_SLACK).len();
    }

    let circle = |v: Vertex, label: String| Circle {
        label,
        radius: layout.radii[v],
        x: layout.positions[v].x,
        y: layout.positions[v].y,
    };
    let primal = (0..h.n_primal).map(|v| circle(v, inst.labels[v].clone())).collect();
    let dual_circles = (h.n_primal..h.n_vertices())
        .map(|hv| circle(hv, format!("f{}", h.face_of_h[hv - h.n_primal])))
        .collect();
    let (c_inf, r_inf) = outer_circle();
    let solution = SolutionFile {
        format: SOLUTION_FORMAT.to_owned(),
        primal,
        dual: dual_circles,
        outer_circle: Circle { label: "f_inf".to_owned(), radius: r_inf, x: c_inf.x, y: c_inf.y },
        report,
        provenance: Provenance {
            tool_version: env!("CARGO_PKG_VERSION").to_owned(),
            instance_format: crate::instance::INSTANCE_FORMAT.to_owned(),
            command: "pdpack".to_owned(),
            mode: cfg.mode,
            linear_solver: cfg.linear_solver,
            tol: cfg.tol.unwrap_or_else(|| default_tolerance(h.n_vertices())),
            max_iter: cfg.max_iter,
            layout_eps: eps,
        },
    };
    Ok(RunOutput { solution, solve })
}

pub fn run_pack(inst: &Instance, cfg: &RunConfig) -> Result<RunOutput, PipelineError> {
    let dual = build_faces(&inst.graph)?;
    let outer = find_face(&inst.graph, &dual, &inst.outer)
        .ok_or_else(|| GraphError::OuterFaceNotFound(inst.outer.clone()))?;
    let starred = star_triangulate(&inst.graph, &dual, outer)?;

    let mut labels = inst.labels.clone();
    for v in starred.n_original..starred.graph.n_vertices() {
        labels.push(format!("+{v}"));
    }
    let tri =
        Instance { graph: starred.graph, outer: starred.outer, labels };
    let mut out = run_pdpack(&tri, cfg)?;

    // deliver only the input graph's circles, then re-check their
    // tangencies directly: the certification must hold on what ships
    out.solution.primal.truncate(starred.n_original);
    out.solution.dual.clear();
    out.solution.provenance.command = "pack".to_owned();
    out.solution.report.n_primal = starred.n_original;
    out.solution.report.primal_tangency =
        primal_tangency_of(&inst.graph, &out.solution.primal);
    Ok(out)
}

/// Tangency residuals of the delivered circles over the original edges.
fn primal_tangency_of(g: &circlepack::plane_graph::PlaneGraph, circles: &[Circle]) -> ResidualSummary {
    let mut max = 0.0f64;
    let mut sum = 0.0f64;
    let mut count = 0usize;
    for u in 0..g.n_vertices() {
        for &w in g.neighbors(u) {
            if u < w {
                let (a, b) = (&circles[u], &circles[w]);
                let d = (a.x - b.x).hypot(a.y - b.y);
                let r = (d - (a.radius + b.radius)).abs() / (a.radius + b.radius);
                max = max.max(r);
                sum += r;
                count += 1;
            }
        }
    }
    ResidualSummary { max, mean: if count == 0 { 0.0 } else { sum / count as f64 }, count }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instance::parse_instance;

    const K4_TEXT: &str = "4\n1 3 2\n2 3 0\n0 3 1\n2 0 1\nouter 0 1 2\n";
    const CUBE_TEXT: &str =
        "8\n1 4 3\n2 5 0\n3 6 1\n0 7 2\n5 7 0\n6 4 1\n2 7 5\n6 3 4\nouter 0 3 2 1\n";

    fn tight() -> RunConfig {
        RunConfig { tol: Some(1e-10), ..Default::default() }
    }

    #[test]
    fn pdpack_k4_reports_the_closed_form_radii() {
        let inst = parse_instance(K4_TEXT).unwrap();
        let out = run_pdpack(&inst, &tight()).unwrap();
        assert!(out.converged());
        let s3 = 3.0f64.sqrt();
        let sol = &out.solution;
        assert_eq!(sol.primal.len(), 4);
        assert_eq!(sol.dual.len(), 3);
        for c in &sol.primal[..3] {
            assert!((c.radius - s3).abs() <= 1e-9);
        }
        assert!((sol.primal[3].radius - (2.0 - s3)).abs() / (2.0 - s3) <= 1e-9);
        for c in &sol.dual {
            assert!((c.radius - (2.0 * s3 - 3.0)).abs() / (2.0 * s3 - 3.0) <= 1e-9);
        }
        assert_eq!(sol.outer_circle.radius, 1.0);
        assert!(sol.report.solver.converged);
    }

    #[test]
    fn pdpack_rejects_a_non_triangulation() {
        let inst = parse_instance(CUBE_TEXT).unwrap();
        match run_pdpack(&inst, &tight()) {
            Err(PipelineError::Graph(GraphError::NotATriangulation { .. })) => {}
            other => panic!("expected triangulation rejection, got {other:?}"),
        }
    }

    #[test]
    fn pack_cube_delivers_eight_tangent_circles() {
        let inst = parse_instance(CUBE_TEXT).unwrap();
        let out = run_pack(&inst, &tight()).unwrap();
        assert!(out.converged());
        let sol = &out.solution;
        assert_eq!(sol.primal.len(), 8);
        assert!(sol.dual.is_empty());
        assert_eq!(sol.report.primal_tangency.count, 12);
        assert!(sol.report.primal_tangency.max <= 1e-6, "{}", sol.report.primal_tangency.max);
        assert_eq!(sol.provenance.command, "pack");
    }

    #[test]
    fn pack_on_a_triangulation_matches_pdpack() {
        let inst = parse_instance(K4_TEXT).unwrap();
        let a = run_pdpack(&inst, &tight()).unwrap();
        let b = run_pack(&inst, &tight()).unwrap();
        assert_eq!(a.solution.primal, b.solution.primal);
        assert!(b.solution.dual.is_empty());
    }

    #[test]
    fn overlap_audit_runs_when_asked() {
        let inst = parse_instance(K4_TEXT).unwrap();
        let cfg = RunConfig { check_overlap: true, ..tight() };
        let out = run_pdpack(&inst, &cfg).unwrap();
        assert!(out.solution.report.overlap_checked);
        assert_eq!(out.solution.report.overlap_violations, 0);
    }
}

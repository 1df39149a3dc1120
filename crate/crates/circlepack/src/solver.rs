//! Damped Newton minimization of the packing potential.
//!
//! Two modes share one Newton engine. The plain mode minimizes the potential
//! directly from the all-zeros start and stops when the largest angle defect
//! over free vertices drops below the tolerance. The regularized mode adds a
//! cosh barrier of width `R` around a center point and estimates `R` by
//! minimizing coarsely over sup-norm balls of doubling radius until widening
//! stops paying, then re-centers with a narrow barrier and polishes to the
//! same angle-defect test. Steps are capped to the unit sup-norm ball, inside
//! which the Hessian's edge weights drift by a factor of at most e^2, so the
//! quadratic model stays trustworthy and Armijo backtracking rarely cuts.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::angle_graph::AngleGraph;
use crate::linsolve::{conjugate_gradient, preconditioned_cg, Cholesky};
use crate::objective::{gradient, hessian, max_angle_residual, phi, LogRadii, SparseSdd};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Plain,
    Regularized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinearSolver {
    /// Jacobi-preconditioned conjugate gradient, falling back to the sparse
    /// factorization when it stalls.
    PcgJacobi,
    SparseCholesky,
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub mode: Mode,
    /// Target for the largest angle defect, in radians. `None` picks
    /// `1e-9 * |V(H)|` capped at `1e-6`.
    pub tol: Option<f64>,
    /// Newton step budget per minimization run.
    pub max_iter: usize,
    pub linear_solver: LinearSolver,
    /// Fixed relative tolerance for the inner CG solves; `None` adapts it to
    /// the current defect so late steps are solved sharply.
    pub pcg_rel_tol: Option<f64>,
    /// Armijo backtracking factor, in (0, 1).
    pub backtrack_factor: f64,
    /// Armijo sufficient-decrease constant.
    pub sufficient_decrease: f64,
    /// First barrier width tried by the regularized mode.
    pub r_inf_initial: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            mode: Mode::Plain,
            tol: None,
            max_iter: 500,
            linear_solver: LinearSolver::PcgJacobi,
            pcg_rel_tol: None,
            backtrack_factor: 0.5,
            sufficient_decrease: 1e-4,
            r_inf_initial: 1.0,
        }
    }
}

pub fn default_tolerance(n_h_vertices: usize) -> f64 {
    (1e-9 * n_h_vertices as f64).min(1e-6)
}

/// What a minimization run did. `phi_trajectory` holds the potential at the
/// start and after each accepted step; in regularized mode the accepted
/// steps decrease the barrier-augmented objective, so the recorded potential
/// is monotone only within a phase.
#[derive(Debug, Clone, Default)]
pub struct SolveReport {
    pub converged: bool,
    pub outer_iterations: usize,
    pub pcg_iterations: usize,
    pub cholesky_solves: usize,
    pub pcg_fallbacks: usize,
    pub final_residual: f64,
    pub final_gradient_norm: f64,
    pub phi_trajectory: Vec<f64>,
    pub residual_trajectory: Vec<f64>,
    /// Barrier widths tried, in order; empty in plain mode.
    pub r_inf_history: Vec<f64>,
    /// Accepted barrier width.
    pub r_inf: Option<f64>,
    /// Potential-scale accuracy the barrier weight was derived from.
    pub epsilon_phi: Option<f64>,
    /// Barrier value at the returned point (how far the regularized
    /// objective sits above the potential there).
    pub regularizer_excess: Option<f64>,
    pub wall_time: f64,
    pub failure: Option<String>,
}

#[derive(Debug, Error)]
pub enum StepError {
    #[error("linear solve failed: {0}")]
    LinearSolve(String),
}

/// A Newton direction scaled into the trust region.
#[derive(Debug, Clone)]
pub struct NewtonStep {
    pub step: Vec<f64>,
    /// Decrease of the quadratic model along `step` (nonnegative).
    pub predicted_decrease: f64,
    pub pcg_iterations: usize,
    pub used_cholesky: bool,
}

/// Solves the Newton system at `x` and caps the direction to
/// `trust` in sup-norm.
pub fn newton_step(
    h: &AngleGraph,
    x: &LogRadii,
    cfg: &SolverConfig,
    trust: f64,
) -> Result<NewtonStep, StepError> {
    assert!(trust > 0.0 && trust <= 1.0, "trust radius must lie in (0, 1]");
    let g = gradient(h, x);
    let m = hessian(h, x);
    let mut stats = Stats::default();
    let eta = forcing_tolerance(cfg, inf_norm(&g));
    let d = solve_direction(&m, &g, eta, cfg, &mut stats)
        .map_err(StepError::LinearSolve)?;
    let dinf = inf_norm(&d);
    let scale = if dinf > trust { trust / dinf } else { 1.0 };
    let step: Vec<f64> = d.iter().map(|v| v * scale).collect();
    let mut hs = vec![0.0; m.n];
    m.apply(&step, &mut hs);
    let predicted_decrease = -(dot(&g, &step) + 0.5 * dot(&step, &hs));
    Ok(NewtonStep {
        step,
        predicted_decrease,
        pcg_iterations: stats.pcg_iterations,
        used_cholesky: stats.cholesky_solves > 0,
    })
}

/// Runs the configured mode from the all-zeros start.
pub fn solve_radii(h: &AngleGraph, cfg: &SolverConfig) -> (LogRadii, SolveReport) {
    match cfg.mode {
        Mode::Plain => minimize_plain(h, cfg),
        Mode::Regularized => minimize_regularized(h, cfg),
    }
}

pub fn minimize_plain(h: &AngleGraph, cfg: &SolverConfig) -> (LogRadii, SolveReport) {
    validate(cfg);
    let start = Instant::now();
    let tol = cfg.tol.unwrap_or_else(|| default_tolerance(h.n_vertices()));
    let mut stats = Stats::default();
    let mut x = LogRadii::zeros(h);
    let prob = Problem { h, barrier: None, box_radius: None };
    let outcome = minimize_inner(&prob, &mut x, Stop::PlainResidual(tol), cfg, &mut stats);
    let report = finish(h, &x, outcome, tol, stats, start, None);
    (x, report)
}

pub fn minimize_regularized(h: &AngleGraph, cfg: &SolverConfig) -> (LogRadii, SolveReport) {
    validate(cfg);
    let start = Instant::now();
    let tol = cfg.tol.unwrap_or_else(|| default_tolerance(h.n_vertices()));
    let n = h.n_vertices() as f64;
    let alpha = n.powi(-3);
    let max_degree =
        (0..h.n_vertices()).map(|v| h.graph.degree(v)).max().unwrap_or(1) as f64;
    // Potential-scale accuracy that certifies the angle target: a potential
    // gap of eps bounds the squared gradient norm by 2 L eps with
    // L <= 2 max_degree, so eps = tol^2 / max_degree suffices.
    let eps_phi = (tol * tol / max_degree).min(0.1 * alpha).max(1e-300);
    let ln_ratio = (alpha / eps_phi).ln().max(1.0);
    let eps1 = (alpha / (ln_ratio * ln_ratio)).max(1e-14);
    let c_test = alpha / 8.0;
    let weight = eps_phi / (4.0 * n);
    let n_free = h.n_free();

    let mut stats = Stats::default();
    let mut x = LogRadii::zeros(h);
    let zero_center = vec![0.0; n_free];

    // Width search: each coarse run minimizes the regularized potential
    // over the sup-norm ball of radius r, warm-starting from the previous
    // run; widen while the ball is visibly pinching the minimum, that is,
    // while doubling still improves the unregularized potential by more
    // than c_test. A roundoff floor keeps the comparison meaningful when
    // the potential itself is large.
    let mut r = cfg.r_inf_initial;
    stats.r_inf_history.push(r);
    let phase1 = |r: f64, x: &mut LogRadii, stats: &mut Stats| {
        let prob = Problem {
            h,
            barrier: Some(CoshBarrier { center: zero_center.clone(), width: r, weight }),
            box_radius: Some(r),
        };
        minimize_inner(&prob, x, Stop::Decrement(eps1), cfg, stats)
    };
    let mut outcome = phase1(r, &mut x, &mut stats);
    let mut phi_cur = phi(h, &x);
    let width_cap = 4.0 * n * (2.0 * n).ln() + 8.0;
    while outcome.is_ok() {
        let mut wide = x.clone();
        outcome = phase1(2.0 * r, &mut wide, &mut stats);
        if outcome.is_err() {
            break;
        }
        let phi_wide = phi(h, &wide);
        let threshold = c_test.max(1e-12 * (1.0 + phi_cur.abs()));
        if phi_cur - phi_wide > threshold && r < width_cap {
            r *= 2.0;
            stats.r_inf_history.push(r);
            x = wide;
            phi_cur = phi_wide;
        } else {
            if phi_wide < phi_cur {
                x = wide;
            }
            break;
        }
    }

    // Polish: narrow barrier centered on the coarse output, true angle
    // defect as the stop test.
    let mut excess = None;
    if outcome.is_ok() {
        let narrow = (1.0 / ln_ratio).min(r);
        let barrier =
            CoshBarrier { center: x.free().to_vec(), width: narrow, weight };
        let prob = Problem { h, barrier: Some(barrier), box_radius: None };
        outcome = minimize_inner(&prob, &mut x, Stop::TrueResidual(tol), cfg, &mut stats);
        excess = Some(prob.barrier.as_ref().unwrap().value(x.free()));
    }

    let mut report = finish(h, &x, outcome, tol, stats, start, Some((r, eps_phi)));
    report.regularizer_excess = excess;
    (x, report)
}

fn validate(cfg: &SolverConfig) {
    if let Some(t) = cfg.tol {
        assert!(t > 0.0, "tolerance must be positive");
    }
    assert!(
        cfg.backtrack_factor > 0.0 && cfg.backtrack_factor < 1.0,
        "backtracking factor must lie in (0, 1)"
    );
    assert!(cfg.sufficient_decrease > 0.0 && cfg.sufficient_decrease < 1.0);
    assert!(cfg.r_inf_initial > 0.0);
    if let Some(t) = cfg.pcg_rel_tol {
        assert!(t > 0.0);
    }
}

#[derive(Default)]
struct Stats {
    newton_iterations: usize,
    pcg_iterations: usize,
    cholesky_solves: usize,
    pcg_fallbacks: usize,
    // Last Cholesky factor computed on a fallback, reused as a PCG
    // preconditioner for later Newton systems.
    frozen: Option<Cholesky>,
    phi_trajectory: Vec<f64>,
    residual_trajectory: Vec<f64>,
    r_inf_history: Vec<f64>,
}

fn finish(
    h: &AngleGraph,
    x: &LogRadii,
    outcome: Result<bool, String>,
    tol: f64,
    stats: Stats,
    start: Instant,
    regularized: Option<(f64, f64)>,
) -> SolveReport {
    let g = gradient(h, x);
    let final_residual = max_angle_residual(h, x);
    let (converged, failure) = match outcome {
        Ok(true) => (true, None),
        Ok(false) => (false, None),
        Err(msg) => (false, Some(msg)),
    };
    SolveReport {
        converged: converged && final_residual <= tol,
        outer_iterations: stats.newton_iterations,
        pcg_iterations: stats.pcg_iterations,
        cholesky_solves: stats.cholesky_solves,
        pcg_fallbacks: stats.pcg_fallbacks,
        final_residual,
        final_gradient_norm: inf_norm(&g),
        phi_trajectory: stats.phi_trajectory,
        residual_trajectory: stats.residual_trajectory,
        r_inf_history: stats.r_inf_history,
        r_inf: regularized.map(|(r, _)| r),
        epsilon_phi: regularized.map(|(_, e)| e),
        regularizer_excess: None,
        wall_time: start.elapsed().as_secs_f64(),
        failure,
    }
}

/// Cosh well `weight * sum_i cosh((x_i - center_i) / width)`: negligible
/// near the center, a steep wall a few multiples of `width` out.
struct CoshBarrier {
    center: Vec<f64>,
    width: f64,
    weight: f64,
}

impl CoshBarrier {
    fn value(&self, xfree: &[f64]) -> f64 {
        let mut sum = 0.0f64;
        let mut comp = 0.0f64;
        for (xi, ci) in xfree.iter().zip(&self.center) {
            let t = self.weight * ((xi - ci) / self.width).cosh();
            let s = sum + t;
            comp += if sum.abs() >= t.abs() { (sum - s) + t } else { (t - s) + sum };
            sum = s;
        }
        sum + comp
    }

    fn add_gradient(&self, xfree: &[f64], g: &mut [f64]) {
        let scale = self.weight / self.width;
        for i in 0..xfree.len() {
            g[i] += scale * ((xfree[i] - self.center[i]) / self.width).sinh();
        }
    }

    fn add_hessian_diagonal(&self, xfree: &[f64], m: &mut SparseSdd) {
        let scale = self.weight / (self.width * self.width);
        for i in 0..xfree.len() {
            m.add_to_diagonal(i, scale * ((xfree[i] - self.center[i]) / self.width).cosh());
        }
    }
}

struct Problem<'a> {
    h: &'a AngleGraph,
    barrier: Option<CoshBarrier>,
    /// Hard sup-norm bound on the free coordinates, used by the width
    /// search: minimization is restricted to the ball `|x_i| <= r` by
    /// pinning wall coordinates whose gradient pushes outward.
    box_radius: Option<f64>,
}

impl Problem<'_> {
    /// Returns (potential, minimized objective) at `x`.
    fn value_parts(&self, x: &LogRadii) -> (f64, f64) {
        let p = phi(self.h, x);
        match &self.barrier {
            None => (p, p),
            Some(b) => (p, p + b.value(x.free())),
        }
    }

    fn gradient(&self, x: &LogRadii) -> Vec<f64> {
        let mut g = gradient(self.h, x);
        if let Some(b) = &self.barrier {
            b.add_gradient(x.free(), &mut g);
        }
        g
    }

    fn hessian(&self, x: &LogRadii) -> SparseSdd {
        let mut m = hessian(self.h, x);
        if let Some(b) = &self.barrier {
            b.add_hessian_diagonal(x.free(), &mut m);
        }
        m
    }
}

enum Stop {
    /// Angle defect read off the gradient; valid without a barrier.
    PlainResidual(f64),
    /// Angle defect recomputed from the bare potential's gradient.
    TrueResidual(f64),
    /// Newton decrement `-g.d / 2` below threshold.
    Decrement(f64),
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn inf_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0, |acc, v| acc.max(v.abs()))
}

fn forcing_tolerance(cfg: &SolverConfig, grad_inf: f64) -> f64 {
    // Linear forcing keeps the Newton tail quadratic: the inexactness
    // perturbs the next gradient by about eta times the current one.
    cfg.pcg_rel_tol.unwrap_or_else(|| (0.25 * grad_inf).clamp(1e-10, 0.1))
}

fn solve_direction(
    m: &SparseSdd,
    g: &[f64],
    eta: f64,
    cfg: &SolverConfig,
    stats: &mut Stats,
) -> Result<Vec<f64>, String> {
    let b: Vec<f64> = g.iter().map(|v| -v).collect();
    match cfg.linear_solver {
        LinearSolver::SparseCholesky => {
            let f = Cholesky::new(m).map_err(|e| e.to_string())?;
            stats.cholesky_solves += 1;
            Ok(f.solve(&b))
        }
        LinearSolver::PcgJacobi => {
            if let Some(f) = &stats.frozen {
                // A factor kept from an earlier fallback: backtracking
                // bounds how far the weights move per Newton step, so a
                // slightly stale factor still preconditions PCG down to
                // the forcing tolerance in a few iterations. Once drift
                // pushes a solve past the cap the factor is refreshed.
                let cap = 12;
                match preconditioned_cg(m, &b, eta, cap, &mut |r| f.solve(r)) {
                    Ok(sol) => {
                        stats.pcg_iterations += sol.iterations;
                        return Ok(sol.x);
                    }
                    Err(_) => stats.pcg_iterations += cap,
                }
            } else {
                // Diagonal scaling is enough while the iterate is far from
                // converged and the forcing tolerance is loose; the cap is
                // deliberately modest so that the tight end-game solves
                // trip the fallback instead of grinding.
                let cap = 100;
                match conjugate_gradient(m, &b, eta, cap) {
                    Ok(sol) => {
                        stats.pcg_iterations += sol.iterations;
                        return Ok(sol.x);
                    }
                    Err(_) => stats.pcg_iterations += cap,
                }
            }
            stats.pcg_fallbacks += 1;
            let f = Cholesky::new(m).map_err(|e| e.to_string())?;
            stats.cholesky_solves += 1;
            let x = f.solve(&b);
            stats.frozen = Some(f);
            Ok(x)
        }
    }
}

/// The Newton loop. Returns Ok(true) when the stop rule fired, Ok(false)
/// when the step budget ran out, Err on a hard failure.
fn minimize_inner(
    prob: &Problem,
    x: &mut LogRadii,
    stop: Stop,
    cfg: &SolverConfig,
    stats: &mut Stats,
) -> Result<bool, String> {
    use std::f64::consts::PI;
    let n = prob.h.n_free();
    let mut steps = 0;
    // Residual stops take one extra step after first crossing the target:
    // the quadratic tail turns that step into several digits, which the
    // downstream geometry needs because inverting angle residuals into
    // radii costs a conditioning factor.
    let mut polished = false;
    loop {
        let mut g = prob.gradient(x);
        // Coordinates pinned to the search-box wall with an outward
        // gradient leave the Newton system; the rest move freely.
        let wall = prob.box_radius.map(|r| {
            let xf = x.free();
            let mask: Vec<bool> = (0..n)
                .map(|i| (xf[i] >= r && g[i] < 0.0) || (xf[i] <= -r && g[i] > 0.0))
                .collect();
            for i in 0..n {
                if mask[i] {
                    g[i] = 0.0;
                }
            }
            mask
        });
        let grad_inf = inf_norm(&g);
        match stop {
            Stop::PlainResidual(tol) => {
                debug_assert!(prob.barrier.is_none());
                let res = grad_inf / 2.0;
                stats.residual_trajectory.push(res);
                if res <= tol {
                    if polished || res == 0.0 {
                        return Ok(true);
                    }
                    polished = true;
                }
            }
            Stop::TrueResidual(tol) => {
                let res = max_angle_residual(prob.h, x);
                stats.residual_trajectory.push(res);
                if res <= tol {
                    if polished || res == 0.0 {
                        return Ok(true);
                    }
                    polished = true;
                }
            }
            Stop::Decrement(_) => {}
        }
        if steps == cfg.max_iter {
            return Ok(false);
        }

        let eta = forcing_tolerance(cfg, grad_inf);
        let mut m = prob.hessian(x);
        if let Some(mask) = &wall {
            decouple_walls(&mut m, mask);
        }
        let mut d = solve_direction(&m, &g, eta, cfg, stats)?;
        let mut lambda2 = -dot(&g, &d);
        if let Stop::Decrement(threshold) = stop {
            if 0.5 * lambda2 <= threshold {
                return Ok(true);
            }
        }
        if lambda2 <= 0.0 {
            // An inexact solve can tip a near-zero direction past descent;
            // redo it exactly before giving up.
            let b: Vec<f64> = g.iter().map(|v| -v).collect();
            let f = Cholesky::new(&m).map_err(|e| e.to_string())?;
            stats.cholesky_solves += 1;
            d = f.solve(&b);
            lambda2 = -dot(&g, &d);
            if lambda2 <= 0.0 {
                return Err(format!(
                    "no descent direction at gradient norm {grad_inf:e}"
                ));
            }
        }

        // Unit sup-norm trust region.
        let dinf = inf_norm(&d);
        let scale = if dinf > 1.0 { 1.0 / dinf } else { 1.0 };
        let s: Vec<f64> = d.iter().map(|v| v * scale).collect();
        let mut hs = vec![0.0; n];
        m.apply(&s, &mut hs);
        let predicted = -(dot(&g, &s) + 0.5 * dot(&s, &hs));

        let (_, f0) = prob.value_parts(x);
        let gs = dot(&g, &s);
        let noise = 64.0 * f64::EPSILON * (1.0 + f0.abs());
        let c1 = cfg.sufficient_decrease;
        let mut accepted: Option<(f64, LogRadii, f64)> = None;
        let mut t = 1.0;
        if predicted <= noise {
            // Progress is below what the objective evaluation resolves;
            // take the full step on the model's word.
            let trial = stepped(x, &s, 1.0, prob.box_radius);
            let (p, f) = prob.value_parts(&trial);
            if f.is_finite() {
                accepted = Some((p, trial, f));
            }
        }
        if accepted.is_none() {
            for _ in 0..60 {
                let trial = stepped(x, &s, t, prob.box_radius);
                let (p, f) = prob.value_parts(&trial);
                if f <= f0 + c1 * t * gs + noise && f.is_finite() {
                    accepted = Some((p, trial, f));
                    break;
                }
                t *= cfg.backtrack_factor;
                if c1 * t * (-gs) <= noise {
                    let trial = stepped(x, &s, t, prob.box_radius);
                    let (p, f) = prob.value_parts(&trial);
                    if f.is_finite() {
                        accepted = Some((p, trial, f));
                        break;
                    }
                }
            }
        }
        let (p_new, x_new, f_new) = accepted.ok_or_else(|| {
            format!("line search failed at gradient norm {grad_inf:e}")
        })?;
        debug_assert!(
            f_new <= f0 + 64.0 * noise,
            "accepted step increased the objective: {f0} -> {f_new}"
        );
        debug_assert!(lambda2 <= 4.0 * PI * PI * (n as f64) * dinf.max(1.0));
        *x = x_new;
        stats.phi_trajectory.push(p_new);
        stats.newton_iterations += 1;
        steps += 1;
    }
}

fn stepped(x: &LogRadii, s: &[f64], t: f64, bound: Option<f64>) -> LogRadii {
    let mut y = x.clone();
    for (yi, si) in y.free_mut().iter_mut().zip(s) {
        *yi += t * si;
        if let Some(r) = bound {
            *yi = yi.clamp(-r, r);
        }
    }
    y
}

/// Zeroes the off-diagonal entries touching wall-pinned coordinates, so the
/// Newton solve moves only the interior ones. Dropping off-diagonals of an
/// SDD matrix keeps it SDD.
fn decouple_walls(m: &mut SparseSdd, mask: &[bool]) {
    for i in 0..m.n {
        for k in m.row_ptr[i]..m.row_ptr[i + 1] {
            let j = m.col[k];
            if i != j && (mask[i] || mask[j]) {
                m.val[k] = 0.0;
            }
        }
    }
}

//! Linear solvers for the Newton systems.
//!
//! The Hessian is symmetric positive definite and diagonally dominant, so
//! two interchangeable backends are offered: Jacobi-preconditioned conjugate
//! gradient (matrix-free apart from the CSR matvec, the default for large
//! instances) and a sparse LDL factorization with an approximate minimum
//! degree ordering (dense-ish robustness, used as a fallback when CG stalls).

use sprs::{CsMatViewI, PermOwnedI};
use sprs_ldl::LdlNumeric;
use thiserror::Error;

use crate::objective::SparseSdd;

#[derive(Debug, Error)]
pub enum LinsolveError {
    /// Conjugate gradient ran out of iterations before reaching the
    /// requested residual reduction.
    #[error("conjugate gradient stalled at relative residual {residual:e} after {iterations} iterations")]
    CgStalled { iterations: usize, residual: f64 },
    /// The matrix lost positive definiteness to roundoff.
    #[error("matrix is numerically indefinite: {0}")]
    Indefinite(String),
}

/// A conjugate gradient solve that reached its tolerance.
#[derive(Debug, Clone)]
pub struct CgSolve {
    pub x: Vec<f64>,
    pub iterations: usize,
    pub relative_residual: f64,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Jacobi-preconditioned conjugate gradient from the zero vector, stopping
/// when the residual two-norm drops below `rel_tol` times the right side's.
pub fn conjugate_gradient(
    m: &SparseSdd,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
) -> Result<CgSolve, LinsolveError> {
    let inv_diag: Vec<f64> = m.diagonal().iter().map(|&d| 1.0 / d).collect();
    if inv_diag.iter().any(|v| !v.is_finite() || *v <= 0.0) {
        return Err(LinsolveError::Indefinite("nonpositive diagonal entry".into()));
    }
    preconditioned_cg(m, b, rel_tol, max_iter, &mut |r| {
        r.iter().zip(&inv_diag).map(|(ri, di)| ri * di).collect()
    })
}

/// Conjugate gradient with a caller-supplied preconditioner application
/// `z = M^{-1} r`. The preconditioner must be symmetric positive definite.
pub fn preconditioned_cg(
    m: &SparseSdd,
    b: &[f64],
    rel_tol: f64,
    max_iter: usize,
    precondition: &mut dyn FnMut(&[f64]) -> Vec<f64>,
) -> Result<CgSolve, LinsolveError> {
    let n = m.n;
    debug_assert_eq!(b.len(), n);
    let b_norm = norm(b);
    if b_norm == 0.0 {
        return Ok(CgSolve { x: vec![0.0; n], iterations: 0, relative_residual: 0.0 });
    }
    let threshold = rel_tol * b_norm;
    let mut x = vec![0.0; n];
    let mut r = b.to_vec();
    let mut z = precondition(&r);
    let mut p = z.clone();
    let mut rz = dot(&r, &z);
    let mut q = vec![0.0; n];
    let mut best_residual = b_norm;
    for iter in 1..=max_iter {
        m.apply(&p, &mut q);
        let pq = dot(&p, &q);
        if pq <= 0.0 {
            return Err(LinsolveError::Indefinite(format!(
                "curvature {pq:e} along a search direction"
            )));
        }
        let alpha = rz / pq;
        for i in 0..n {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        let r_norm = norm(&r);
        best_residual = best_residual.min(r_norm);
        if r_norm <= threshold {
            return Ok(CgSolve {
                x,
                iterations: iter,
                relative_residual: r_norm / b_norm,
            });
        }
        z = precondition(&r);
        let rz_next = dot(&r, &z);
        let beta = rz_next / rz;
        rz = rz_next;
        for i in 0..n {
            p[i] = z[i] + beta * p[i];
        }
    }
    Err(LinsolveError::CgStalled { iterations: max_iter, residual: best_residual / b_norm })
}

/// Sparse LDL factorization with a fill-reducing ordering, reusable across
/// right sides.
pub struct Cholesky {
    factor: Factor,
}

// The sparse backend rejects systems of dimension below two, so those are
// solved by plain division.
enum Factor {
    Diagonal(Vec<f64>),
    Ldl(LdlNumeric<f64, usize>),
}

impl Cholesky {
    pub fn new(m: &SparseSdd) -> Result<Self, LinsolveError> {
        if m.n <= 1 {
            let diag = m.diagonal();
            if diag.iter().any(|&d| d <= 0.0 || !d.is_finite()) {
                return Err(LinsolveError::Indefinite("nonpositive pivot".into()));
            }
            return Ok(Cholesky { factor: Factor::Diagonal(diag) });
        }
        let view: CsMatViewI<f64, usize> =
            CsMatViewI::new((m.n, m.n), &m.row_ptr, &m.col, &m.val);
        let perm = match amd::order::<usize>(m.n, &m.row_ptr, &m.col, &amd::Control::default()) {
            Ok((p, _, _)) => PermOwnedI::new(p),
            Err(_) => PermOwnedI::identity(m.n),
        };
        let factor =
            LdlNumeric::new_perm(view, perm, sprs::SymmetryCheck::DontCheckSymmetry)
                .map_err(|e| LinsolveError::Indefinite(e.to_string()))?;
        if factor.d().iter().any(|&d| d <= 0.0 || !d.is_finite()) {
            return Err(LinsolveError::Indefinite("nonpositive pivot".into()));
        }
        Ok(Cholesky { factor: Factor::Ldl(factor) })
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        match &self.factor {
            Factor::Diagonal(d) => b.iter().zip(d).map(|(bi, di)| bi / di).collect(),
            Factor::Ldl(f) => f.solve(b),
        }
    }
}

//! Kernel SVM dual solver.
//!
//! The problem is `min_alpha alpha^T Q alpha / 2 - e^T alpha` subject to
//! `0 <= alpha_i <= C` and `y^T alpha = 0`, with `Q = K .* (y y^T)` for a
//! positive semidefinite kernel matrix `K`.
//!
//! Each iteration takes the gradient at the momentum point, projects it onto
//! the hyperplane, walks the exactly-minimizing step along it, restores
//! feasibility by alternating box and hyperplane projections, and (for the
//! RAPID rules) rescales by the dual line search
//! `theta = min(C / max_i alpha_i, e^T alpha / alpha^T Q alpha)`.
//! The `apg` rule pins `theta = 1` and uses the FISTA momentum instead, as
//! an ablation baseline.
//!
//! If an iteration would increase the objective the previously kept solution
//! stands (momentum still advances), so the reported objective never rises.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::{dot, spectral_norm_sq, DenseMatrix, DenseVector};
use crate::prox::{check_labels, project_box, project_hyperplane};
use crate::solver::{
    aux_update_rapid1, aux_update_rapid2, eta_next, fista_momentum, relative_change,
    IterationRecord, SolverState,
};

/// Validated dual problem data.
#[derive(Debug, Clone)]
pub struct SvmProblem {
    q: DenseMatrix,
    y: DenseVector,
    c: f64,
}

impl SvmProblem {
    /// Validate shapes, labels, the box bound, symmetry (within 1e-10
    /// relative to the largest entry), and positive semidefiniteness (the
    /// smallest eigenvalue, located by power iteration on the spectrum
    /// flipped around `||Q||`, must be at least `-1e-8 ||Q||`).
    pub fn new(q: DenseMatrix, y: DenseVector, c: f64) -> Result<Self> {
        if q.rows() != q.cols() {
            return Err(Error::Shape(format!(
                "kernel matrix is {}x{}, must be square",
                q.rows(),
                q.cols()
            )));
        }
        if y.len() != q.rows() {
            return Err(Error::Shape(format!(
                "{} labels against a {}x{} kernel matrix",
                y.len(),
                q.rows(),
                q.rows()
            )));
        }
        check_labels(&y)?;
        if !c.is_finite() || c < 0.0 {
            return Err(Error::BadArgument(format!(
                "box bound C = {c} must be finite and nonnegative"
            )));
        }
        let n = q.rows();
        let mut max_abs = 0.0_f64;
        let mut max_asym = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                max_abs = max_abs.max(q.get(i, j).abs());
                max_asym = max_asym.max((q.get(i, j) - q.get(j, i)).abs());
            }
        }
        if max_asym > 1e-10 * (1.0 + max_abs) {
            return Err(Error::BadArgument(format!(
                "kernel matrix is asymmetric by {max_asym:e}"
            )));
        }
        let min_eig = smallest_eigenvalue(&q);
        let scale = max_abs.max(1e-300);
        if min_eig < -1e-8 * scale {
            return Err(Error::BadArgument(format!(
                "kernel matrix is not positive semidefinite (min eigenvalue {min_eig:e})"
            )));
        }
        Ok(SvmProblem { q, y, c })
    }

    pub fn len(&self) -> usize {
        self.q.rows()
    }

    pub fn is_empty(&self) -> bool {
        false // construction rejects empty matrices
    }

    pub fn q(&self) -> &DenseMatrix {
        &self.q
    }

    pub fn labels(&self) -> &DenseVector {
        &self.y
    }

    pub fn box_bound(&self) -> f64 {
        self.c
    }
}

/// Smallest eigenvalue of a symmetric matrix: power iteration on
/// `s I - Q` with `s = ||Q||_2`, whose top eigenvalue is `s - min_eig`.
fn smallest_eigenvalue(q: &DenseMatrix) -> f64 {
    let s = spectral_norm_sq(q, 1e-10, 2000).value.sqrt();
    if s == 0.0 {
        return 0.0;
    }
    let n = q.rows();
    let mut b = DenseVector::new(vec![1.0 / (n as f64).sqrt(); n]);
    let mut mu = 0.0_f64;
    for _ in 0..2000 {
        let qb = q.matvec(&b).expect("square by construction");
        let mut w = b.clone();
        for (wi, &qi) in w.iter_mut().zip(qb.iter()) {
            *wi = s * *wi - qi;
        }
        let wn = w.norm();
        if wn == 0.0 {
            return 0.0; // Q = s I exactly on the explored space
        }
        let next = dot(&b, &w).expect("same length");
        for (bi, wi) in b.iter_mut().zip(w.iter()) {
            *bi = wi / wn;
        }
        let delta = (next - mu).abs();
        mu = next;
        if delta <= 1e-10 * mu.abs().max(1e-300) {
            break;
        }
    }
    s - mu
}

/// Dual objective `alpha^T Q alpha / 2 - e^T alpha`.
pub fn svm_objective(p: &SvmProblem, alpha: &DenseVector) -> Result<f64> {
    let qa = p.q.matvec(alpha)?;
    Ok(0.5 * dot(alpha, &qa)? - alpha.iter().sum::<f64>())
}

/// Gradient at `v` projected onto the hyperplane `y^T d = 0`:
/// `P(Qv - e)`.
pub fn projected_gradient_direction(p: &SvmProblem, v: &DenseVector) -> Result<DenseVector> {
    let mut g = p.q.matvec(v)?;
    for gi in g.iter_mut() {
        *gi -= 1.0;
    }
    project_hyperplane(&g, &p.y)
}

/// Exactly minimizing step along `-d` from `v`:
/// `gamma = (d^T Q v - e^T d) / (d^T Q d)`.
pub fn exact_step_size(p: &SvmProblem, v: &DenseVector, d: &DenseVector) -> Result<f64> {
    let qv = p.q.matvec(v)?;
    let qd = p.q.matvec(d)?;
    let denom = dot(d, &qd)?;
    if denom <= 1e-18 {
        return Err(Error::FlatDirection(denom));
    }
    Ok((dot(d, &qv)? - d.iter().sum::<f64>()) / denom)
}

/// Restore feasibility by alternating box and hyperplane projections, with
/// Dykstra's correction carried on the box term, until the box violation
/// after a hyperplane projection drops to `tol / 2`; then snap exactly into
/// the box. The correction makes the limit the metric projection onto the
/// polytope rather than an arbitrary feasible point, so the surrounding
/// gradient step keeps its fixed points at constrained optima. Plain
/// alternation (no correction) reaches the intersection too, but strands
/// small positive mass on coordinates that belong at zero, and the solver
/// then stalls short of optimality. The result has entries in `[0, C]`
/// exactly and `|y^T alpha| <= tol * N`.
pub fn alternate_project_feasible(
    alpha: &DenseVector,
    p: &SvmProblem,
    tol: f64,
    max_rounds: usize,
) -> Result<DenseVector> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::BadArgument(format!(
            "feasibility tolerance {tol} must be positive"
        )));
    }
    if max_rounds == 0 {
        return Err(Error::BadBudget("feasibility round budget is 0".to_string()));
    }
    let n = p.len() as f64;
    let mut w = alpha.clone();
    // The hyperplane is affine, so only the box needs an increment.
    let mut corr = DenseVector::zeros(alpha.len());
    let mut box_res = f64::INFINITY;
    for _ in 0..max_rounds {
        let mut shifted = w.clone();
        for (s, c) in shifted.iter_mut().zip(corr.iter()) {
            *s += c;
        }
        let clamped = project_box(&shifted, 0.0, p.c)?;
        for ((c, s), cl) in corr.iter_mut().zip(shifted.iter()).zip(clamped.iter()) {
            *c = s - cl;
        }
        w = project_hyperplane(&clamped, &p.y)?;
        box_res = w
            .iter()
            .fold(0.0_f64, |m, &x| m.max((-x).max(x - p.c).max(0.0)));
        if box_res <= 0.5 * tol {
            let snapped = project_box(&w, 0.0, p.c)?;
            let hyper_res = dot(&snapped, &p.y)?.abs();
            if hyper_res <= tol * n {
                return Ok(snapped);
            }
        }
    }
    Err(Error::FeasibilityStall {
        box_residual: box_res,
        hyperplane_residual: dot(&w, &p.y).unwrap_or(f64::NAN).abs(),
        rounds: max_rounds,
    })
}

/// Dual scaling line search
/// `theta = min(C / max_i alpha_i, e^T alpha / alpha^T Q alpha)` with the
/// degenerate cases pinned to safe values: a zero (or nonpositive) iterate
/// returns 1, and a vanishing curvature with positive mass falls back to the
/// box term alone.
pub fn svm_theta(p: &SvmProblem, alpha: &DenseVector) -> Result<f64> {
    let qa = p.q.matvec(alpha)?;
    let aqa = dot(alpha, &qa)?;
    let sum: f64 = alpha.iter().sum();
    let amax = alpha.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
    Ok(theta_from_parts(p.c, amax, sum, aqa))
}

fn theta_from_parts(c: f64, amax: f64, sum: f64, aqa: f64) -> f64 {
    if !(amax > 0.0) {
        return 1.0;
    }
    let box_term = c / amax;
    let theta = if aqa <= 1e-300 {
        if sum > 0.0 {
            box_term
        } else {
            return 1.0;
        }
    } else {
        box_term.min(sum / aqa)
    };
    if !theta.is_finite() || theta <= 0.0 {
        1.0
    } else {
        theta
    }
}

/// Update rule for the dual solver: the two RAPID variants, or the plain
/// accelerated baseline with `theta` pinned to 1 and FISTA momentum.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SvmRule {
    Apg,
    RapidI,
    RapidII,
}

impl SvmRule {
    pub fn name(&self) -> &'static str {
        match self {
            SvmRule::Apg => "apg",
            SvmRule::RapidI => "rapid1",
            SvmRule::RapidII => "rapid2",
        }
    }

    pub fn parse(s: &str) -> Result<SvmRule> {
        match s {
            "apg" => Ok(SvmRule::Apg),
            "rapid1" => Ok(SvmRule::RapidI),
            "rapid2" => Ok(SvmRule::RapidII),
            other => Err(Error::BadArgument(format!(
                "unknown svm rule '{other}' (expected apg, rapid1, or rapid2)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct SvmConfig {
    pub rule: SvmRule,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub feas_tol: f64,
    pub feas_max_rounds: usize,
    pub record_trace: bool,
}

impl SvmConfig {
    pub fn new(rule: SvmRule) -> Self {
        SvmConfig {
            rule,
            max_iter: 2000,
            rel_tol: 1e-7,
            feas_tol: 1e-10,
            feas_max_rounds: 10_000,
            record_trace: true,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SvmSolveResult {
    /// Scaled final solution `theta_T * x_T`.
    pub alpha: DenseVector,
    pub objective: f64,
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
    pub iterations: usize,
}

/// Run the dual solver from `alpha = 0`.
///
/// The momentum state always advances with the freshly produced iterates, and
/// the stopping rule watches the relative change between consecutive scaled
/// objectives, so the run ends once new iterates stop moving the value. For
/// the RAPID rules a candidate that would raise the objective is withheld
/// from the solution: the trace and the returned point keep the previous
/// (scaled) iterate, giving a non-increasing recorded objective, while the
/// auxiliary sequence continues unchanged underneath. The APG mode is the
/// plain FISTA trajectory on the same projections, recorded as-is.
pub fn solve_svm(p: &SvmProblem, cfg: &SvmConfig) -> Result<SvmSolveResult> {
    if cfg.max_iter == 0 {
        return Err(Error::BadBudget("max_iter is 0".to_string()));
    }
    if !(cfg.rel_tol > 0.0) || !cfg.rel_tol.is_finite() {
        return Err(Error::BadArgument(format!(
            "rel_tol {} must be a positive finite number",
            cfg.rel_tol
        )));
    }
    let start = Instant::now();
    let n = p.len();
    let mut x = DenseVector::zeros(n);
    let mut x_prev; // written by the first iteration before any read
    let mut v = DenseVector::zeros(n);
    let mut theta = 1.0_f64;
    let mut theta_prev;
    let mut eta_prev = 1.0_f64;
    // Kept solution: the best pair the guard has let through.
    let mut x_kept = DenseVector::zeros(n);
    let mut theta_kept = 1.0_f64;
    let mut f_kept = 0.0_f64; // objective at alpha = 0
    let mut f_kept_scaled = 0.0_f64;
    let mut f_stop_prev = 0.0_f64;

    let mut trace = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for t in 1..=cfg.max_iter {
        let mut g = p.q.matvec(&v)?;
        for gi in g.iter_mut() {
            *gi -= 1.0;
        }
        let d = project_hyperplane(&g, &p.y)?;
        if d.max_abs() <= 1e-14 * (1.0 + g.max_abs()) {
            // Gradient vanishes on the feasible subspace: stationary.
            converged = true;
            break;
        }
        let gamma = exact_step_size(p, &v, &d)?;
        let mut cand = v.clone();
        for (ci, di) in cand.iter_mut().zip(d.iter()) {
            *ci -= gamma * di;
        }
        let next = alternate_project_feasible(&cand, p, cfg.feas_tol, cfg.feas_max_rounds)?;

        let qa = p.q.matvec(&next)?;
        let aqa = dot(&next, &qa)?;
        let sum: f64 = next.iter().sum();
        let f_next = 0.5 * aqa - sum;
        let amax = next.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
        let mut cand_theta = match cfg.rule {
            SvmRule::Apg => 1.0,
            SvmRule::RapidI | SvmRule::RapidII => theta_from_parts(p.c, amax, sum, aqa),
        };
        let mut f_cand = 0.5 * cand_theta * cand_theta * aqa - cand_theta * sum;
        if f_cand > f_next {
            // Scaling must never hurt.
            cand_theta = 1.0;
            f_cand = f_next;
        }
        if !f_next.is_finite() || !f_cand.is_finite() {
            return Err(Error::Diverged(t));
        }
        let eta = eta_next(eta_prev)?;

        x_prev = std::mem::replace(&mut x, next);
        theta_prev = std::mem::replace(&mut theta, cand_theta);
        v = match cfg.rule {
            SvmRule::Apg => {
                let beta = fista_momentum(t);
                let mut vn = DenseVector::zeros(n);
                for i in 0..n {
                    vn[i] = x[i] + beta * (x[i] - x_prev[i]);
                }
                vn
            }
            rule => {
                let st = SolverState {
                    x: x.clone(),
                    x_prev: x_prev.clone(),
                    v: DenseVector::zeros(0),
                    theta,
                    theta_prev,
                    eta,
                    eta_prev,
                    t,
                    gamma,
                };
                if rule == SvmRule::RapidI {
                    aux_update_rapid1(&st)
                } else {
                    aux_update_rapid2(&st)
                }
            }
        };
        eta_prev = eta;
        iterations = t;

        // The guard filters what is recorded and returned; APG records the
        // trajectory as-is.
        if cfg.rule == SvmRule::Apg || f_cand <= f_kept_scaled {
            x_kept = x.clone();
            theta_kept = cand_theta;
            f_kept = f_next;
            f_kept_scaled = f_cand;
        }

        if cfg.record_trace {
            trace.push(IterationRecord {
                t,
                f_x: f_kept,
                f_theta_x: f_kept_scaled,
                theta: theta_kept,
                eta,
                gamma,
                elapsed_ns: u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX),
            });
        }

        if relative_change(f_stop_prev, f_cand) <= cfg.rel_tol {
            converged = true;
            break;
        }
        f_stop_prev = f_cand;
    }

    let alpha = DenseVector::new(x_kept.iter().map(|&xi| theta_kept * xi).collect());
    Ok(SvmSolveResult {
        alpha,
        objective: f_kept_scaled,
        trace,
        converged,
        iterations,
    })
}

/// Build the linear-kernel dual from an `n x d` feature matrix (rows are
/// points): `Q_ij = y_i y_j <x_i, x_j>`.
pub fn build_linear_kernel(x: &DenseMatrix, y: &DenseVector, c: f64) -> Result<SvmProblem> {
    if x.rows() != y.len() {
        return Err(Error::Shape(format!(
            "{} feature rows against {} labels",
            x.rows(),
            y.len()
        )));
    }
    let n = x.rows();
    // Transpose so each point is a contiguous column.
    let xt = x.transpose();
    let mut q = DenseMatrix::zeros(n, n)?;
    for i in 0..n {
        let xi = xt.col(i);
        for j in i..n {
            let k: f64 = xi.iter().zip(xt.col(j).iter()).map(|(a, b)| a * b).sum();
            let v = y[i] * y[j] * k;
            q.set(i, j, v);
            q.set(j, i, v); // exact symmetry by construction
        }
    }
    SvmProblem::new(q, y.clone(), c)
}

/// Primal weights and bias recovered from a linear-kernel dual solution:
/// `w = sum_i alpha_i y_i x_i`, `b` averaged over free support vectors
/// (falling back to all support vectors, then to 0).
pub fn linear_primal(
    x: &DenseMatrix,
    y: &DenseVector,
    alpha: &DenseVector,
    c: f64,
) -> Result<(DenseVector, f64)> {
    if x.rows() != y.len() || x.rows() != alpha.len() {
        return Err(Error::Shape(format!(
            "primal recovery: {} rows, {} labels, {} multipliers",
            x.rows(),
            y.len(),
            alpha.len()
        )));
    }
    let mut w = DenseVector::zeros(x.cols());
    for i in 0..x.rows() {
        let coef = alpha[i] * y[i];
        if coef == 0.0 {
            continue;
        }
        for cidx in 0..x.cols() {
            w[cidx] += coef * x.get(i, cidx);
        }
    }
    let margin = |i: usize| -> f64 {
        (0..x.cols()).map(|cidx| w[cidx] * x.get(i, cidx)).sum::<f64>()
    };
    let eps = 1e-8 * (1.0 + c);
    let mut sum_b = 0.0;
    let mut count = 0usize;
    for i in 0..x.rows() {
        if alpha[i] > eps && alpha[i] < c - eps {
            sum_b += y[i] - margin(i);
            count += 1;
        }
    }
    if count == 0 {
        for i in 0..x.rows() {
            if alpha[i] > eps {
                sum_b += y[i] - margin(i);
                count += 1;
            }
        }
    }
    let b = if count > 0 { sum_b / count as f64 } else { 0.0 };
    Ok((w, b))
}

/// Fraction of points with `sign(<w, x_i> + b) == y_i`.
pub fn classification_accuracy(
    x: &DenseMatrix,
    y: &DenseVector,
    w: &DenseVector,
    b: f64,
) -> Result<f64> {
    if x.rows() != y.len() || x.cols() != w.len() {
        return Err(Error::Shape(format!(
            "accuracy: features {}x{}, {} labels, {} weights",
            x.rows(),
            x.cols(),
            y.len(),
            w.len()
        )));
    }
    let mut hits = 0usize;
    for i in 0..x.rows() {
        let score: f64 = (0..x.cols()).map(|c| w[c] * x.get(i, c)).sum::<f64>() + b;
        let pred = if score >= 0.0 { 1.0 } else { -1.0 };
        if pred == y[i] {
            hits += 1;
        }
    }
    Ok(hits as f64 / x.rows() as f64)
}

//! Accelerated proximal gradient solvers for composite objectives
//! `f(x) = f1(x) + f2(x)` with `f1` smooth (Lipschitz gradient) and `f2`
//! prox-friendly.
//!
//! Three update rules share one loop:
//!
//! * `Fista`: classical momentum `v = x_t + (t-1)/(t+2) * (x_t - x_{t-1})`,
//!   no iterate scaling.
//! * `RapidI` / `RapidII`: after each proximal gradient step the iterate is
//!   rescaled by a scalar line search `theta = argmin f(theta * x)`, and the
//!   momentum point blends the raw and scaled iterates through the `eta`
//!   recurrence. The two variants differ only in how the momentum point
//!   weighs the raw iterate against the scaled one.
//!
//! The solver records one [`IterationRecord`] per iteration and stops when
//! the relative objective change drops below `rel_tol`.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::{axpy, norm2_sq, scale, DenseVector};

pub type ValueFn = Box<dyn Fn(&DenseVector) -> Result<f64> + Send + Sync>;
pub type GradFn = Box<dyn Fn(&DenseVector) -> Result<DenseVector> + Send + Sync>;
pub type ProxFn = Box<dyn Fn(&DenseVector, f64) -> Result<DenseVector> + Send + Sync>;
pub type ThetaFn = Box<dyn Fn(&DenseVector) -> Result<f64> + Send + Sync>;

/// A composite problem in the form the solver consumes: callbacks for the
/// smooth part, the nonsmooth part and its proximal map, an optional closed
/// form for the scaling line search, the gradient Lipschitz constant, and the
/// variable dimension.
///
/// The proximal callback receives the current step size `gamma` and must
/// apply its own regularization weight (so `prox(u, 0) == u`).
pub struct ProblemSpec {
    f1_value: ValueFn,
    f1_grad: GradFn,
    f2_value: ValueFn,
    prox_f2: ProxFn,
    theta_search: Option<ThetaFn>,
    lipschitz: f64,
    dim: usize,
}

impl ProblemSpec {
    pub fn new(
        dim: usize,
        lipschitz: f64,
        f1_value: ValueFn,
        f1_grad: GradFn,
        f2_value: ValueFn,
        prox_f2: ProxFn,
    ) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyData("problem dimension 0".to_string()));
        }
        if !lipschitz.is_finite() || lipschitz < 0.0 {
            return Err(Error::BadArgument(format!(
                "lipschitz constant {lipschitz} must be finite and nonnegative"
            )));
        }
        Ok(ProblemSpec {
            f1_value,
            f1_grad,
            f2_value,
            prox_f2,
            theta_search: None,
            lipschitz,
            dim,
        })
    }

    /// Attach a closed-form scaling line search `x -> argmin_theta f(theta x)`.
    pub fn with_theta_search(mut self, theta: ThetaFn) -> Self {
        self.theta_search = Some(theta);
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn lipschitz(&self) -> f64 {
        self.lipschitz
    }

    pub fn has_theta_search(&self) -> bool {
        self.theta_search.is_some()
    }

    pub fn f1(&self, x: &DenseVector) -> Result<f64> {
        (self.f1_value)(x)
    }

    pub fn grad_f1(&self, x: &DenseVector) -> Result<DenseVector> {
        (self.f1_grad)(x)
    }

    pub fn f2(&self, x: &DenseVector) -> Result<f64> {
        (self.f2_value)(x)
    }

    /// Full objective `f1 + f2`.
    pub fn objective(&self, x: &DenseVector) -> Result<f64> {
        Ok(self.f1(x)? + self.f2(x)?)
    }

    /// Proximal map of `gamma * f2` (the callback owns the regularization
    /// weight).
    pub fn prox(&self, u: &DenseVector, gamma: f64) -> Result<DenseVector> {
        (self.prox_f2)(u, gamma)
    }

    fn theta_closed_form(&self, x: &DenseVector) -> Option<Result<f64>> {
        self.theta_search.as_ref().map(|f| f(x))
    }
}

/// Update rule selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rule {
    Fista,
    RapidI,
    RapidII,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::Fista => "fista",
            Rule::RapidI => "rapid1",
            Rule::RapidII => "rapid2",
        }
    }

    pub fn parse(s: &str) -> Result<Rule> {
        match s {
            "fista" => Ok(Rule::Fista),
            "rapid1" => Ok(Rule::RapidI),
            "rapid2" => Ok(Rule::RapidII),
            other => Err(Error::BadArgument(format!(
                "unknown rule '{other}' (expected fista, rapid1, or rapid2)"
            ))),
        }
    }
}

/// Step size policy for the gradient step.
#[derive(Debug, Clone, Copy)]
pub enum StepPolicy {
    /// Constant `gamma = 1 / L`.
    FixedInverseL,
    /// Start from the previous step and halve (by `shrink`) until the local
    /// upper bound holds. The step never grows back.
    Backtracking { shrink: f64 },
}

/// Solver configuration.
#[derive(Debug, Clone, Copy)]
pub struct SolverConfig {
    pub rule: Rule,
    pub max_iter: usize,
    pub rel_tol: f64,
    pub step: StepPolicy,
    pub record_trace: bool,
}

impl SolverConfig {
    pub fn new(rule: Rule) -> Self {
        SolverConfig {
            rule,
            max_iter: 1000,
            rel_tol: 1e-7,
            step: StepPolicy::FixedInverseL,
            record_trace: true,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.max_iter == 0 {
            return Err(Error::BadBudget("max_iter is 0".to_string()));
        }
        if !(self.rel_tol > 0.0) || !self.rel_tol.is_finite() {
            return Err(Error::BadArgument(format!(
                "rel_tol {} must be a positive finite number",
                self.rel_tol
            )));
        }
        if let StepPolicy::Backtracking { shrink } = self.step {
            if !(shrink > 0.0 && shrink < 1.0) {
                return Err(Error::BadArgument(format!(
                    "backtracking shrink {shrink} must lie in (0, 1)"
                )));
            }
        }
        Ok(())
    }
}

/// One row of the convergence trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationRecord {
    /// 1-based iteration counter.
    pub t: usize,
    /// Objective at the raw iterate `x_t`.
    pub f_x: f64,
    /// Objective at the scaled iterate `theta_t * x_t` (equals `f_x` when no
    /// scaling ran).
    pub f_theta_x: f64,
    pub theta: f64,
    pub eta: f64,
    pub gamma: f64,
    /// Wall-clock nanoseconds since the solve started.
    pub elapsed_ns: u64,
}

/// Mutable iteration state, exposed so the auxiliary updates can be tested
/// in isolation.
#[derive(Debug, Clone)]
pub struct SolverState {
    pub x: DenseVector,
    pub x_prev: DenseVector,
    pub v: DenseVector,
    pub theta: f64,
    pub theta_prev: f64,
    pub eta: f64,
    pub eta_prev: f64,
    pub t: usize,
    pub gamma: f64,
}

/// Outcome of [`solve`]: the final point (scaled for the RAPID rules), the
/// per-iteration trace, and diagnostics.
#[derive(Debug, Clone)]
pub struct SolveResult {
    /// `x_T` for FISTA, `theta_T * x_T` for the RAPID rules.
    pub point: DenseVector,
    pub trace: Vec<IterationRecord>,
    /// True when the relative-change stopping rule fired before `max_iter`.
    pub converged: bool,
    pub iterations: usize,
    /// Per-iteration `||x_t - theta_t x_t||^2 / eta_{t-1}^2`: the mass a
    /// tighter rate bound may subtract. The auditor reports its sum as a
    /// diagnostic; the pass/fail bound ignores it.
    pub rate_diagnostic_terms: Vec<f64>,
}

/// Relative objective change `1 - min(|a|, |b|) / max(|a|, |b|)`.
///
/// Both magnitudes under `1e-15` count as converged outright, so a flat zero
/// objective cannot divide by zero or spin forever.
pub fn relative_change(a: f64, b: f64) -> f64 {
    let (lo, hi) = if a.abs() <= b.abs() {
        (a.abs(), b.abs())
    } else {
        (b.abs(), a.abs())
    };
    if hi < 1e-15 {
        return 0.0;
    }
    1.0 - lo / hi
}

/// Next value of the momentum sequence:
/// `eta_t = (sqrt(eta^4 + 4 eta^2) - eta^2) / 2` for `eta = eta_{t-1}`.
///
/// Maintains `(1 - eta_t) / eta_t^2 = 1 / eta_{t-1}^2` exactly in real
/// arithmetic and `eta_t <= 2 / (t + 2)` along the sequence started at 1.
pub fn eta_next(eta_prev: f64) -> Result<f64> {
    if !(eta_prev > 0.0 && eta_prev <= 1.0) || !eta_prev.is_finite() {
        return Err(Error::BadEta(eta_prev));
    }
    // Factored form of (sqrt(eta^4 + 4 eta^2) - eta^2) / 2.
    Ok(eta_prev * ((eta_prev * eta_prev + 4.0).sqrt() - eta_prev) / 2.0)
}

/// FISTA momentum coefficient `(t - 1) / (t + 2)` for the 1-based iteration
/// counter.
pub fn fista_momentum(t: usize) -> f64 {
    (t as f64 - 1.0) / (t as f64 + 2.0)
}

/// One proximal gradient step from `v` with step size `gamma`:
/// `prox_{gamma f2}(v - gamma * grad f1(v))`.
pub fn proximal_gradient_step(p: &ProblemSpec, v: &DenseVector, gamma: f64) -> Result<DenseVector> {
    if v.len() != p.dim() {
        return Err(Error::Shape(format!(
            "gradient step: point length {} against problem dimension {}",
            v.len(),
            p.dim()
        )));
    }
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(Error::BadArgument(format!(
            "step size {gamma} must be positive and finite"
        )));
    }
    let g = p.grad_f1(v)?;
    let mut u = v.clone();
    axpy(-gamma, &g, &mut u)?;
    p.prox(&u, gamma)
}

const BACKTRACK_MAX_HALVINGS: usize = 60;

/// Shrink `gamma0` until the quadratic upper bound
/// `f1(x) <= f1(v) + <grad f1(v), x - v> + ||x - v||^2 / (2 gamma)`
/// holds at the resulting proximal step. Returns the accepted step size.
pub fn backtracking_gamma(p: &ProblemSpec, v: &DenseVector, gamma0: f64, shrink: f64) -> Result<f64> {
    backtrack(p, v, gamma0, shrink).map(|(gamma, _)| gamma)
}

fn backtrack(
    p: &ProblemSpec,
    v: &DenseVector,
    gamma0: f64,
    shrink: f64,
) -> Result<(f64, DenseVector)> {
    if !(gamma0 > 0.0) || !gamma0.is_finite() {
        return Err(Error::BadArgument(format!(
            "initial step {gamma0} must be positive and finite"
        )));
    }
    if !(shrink > 0.0 && shrink < 1.0) {
        return Err(Error::BadArgument(format!(
            "shrink {shrink} must lie in (0, 1)"
        )));
    }
    let f1v = p.f1(v)?;
    let g = p.grad_f1(v)?;
    let mut gamma = gamma0;
    for _ in 0..=BACKTRACK_MAX_HALVINGS {
        let mut u = v.clone();
        axpy(-gamma, &g, &mut u)?;
        let x = p.prox(&u, gamma)?;
        let f1x = p.f1(&x)?;
        let mut diff = x.clone();
        axpy(-1.0, v, &mut diff)?;
        let linear: f64 = g.iter().zip(diff.iter()).map(|(a, b)| a * b).sum();
        let quad = norm2_sq(&diff) / (2.0 * gamma);
        // Tiny slack so an exactly tight bound (gamma = 1/L on a quadratic)
        // is accepted despite rounding.
        if f1x <= f1v + linear + quad + 1e-12 * (1.0 + f1x.abs()) {
            return Ok((gamma, x));
        }
        gamma *= shrink;
    }
    Err(Error::StepUnderflow(gamma))
}

/// Scaling line search with safeguards: evaluates the problem's closed form
/// and falls back to `theta = 1` whenever the closed form is missing, the
/// candidate is nonpositive or non-finite, the iterate is zero, or the scaled
/// objective fails to improve on the raw one.
pub fn theta_line_search(p: &ProblemSpec, x: &DenseVector) -> Result<f64> {
    let f_x = p.objective(x)?;
    Ok(theta_step(p, x, f_x)?.0)
}

/// Returns `(theta, f(theta x))`, reusing a precomputed `f(x)`.
fn theta_step(p: &ProblemSpec, x: &DenseVector, f_x: f64) -> Result<(f64, f64)> {
    if x.iter().all(|&xi| xi == 0.0) {
        return Ok((1.0, f_x));
    }
    let raw = match p.theta_closed_form(x) {
        None => return Ok((1.0, f_x)),
        Some(r) => r?,
    };
    if !raw.is_finite() || raw <= 0.0 || raw == 1.0 {
        return Ok((1.0, f_x));
    }
    let mut scaled = x.clone();
    scale(raw, &mut scaled);
    let f_theta = p.objective(&scaled)?;
    if f_theta > f_x {
        // Numerical noise in the closed form: scaling must never hurt.
        return Ok((1.0, f_x));
    }
    Ok((raw, f_theta))
}

/// RAPID-I momentum point:
/// `v = eta_t (1 - 1/eta_{t-1}) theta_{t-1} x_{t-1}
///    + (eta_t / eta_{t-1}) x_t + (1 - eta_t) theta_t x_t`.
pub fn aux_update_rapid1(st: &SolverState) -> DenseVector {
    let c_prev = st.eta * (1.0 - 1.0 / st.eta_prev) * st.theta_prev;
    let c_cur = st.eta / st.eta_prev + (1.0 - st.eta) * st.theta;
    combine(c_prev, &st.x_prev, c_cur, &st.x)
}

/// RAPID-II momentum point:
/// `v = eta_t (1 - 1/eta_{t-1}) theta_{t-1} x_{t-1}
///    + (1 - eta_t + eta_t/eta_{t-1}) theta_t x_t`.
pub fn aux_update_rapid2(st: &SolverState) -> DenseVector {
    let c_prev = st.eta * (1.0 - 1.0 / st.eta_prev) * st.theta_prev;
    let c_cur = (1.0 - st.eta + st.eta / st.eta_prev) * st.theta;
    combine(c_prev, &st.x_prev, c_cur, &st.x)
}

fn combine(a: f64, x: &DenseVector, b: f64, y: &DenseVector) -> DenseVector {
    debug_assert_eq!(x.len(), y.len());
    DenseVector::new(
        x.iter()
            .zip(y.iter())
            .map(|(&xi, &yi)| a * xi + b * yi)
            .collect(),
    )
}

/// Run the configured rule from `x0`.
///
/// Stops when `relative_change(f_prev, f_cur) <= rel_tol`, where the
/// objective is taken at the scaled iterate for the RAPID rules and at the
/// raw iterate for FISTA, or when `max_iter` is exhausted. Non-finite
/// objectives abort with `diverged`.
pub fn solve(p: &ProblemSpec, cfg: &SolverConfig, x0: &DenseVector) -> Result<SolveResult> {
    cfg.validate()?;
    if x0.len() != p.dim() {
        return Err(Error::Shape(format!(
            "solve: start point length {} against problem dimension {}",
            x0.len(),
            p.dim()
        )));
    }
    let start = Instant::now();
    let init_gamma = if p.lipschitz() > 0.0 {
        1.0 / p.lipschitz()
    } else {
        // Linear or constant smooth part: any step is a descent step.
        1.0
    };
    let mut st = SolverState {
        x: x0.clone(),
        x_prev: x0.clone(),
        v: x0.clone(),
        theta: 1.0,
        theta_prev: 1.0,
        eta: 1.0,
        eta_prev: 1.0,
        t: 0,
        gamma: init_gamma,
    };
    let mut f_stop_prev = p.objective(x0)?;
    if !f_stop_prev.is_finite() {
        return Err(Error::Diverged(0));
    }

    let mut trace = Vec::new();
    let mut rate_terms = Vec::new();
    let mut converged = false;
    let mut iterations = 0;

    for t in 1..=cfg.max_iter {
        st.t = t;
        if cfg.rule == Rule::Fista {
            // v_t = x_t + (t-1)/(t+2) (x_t - x_{t-1})
            let beta = fista_momentum(t);
            st.v = combine(-beta, &st.x_prev, 1.0 + beta, &st.x);
        }

        let (gamma, x_new) = match cfg.step {
            StepPolicy::FixedInverseL => (st.gamma, proximal_gradient_step(p, &st.v, st.gamma)?),
            StepPolicy::Backtracking { shrink } => backtrack(p, &st.v, st.gamma, shrink)?,
        };

        let f_x = p.objective(&x_new)?;
        let (theta, f_theta) = match cfg.rule {
            Rule::Fista => (1.0, f_x),
            Rule::RapidI | Rule::RapidII => theta_step(p, &x_new, f_x)?,
        };
        if !f_x.is_finite() || !f_theta.is_finite() {
            return Err(Error::Diverged(t));
        }
        let eta = eta_next(st.eta)?;

        st.x_prev = std::mem::replace(&mut st.x, x_new);
        st.theta_prev = std::mem::replace(&mut st.theta, theta);
        st.eta_prev = std::mem::replace(&mut st.eta, eta);
        st.gamma = gamma;

        match cfg.rule {
            Rule::Fista => {} // recomputed from x, x_prev at the top of the next pass
            Rule::RapidI => st.v = aux_update_rapid1(&st),
            Rule::RapidII => st.v = aux_update_rapid2(&st),
        }

        // ||x_t - theta_t x_t||^2 / eta_{t-1}^2
        rate_terms.push((1.0 - theta) * (1.0 - theta) * norm2_sq(&st.x) / (st.eta_prev * st.eta_prev));
        iterations = t;
        if cfg.record_trace {
            trace.push(IterationRecord {
                t,
                f_x,
                f_theta_x: f_theta,
                theta,
                eta,
                gamma,
                elapsed_ns: saturating_ns(start),
            });
        }

        let f_cur = f_theta;
        if relative_change(f_stop_prev, f_cur) <= cfg.rel_tol {
            converged = true;
            break;
        }
        f_stop_prev = f_cur;
    }

    let mut point = st.x.clone();
    if cfg.rule != Rule::Fista {
        scale(st.theta, &mut point);
    }
    Ok(SolveResult {
        point,
        trace,
        converged,
        iterations,
        rate_diagnostic_terms: rate_terms,
    })
}

fn saturating_ns(start: Instant) -> u64 {
    u64::try_from(start.elapsed().as_nanos()).unwrap_or(u64::MAX)
}

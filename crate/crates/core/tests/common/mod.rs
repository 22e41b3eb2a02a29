// Shared oracles for the integration suites. Everything here recomputes
// answers by some route the library does not take: finite differences,
// grid search, closed-form 2x2 eigenvalues, KKT sign conditions.

#![allow(dead_code)]

use rapid_core::data_io::{generate_classification, generate_regression, SyntheticSpec};
use rapid_core::problems::{build_group_lasso, build_lasso, build_trace_norm, RegressionData};
use rapid_core::problems::default_lambda;
use rapid_core::prox::GroupPartition;
use rapid_core::svm::SvmProblem;
use rapid_core::{DenseMatrix, DenseVector, ProblemSpec};

/// Worst relative disagreement between the analytic gradient of `f1` and a
/// central difference, measured as `||g - fd||_2 / (1 + ||g||_2)`.
pub fn gradient_fd_error(p: &ProblemSpec, x: &DenseVector) -> f64 {
    let g = p.grad_f1(x).expect("analytic gradient");
    let base = x.as_slice();
    let mut diff_sq = 0.0_f64;
    for i in 0..p.dim() {
        let h = 1e-5 * (1.0 + base[i].abs());
        let mut hi = base.to_vec();
        let mut lo = base.to_vec();
        hi[i] += h;
        lo[i] -= h;
        let fh = p.f1(&DenseVector::new(hi)).expect("f1 at x + h");
        let fl = p.f1(&DenseVector::new(lo)).expect("f1 at x - h");
        let fd = (fh - fl) / (2.0 * h);
        let d = g.as_slice()[i] - fd;
        diff_sq += d * d;
    }
    diff_sq.sqrt() / (1.0 + g.norm())
}

/// Multilevel grid search for `min f` over a box around `center`. Each round
/// lays `per_dim` points per axis across `[c - r, c + r]`, recenters on the
/// best point seen, and halves the radius. Returns the best value found.
///
/// One-sided by design: if `f(center)` already is the minimum, no grid point
/// can beat it, so callers assert `grid_minimize(..) >= f(candidate) - tol`.
pub fn grid_minimize(
    f: &dyn Fn(&[f64]) -> f64,
    center: &[f64],
    radius: f64,
    per_dim: usize,
    rounds: usize,
) -> f64 {
    assert!(per_dim >= 3, "need at least 3 grid points per axis");
    let d = center.len();
    let mut best = center.to_vec();
    let mut best_f = f(&best);
    let mut c = center.to_vec();
    let mut r = radius;
    for _ in 0..rounds {
        let mut idx = vec![0usize; d];
        loop {
            let mut pt = vec![0.0; d];
            for (k, p) in pt.iter_mut().enumerate() {
                let frac = idx[k] as f64 / (per_dim - 1) as f64;
                *p = c[k] - r + 2.0 * r * frac;
            }
            let v = f(&pt);
            if v < best_f {
                best_f = v;
                best = pt;
            }
            // odometer over the d-dimensional grid
            let mut k = 0;
            while k < d {
                idx[k] += 1;
                if idx[k] < per_dim {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == d {
                break;
            }
        }
        c.copy_from_slice(&best);
        r *= 0.5;
    }
    best_f
}

/// Nuclear norm of a small matrix without calling the library SVD. The Gram
/// matrix of the thinner side is at most 2x2 here, so its eigenvalues come
/// from the quadratic formula and the singular values are their roots.
pub fn nuclear_norm_small(rows: usize, cols: usize, a: &[f64]) -> f64 {
    assert_eq!(a.len(), rows * cols, "column-major data length");
    let at = |r: usize, c: usize| a[c * rows + r];
    let n = rows.min(cols);
    assert!(n <= 2, "oracle handles Gram sizes up to 2x2");
    if n == 1 {
        return a.iter().map(|v| v * v).sum::<f64>().sqrt();
    }
    // Gram of the thinner side: g = M^T M with M the matrix or its transpose.
    let (mut g00, mut g01, mut g11) = (0.0_f64, 0.0_f64, 0.0_f64);
    if cols <= rows {
        for r in 0..rows {
            g00 += at(r, 0) * at(r, 0);
            g01 += at(r, 0) * at(r, 1);
            g11 += at(r, 1) * at(r, 1);
        }
    } else {
        for c in 0..cols {
            g00 += at(0, c) * at(0, c);
            g01 += at(0, c) * at(1, c);
            g11 += at(1, c) * at(1, c);
        }
    }
    let mean = 0.5 * (g00 + g11);
    let disc = (0.25 * (g00 - g11) * (g00 - g11) + g01 * g01).sqrt();
    let l1 = (mean + disc).max(0.0);
    let l2 = (mean - disc).max(0.0);
    l1.sqrt() + l2.sqrt()
}

/// Brute-force minimum of the dual objective `0.5 a'Qa - e'a` over
/// `{0 <= a <= C, y'a = 0}` for problems with at most 3 points. Grids the
/// first n-1 coordinates, solves the last from the equality constraint, and
/// refines around the best feasible point.
pub fn svm_brute_force(p: &SvmProblem, per_dim: usize, rounds: usize) -> f64 {
    let n = p.len();
    assert!(n <= 3, "brute force is exponential in n");
    let q = p.q();
    let y = p.labels().as_slice();
    let c = p.box_bound();
    let objective = |a: &[f64]| {
        let mut quad = 0.0;
        let mut lin = 0.0;
        for i in 0..n {
            lin += a[i];
            for j in 0..n {
                quad += a[i] * q.get(i, j) * a[j];
            }
        }
        0.5 * quad - lin
    };
    if n == 1 {
        return 0.0; // y1 a1 = 0 forces a1 = 0
    }
    let m = n - 1;
    let mut center = vec![0.5 * c; m];
    let mut radius = 0.5 * c;
    let mut best_f = f64::INFINITY;
    let mut best = vec![0.0; m];
    for _ in 0..rounds {
        let mut idx = vec![0usize; m];
        loop {
            let mut a = vec![0.0; n];
            let mut feasible = true;
            let mut partial = 0.0;
            for k in 0..m {
                let frac = idx[k] as f64 / (per_dim - 1) as f64;
                let v = (center[k] - radius + 2.0 * radius * frac).clamp(0.0, c);
                a[k] = v;
                partial += y[k] * v;
            }
            let last = -partial / y[m];
            if (0.0..=c).contains(&last) {
                a[m] = last;
            } else {
                feasible = false;
            }
            if feasible {
                let v = objective(&a);
                if v < best_f {
                    best_f = v;
                    best = a[..m].to_vec();
                }
            }
            let mut k = 0;
            while k < m {
                idx[k] += 1;
                if idx[k] < per_dim {
                    break;
                }
                idx[k] = 0;
                k += 1;
            }
            if k == m {
                break;
            }
        }
        if best_f.is_finite() {
            center.copy_from_slice(&best);
        }
        radius *= 0.3;
    }
    // alpha = 0 is always feasible; the polytope grid can miss it only
    // through the clamp, so fold it in explicitly.
    best_f.min(0.0)
}

/// Worst complementary-slackness violation of the dual KKT system at
/// `alpha`. With `g = Q alpha - e` and bias `b`, optimality requires
/// `g_i + b y_i` to vanish on free coordinates, be nonnegative at the lower
/// bound, and nonpositive at the upper. The bias comes from averaging over
/// free support vectors when any exist, otherwise from the midpoint of the
/// interval the bound coordinates admit.
pub fn kkt_residual(p: &SvmProblem, alpha: &DenseVector, sv_tol: f64) -> f64 {
    let n = p.len();
    let q = p.q();
    let y = p.labels().as_slice();
    let c = p.box_bound();
    let a = alpha.as_slice();
    let mut g = vec![0.0_f64; n];
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            s += q.get(i, j) * a[j];
        }
        g[i] = s - 1.0;
    }
    let mut free_sum = 0.0;
    let mut free_count = 0usize;
    let mut b_lo = f64::NEG_INFINITY;
    let mut b_hi = f64::INFINITY;
    for i in 0..n {
        if a[i] > sv_tol && a[i] < c - sv_tol {
            free_sum += -g[i] * y[i];
            free_count += 1;
        } else if a[i] <= sv_tol {
            // need g_i + b y_i >= 0
            if y[i] > 0.0 {
                b_lo = b_lo.max(-g[i]);
            } else {
                b_hi = b_hi.min(g[i]);
            }
        } else {
            // at the upper bound: need g_i + b y_i <= 0
            if y[i] > 0.0 {
                b_hi = b_hi.min(-g[i]);
            } else {
                b_lo = b_lo.max(g[i]);
            }
        }
    }
    let b = if free_count > 0 {
        free_sum / free_count as f64
    } else if b_lo.is_finite() && b_hi.is_finite() {
        0.5 * (b_lo + b_hi)
    } else if b_lo.is_finite() {
        b_lo
    } else if b_hi.is_finite() {
        b_hi
    } else {
        0.0
    };
    let mut worst = 0.0_f64;
    for i in 0..n {
        let r = g[i] + b * y[i];
        let viol = if a[i] > sv_tol && a[i] < c - sv_tol {
            r.abs()
        } else if a[i] <= sv_tol {
            (-r).max(0.0)
        } else {
            r.max(0.0)
        };
        worst = worst.max(viol);
    }
    worst
}

pub fn lasso_instance(n: usize, d: usize, seed: u64) -> ProblemSpec {
    let (a, target) = generate_regression(&SyntheticSpec::new(n, d, 1, seed)).expect("synthetic");
    let lambda = default_lambda(&a, &target).expect("lambda");
    build_lasso(RegressionData {
        a,
        target,
        lambda,
        groups: None,
    })
    .expect("lasso adapter")
}

pub fn group_lasso_instance(n: usize, d: usize, group_size: usize, seed: u64) -> ProblemSpec {
    let (a, target) = generate_regression(&SyntheticSpec::new(n, d, 1, seed)).expect("synthetic");
    let lambda = default_lambda(&a, &target).expect("lambda");
    let groups = GroupPartition::contiguous(d, group_size).expect("partition");
    build_group_lasso(RegressionData {
        a,
        target,
        lambda,
        groups: Some(groups),
    })
    .expect("group lasso adapter")
}

pub fn trace_norm_instance(n: usize, d: usize, m: usize, seed: u64) -> ProblemSpec {
    let (a, target) = generate_regression(&SyntheticSpec::new(n, d, m, seed)).expect("synthetic");
    let lambda = default_lambda(&a, &target).expect("lambda");
    build_trace_norm(RegressionData {
        a,
        target,
        lambda,
        groups: None,
    })
    .expect("trace norm adapter")
}

/// Two gaussian blobs whose feature columns are rescaled onto a geometric
/// ladder, `30^(j / (d-1))` for column `j`. Kernel entries then span several
/// orders of magnitude, the regime the dual benchmarks run in.
pub fn scaled_blobs(
    n: usize,
    d: usize,
    separation: f64,
    seed: u64,
) -> (DenseMatrix, DenseVector) {
    let (mut x, y) = generate_classification(n, d, separation, seed).expect("blobs");
    for j in 0..d {
        let s = 30.0_f64.powf(j as f64 / (d as f64 - 1.0));
        for v in x.col_mut(j) {
            *v *= s;
        }
    }
    (x, y)
}

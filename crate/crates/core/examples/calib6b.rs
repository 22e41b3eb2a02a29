// scratch: is the dual solver's stop point objective-optimal? compare
// against a projected-gradient reference with an exact feasible-set
// projection (bisection on the hyperplane multiplier).

use rapid_core::data_io::{generate_classification, subsample};
use rapid_core::linalg::spectral_norm_sq_default;
use rapid_core::svm::{build_linear_kernel, solve_svm, SvmConfig, SvmProblem, SvmRule};

fn objective(p: &SvmProblem, a: &[f64]) -> f64 {
    let n = p.len();
    let q = p.q();
    let mut quad = 0.0;
    let mut lin = 0.0;
    for i in 0..n {
        lin += a[i];
        let mut row = 0.0;
        for j in 0..n {
            row += q.get(i, j) * a[j];
        }
        quad += a[i] * row;
    }
    0.5 * quad - lin
}

// exact projection onto {0 <= a <= C, y'a = 0}: clip(z - lam*y) with lam
// found by bisection; y'clip is nonincreasing in lam.
fn project_exact(z: &[f64], y: &[f64], c: f64) -> Vec<f64> {
    let eval = |lam: f64| -> f64 {
        z.iter()
            .zip(y)
            .map(|(&zi, &yi)| yi * (zi - lam * yi).clamp(0.0, c))
            .sum()
    };
    let mut lo = -1e12;
    let mut hi = 1e12;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if eval(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let lam = 0.5 * (lo + hi);
    z.iter()
        .zip(y)
        .map(|(&zi, &yi)| (zi - lam * yi).clamp(0.0, c))
        .collect()
}

fn reference_solve(p: &SvmProblem, iters: usize) -> Vec<f64> {
    let n = p.len();
    let q = p.q();
    let y = p.labels().as_slice();
    let c = p.box_bound();
    let l = spectral_norm_sq_default(q).value.sqrt().max(1e-12);
    let step = 1.0 / l;
    let mut a = vec![0.0; n];
    // fista momentum on top of the exact projection
    let mut a_prev = a.clone();
    for t in 1..=iters {
        let beta = (t as f64 - 1.0) / (t as f64 + 2.0);
        let v: Vec<f64> = a
            .iter()
            .zip(&a_prev)
            .map(|(&ai, &pi)| ai + beta * (ai - pi))
            .collect();
        let mut z = vec![0.0; n];
        for i in 0..n {
            let mut gi = -1.0;
            for j in 0..n {
                gi += q.get(i, j) * v[j];
            }
            z[i] = v[i] - step * gi;
        }
        let next = project_exact(&z, y, c);
        a_prev = std::mem::replace(&mut a, next);
    }
    a
}

fn kkt(p: &SvmProblem, a: &[f64], sv_tol: f64) -> (f64, f64, usize, usize, usize) {
    let n = p.len();
    let q = p.q();
    let y = p.labels().as_slice();
    let c = p.box_bound();
    let mut g = vec![0.0_f64; n];
    for i in 0..n {
        let mut s = 0.0;
        for j in 0..n {
            s += q.get(i, j) * a[j];
        }
        g[i] = s - 1.0;
    }
    let mut bs: Vec<f64> = Vec::new();
    let (mut at0, mut atc) = (0, 0);
    for i in 0..n {
        if a[i] > sv_tol && a[i] < c - sv_tol {
            bs.push(-g[i] * y[i]);
        } else if a[i] <= sv_tol {
            at0 += 1;
        } else {
            atc += 1;
        }
    }
    let b = if bs.is_empty() {
        0.0
    } else {
        bs.iter().sum::<f64>() / bs.len() as f64
    };
    let spread = bs
        .iter()
        .fold(0.0_f64, |m, &x| m.max((x - b).abs()));
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
    (worst, spread, bs.len(), at0, atc)
}

fn main() {
    for seed in [1u64, 2] {
        let (x, y) = generate_classification(400, 6, 1.5, seed).unwrap();
        let split = subsample(&x, &y, 0.5, seed).unwrap();
        for c in [0.1, 1.0] {
            let p = build_linear_kernel(&split.train_x, &split.train_y, c).unwrap();
            let t0 = std::time::Instant::now();
            let aref = reference_solve(&p, 20_000);
            let fref = objective(&p, &aref);
            let (kref, spread_ref, free_ref, z_ref, c_ref) = kkt(&p, &aref, 1e-6 * c);
            println!(
                "seed={seed} c={c} ref f={fref:.10} kkt={kref:.2e} spread={spread_ref:.2e} free={free_ref} at0={z_ref} atC={c_ref} [{:.1}s]",
                t0.elapsed().as_secs_f64()
            );
            for rule in [SvmRule::Apg, SvmRule::RapidII] {
                let mut cfg = SvmConfig::new(rule);
                cfg.max_iter = 30_000;
                cfg.rel_tol = 1e-10;
                cfg.feas_tol = 1e-12;
                cfg.record_trace = false;
                let res = solve_svm(&p, &cfg).unwrap();
                let f = objective(&p, res.alpha.as_slice());
                let (k, spread, free, z0, zc) = kkt(&p, res.alpha.as_slice(), 1e-6 * c);
                println!(
                    "  rule={} iters={} f={f:.10} gap_to_ref={:.3e} kkt={k:.2e} spread={spread:.2e} free={free} at0={z0} atC={zc}",
                    rule.name(),
                    res.iterations,
                    f - fref,
                );
            }
        }
    }
}

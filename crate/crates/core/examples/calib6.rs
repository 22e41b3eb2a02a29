// scratch: KKT residual and brute-force match calibration for the dual solver

use rapid_core::data_io::{generate_classification, subsample, SplitMix64};
use rapid_core::svm::{build_linear_kernel, solve_svm, SvmConfig, SvmProblem, SvmRule};
use rapid_core::{DenseMatrix, DenseVector};

fn local_objective(p: &SvmProblem, a: &[f64]) -> f64 {
    let n = p.len();
    let q = p.q();
    let mut quad = 0.0;
    let mut lin = 0.0;
    for i in 0..n {
        lin += a[i];
        for j in 0..n {
            quad += a[i] * q.get(i, j) * a[j];
        }
    }
    0.5 * quad - lin
}

fn svm_brute_force(p: &SvmProblem, per_dim: usize, rounds: usize) -> f64 {
    let n = p.len();
    let y = p.labels().as_slice();
    let c = p.box_bound();
    if n == 1 {
        return 0.0;
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
            let mut ok = true;
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
                ok = false;
            }
            if ok {
                let v = local_objective(p, &a);
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
    best_f.min(0.0)
}

fn kkt_residual(p: &SvmProblem, alpha: &DenseVector, sv_tol: f64) -> (f64, usize) {
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
            if y[i] > 0.0 {
                b_lo = b_lo.max(-g[i]);
            } else {
                b_hi = b_hi.min(g[i]);
            }
        } else if y[i] > 0.0 {
            b_hi = b_hi.min(-g[i]);
        } else {
            b_lo = b_lo.max(g[i]);
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
    (worst, free_count)
}

fn main() {
    println!("== toys ==");
    let mut worst_toy = 0.0_f64;
    for k in 0..20u64 {
        let n = 2 + (k % 2) as usize;
        let dd = 4;
        let mut rng = SplitMix64::stream_indexed(7, 60, k);
        let data: Vec<f64> = (0..n * dd).map(|_| rng.next_normal()).collect();
        let x = DenseMatrix::new(n, dd, data).unwrap();
        let mut yv = vec![0.0; n];
        for (i, v) in yv.iter_mut().enumerate() {
            *v = if i % 2 == 0 { 1.0 } else { -1.0 };
        }
        if n == 3 && k % 2 == 1 {
            yv[2] = -1.0;
        }
        let c = [0.1, 1.0, 10.0][(k % 3) as usize];
        let p = build_linear_kernel(&x, &DenseVector::new(yv), c).unwrap();
        let brute = svm_brute_force(&p, 101, 8);
        for rule in [SvmRule::Apg, SvmRule::RapidI, SvmRule::RapidII] {
            let mut cfg = SvmConfig::new(rule);
            cfg.max_iter = 20_000;
            cfg.rel_tol = 1e-12;
            cfg.record_trace = false;
            match solve_svm(&p, &cfg) {
                Ok(res) => {
                    let f = local_objective(&p, res.alpha.as_slice());
                    let gap = (f - brute).abs();
                    worst_toy = worst_toy.max(gap);
                    if gap > 5e-5 {
                        println!(
                            "toy k={k} n={n} c={c} rule={} gap={gap:.3e} conv={} iters={}",
                            rule.name(),
                            res.converged,
                            res.iterations
                        );
                    }
                }
                Err(e) => println!("toy k={k} n={n} c={c} rule={} ERR {e}", rule.name()),
            }
        }
    }
    println!("worst toy gap = {worst_toy:.3e}");

    println!("== subsamples ==");
    for seed in 1..=3u64 {
        let (x, y) = generate_classification(400, 6, 1.5, seed).unwrap();
        let split = subsample(&x, &y, 0.5, seed).unwrap();
        for c in [0.1, 1.0, 10.0] {
            let p = build_linear_kernel(&split.train_x, &split.train_y, c).unwrap();
            for rule in [SvmRule::Apg, SvmRule::RapidII] {
                let mut cfg = SvmConfig::new(rule);
                cfg.max_iter = 30_000;
                cfg.rel_tol = 1e-10;
                cfg.feas_tol = 1e-12;
                cfg.record_trace = false;
                let t0 = std::time::Instant::now();
                let res = solve_svm(&p, &cfg).unwrap();
                let secs = t0.elapsed().as_secs_f64();
                let a = res.alpha.as_slice();
                let mut box_lo = 0.0_f64;
                let mut box_hi = 0.0_f64;
                let mut ya = 0.0;
                for (i, &ai) in a.iter().enumerate() {
                    box_lo = box_lo.max(-ai);
                    box_hi = box_hi.max(ai - c);
                    ya += split.train_y.as_slice()[i] * ai;
                }
                let (res_kkt, free) = kkt_residual(&p, &res.alpha, 1e-6 * c);
                println!(
                    "seed={seed} c={c} rule={} conv={} iters={} kkt={res_kkt:.3e} free={free} box=({box_lo:.1e},{box_hi:.1e}) |ya|={:.1e} [{secs:.1}s]",
                    rule.name(),
                    res.converged,
                    res.iterations,
                    ya.abs()
                );
            }
        }
    }
}

// scratch: (a) scan toy seed bases for a family where every rule converges
// and matches brute force; (b) KKT residual against stop tightness.

use rapid_core::data_io::{generate_classification, subsample, SplitMix64};
use rapid_core::svm::{build_linear_kernel, solve_svm, SvmConfig, SvmProblem, SvmRule};
use rapid_core::{DenseMatrix, DenseVector};

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

fn brute(p: &SvmProblem, per_dim: usize, rounds: usize) -> f64 {
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
                let v = objective(p, &a);
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

fn kkt(p: &SvmProblem, a: &[f64], sv_tol: f64) -> f64 {
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
    for i in 0..n {
        if a[i] > sv_tol && a[i] < c - sv_tol {
            bs.push(-g[i] * y[i]);
        }
    }
    let b = if bs.is_empty() {
        0.0
    } else {
        bs.iter().sum::<f64>() / bs.len() as f64
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

fn main() {
    println!("== toy seed scan ==");
    'base: for base in 0..30u64 {
        let mut worst_gap = 0.0_f64;
        for k in 0..20u64 {
            let n = 2 + (k % 2) as usize;
            let dd = 4;
            let mut rng = SplitMix64::stream_indexed(base, 60, k);
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
            let bf = brute(&p, 101, 8);
            for rule in [SvmRule::RapidI, SvmRule::RapidII] {
                let mut cfg = SvmConfig::new(rule);
                cfg.max_iter = 20_000;
                cfg.rel_tol = 1e-12;
                cfg.record_trace = false;
                match solve_svm(&p, &cfg) {
                    Ok(res) => {
                        let f = objective(&p, res.alpha.as_slice());
                        let gap = (f - bf).abs();
                        worst_gap = worst_gap.max(gap);
                        if gap > 5e-5 {
                            println!(
                                "base={base} k={k} c={c} rule={} conv={} gap={gap:.2e} REJECT",
                                rule.name(),
                                res.converged
                            );
                            continue 'base;
                        }
                    }
                    Err(e) => {
                        println!("base={base} k={k} c={c} rule={} ERR {e} REJECT", rule.name());
                        continue 'base;
                    }
                }
            }
        }
        println!("base={base} OK worst_gap={worst_gap:.2e}");
    }

    println!("== subsample kkt, both rules at 1e-13 ==");
    for seed in 1..=3u64 {
        let (x, y) = generate_classification(400, 6, 1.5, seed).unwrap();
        let split = subsample(&x, &y, 0.5, seed).unwrap();
        for c in [0.1, 1.0, 10.0] {
            let p = build_linear_kernel(&split.train_x, &split.train_y, c).unwrap();
            for rule in [SvmRule::Apg, SvmRule::RapidII] {
                let mut cfg = SvmConfig::new(rule);
                cfg.max_iter = 200_000;
                cfg.rel_tol = 1e-13;
                cfg.feas_tol = 1e-12;
                cfg.record_trace = false;
                let t0 = std::time::Instant::now();
                let res = solve_svm(&p, &cfg).unwrap();
                let secs = t0.elapsed().as_secs_f64();
                let k = kkt(&p, res.alpha.as_slice(), 1e-6 * c);
                println!(
                    "seed={seed} c={c} rule={} conv={} iters={} kkt={k:.2e} [{secs:.1}s]",
                    rule.name(),
                    res.converged,
                    res.iterations
                );
            }
        }
    }
}

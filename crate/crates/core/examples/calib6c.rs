// scratch: hunt for an instance family where the dual solver reaches
// KKT optimality. Variables: separation, C, stop tightness, budget.

use rapid_core::data_io::{generate_classification, subsample};
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

fn kkt(p: &SvmProblem, a: &[f64], sv_tol: f64) -> (f64, usize, usize, usize) {
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
    (worst, bs.len(), at0, atc)
}

fn main() {
    for sep in [3.0, 5.0] {
        for seed in [1u64, 2] {
            let (x, y) = generate_classification(400, 6, sep, seed).unwrap();
            let split = subsample(&x, &y, 0.5, seed).unwrap();
            for c in [0.1, 1.0, 10.0] {
                let p = build_linear_kernel(&split.train_x, &split.train_y, c).unwrap();
                for (tag, rel_tol, max_iter) in
                    [("tight", 1e-12_f64, 60_000usize), ("vtight", 1e-15, 300_000)]
                {
                    let mut cfg = SvmConfig::new(SvmRule::RapidII);
                    cfg.max_iter = max_iter;
                    cfg.rel_tol = rel_tol;
                    cfg.feas_tol = 1e-12;
                    cfg.record_trace = false;
                    let t0 = std::time::Instant::now();
                    let res = solve_svm(&p, &cfg).unwrap();
                    let secs = t0.elapsed().as_secs_f64();
                    let f = objective(&p, res.alpha.as_slice());
                    let (k, free, at0, atc) = kkt(&p, res.alpha.as_slice(), 1e-6 * c);
                    println!(
                        "sep={sep} seed={seed} c={c} {tag} conv={} iters={} f={f:.8} kkt={k:.2e} free={free} at0={at0} atC={atc} [{secs:.1}s]",
                        res.converged, res.iterations
                    );
                }
            }
        }
    }
}

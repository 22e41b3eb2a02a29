// scratch: dissect the non-converging n=3 toy. Print the raw trajectory.

use rapid_core::data_io::SplitMix64;
use rapid_core::svm::{
    alternate_project_feasible, build_linear_kernel, exact_step_size,
    projected_gradient_direction, solve_svm, svm_objective, svm_theta, SvmConfig, SvmRule,
};
use rapid_core::{DenseMatrix, DenseVector};

fn main() {
    let k = 3u64;
    let n = 3usize;
    let dd = 4;
    let mut rng = SplitMix64::stream_indexed(7, 60, k);
    let data: Vec<f64> = (0..n * dd).map(|_| rng.next_normal()).collect();
    let x = DenseMatrix::new(n, dd, data).unwrap();
    let yv = DenseVector::new(vec![1.0, -1.0, -1.0]);
    let c = 0.1;
    let p = build_linear_kernel(&x, &yv, c).unwrap();
    println!("Q =");
    for i in 0..n {
        println!(
            "  {:+.4} {:+.4} {:+.4}",
            p.q().get(i, 0),
            p.q().get(i, 1),
            p.q().get(i, 2)
        );
    }

    // raw fista trajectory on the projections, by hand
    let mut alpha = DenseVector::zeros(n);
    let mut alpha_prev = DenseVector::zeros(n);
    for t in 1..=40usize {
        let beta = (t as f64 - 1.0) / (t as f64 + 2.0);
        let mut v = DenseVector::zeros(n);
        for i in 0..n {
            v[i] = alpha[i] + beta * (alpha[i] - alpha_prev[i]);
        }
        let d = projected_gradient_direction(&p, &v).unwrap();
        let gamma = exact_step_size(&p, &v, &d).unwrap();
        let mut cand = v.clone();
        for (ci, di) in cand.iter_mut().zip(d.iter()) {
            *ci -= gamma * di;
        }
        let next = alternate_project_feasible(&cand, &p, 1e-10, 100_000).unwrap();
        alpha_prev = std::mem::replace(&mut alpha, next);
        let f = svm_objective(&p, &alpha).unwrap();
        let th = svm_theta(&p, &alpha).unwrap();
        println!(
            "t={t:3} gamma={gamma:9.3} f={f:+.8} theta={th:.4} alpha=({:+.5},{:+.5},{:+.5})",
            alpha[0], alpha[1], alpha[2]
        );
    }

    let mut cfg = SvmConfig::new(SvmRule::Apg);
    cfg.max_iter = 20_000;
    cfg.rel_tol = 1e-12;
    cfg.record_trace = true;
    let res = solve_svm(&p, &cfg).unwrap();
    println!(
        "solver: conv={} iters={} f_ret={:.8}",
        res.converged, res.iterations, res.objective
    );
    for rec in res.trace.iter().rev().take(5) {
        println!(
            "  t={} f_x={:+.10} f_theta_x={:+.10} theta={:.4} gamma={:.3}",
            rec.t, rec.f_x, rec.f_theta_x, rec.theta, rec.gamma
        );
    }
}

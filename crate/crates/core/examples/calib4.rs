// scratch: measure worst gap/bound ratio for the relaxed rate bound

use rapid_core::audit::oracle_minimize;
use rapid_core::data_io::{generate_regression, SyntheticSpec};
use rapid_core::linalg::norm2_sq;
use rapid_core::problems::{build_lasso, default_lambda, RegressionData};
use rapid_core::solver::solve;
use rapid_core::{DenseVector, Rule, SolverConfig};

fn main() {
    for seed in 1..=10u64 {
        let (a, target) = generate_regression(&SyntheticSpec::new(50, 50, 1, seed)).unwrap();
        let lambda = default_lambda(&a, &target).unwrap();
        let p = build_lasso(RegressionData {
            a,
            target,
            lambda,
            groups: None,
        })
        .unwrap();
        let t0 = std::time::Instant::now();
        let (f_star, x_star) = oracle_minimize(&p, 100_000).unwrap();
        let oracle_s = t0.elapsed().as_secs_f64();
        let dist_sq = norm2_sq(&x_star);
        let l = p.lipschitz();
        for rule in [Rule::RapidI, Rule::Fista] {
            let mut cfg = SolverConfig::new(rule);
            cfg.max_iter = 500;
            cfg.rel_tol = 1e-16;
            let res = solve(&p, &cfg, &DenseVector::zeros(p.dim())).unwrap();
            let mut worst = f64::NEG_INFINITY;
            let mut worst_t = 0;
            let mut worst_excess = f64::NEG_INFINITY;
            for rec in &res.trace {
                let eps = rec.f_theta_x - f_star;
                let t1 = rec.t as f64 + 1.0;
                let bound = 2.0 * l * dist_sq / (t1 * t1);
                let ratio = eps / bound;
                if ratio > worst {
                    worst = ratio;
                    worst_t = rec.t;
                }
                worst_excess = worst_excess.max(eps - bound);
            }
            println!(
                "seed={seed} rule={} rows={} worst_ratio={worst:.4} at_t={worst_t} worst_excess={worst_excess:.3e} oracle_s={oracle_s:.2}",
                rule.name(),
                res.trace.len(),
            );
        }
    }
}

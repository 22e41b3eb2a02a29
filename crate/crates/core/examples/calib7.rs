// scratch: re-check the 2000-point stop-rule race after the projection change

use rapid_core::data_io::generate_classification;
use rapid_core::svm::{build_linear_kernel, solve_svm, SvmConfig, SvmRule};

fn main() {
    for c in [0.1, 1.0] {
        let mut wins = 0;
        for seed in 1..=5u64 {
            let (mut x, y) = generate_classification(2000, 10, 2.0, seed).unwrap();
            let d = x.cols();
            for j in 0..d {
                let s = 30.0_f64.powf(j as f64 / (d as f64 - 1.0));
                for v in x.col_mut(j) {
                    *v *= s;
                }
            }
            let p = build_linear_kernel(&x, &y, c).unwrap();
            let mut iters = [0usize; 2];
            let mut conv = [false; 2];
            for (slot, rule) in [SvmRule::Apg, SvmRule::RapidII].into_iter().enumerate() {
                let mut cfg = SvmConfig::new(rule);
                cfg.max_iter = 9000;
                cfg.record_trace = false;
                let t0 = std::time::Instant::now();
                let res = solve_svm(&p, &cfg).unwrap();
                let secs = t0.elapsed().as_secs_f64();
                iters[slot] = res.iterations;
                conv[slot] = res.converged;
                println!(
                    "c={c} seed={seed} rule={} conv={} iters={} f={:.6} [{secs:.1}s]",
                    rule.name(),
                    res.converged,
                    res.iterations,
                    res.objective
                );
            }
            if conv[1] && iters[1] < iters[0] {
                wins += 1;
            }
        }
        println!("c={c}: rapid2 wins {wins}/5");
    }
}

//! Adapters that turn concrete regression problems into [`ProblemSpec`]s.
//!
//! All three share the least-squares smooth part `f1 = ||Ax - y||^2 / 2`
//! (summed over tasks for the multitask problem) and differ in the
//! regularizer: `lambda ||x||_1`, `lambda sum_g ||x_g||`, or
//! `lambda ||X||_*`. Each adapter installs the closed-form scaling line
//! search `theta = (<y, Ax> - f2(x)) / ||Ax||^2` for its own `f2`; the
//! solver's safeguards handle the degenerate cases.
//!
//! The multitask variable is the `d x M` coefficient matrix flattened
//! column by column into a vector of length `d * M`.

use std::sync::Arc;

use crate::data_io::Target;
use crate::error::{Error, Result};
use crate::linalg::{dot, norm2_sq, spectral_norm_sq_default, DenseMatrix, DenseVector};
use crate::prox::{prox_group_l2, prox_l1, prox_trace, trace_norm, GroupPartition};
use crate::solver::ProblemSpec;

/// A regression instance: design matrix, target(s), regularization weight,
/// and (for the group problem) a coordinate partition.
#[derive(Debug, Clone)]
pub struct RegressionData {
    pub a: DenseMatrix,
    pub target: Target,
    pub lambda: f64,
    pub groups: Option<GroupPartition>,
}

/// Guard against division by a vanishing `||Ax||^2` in the scaling search.
const THETA_DENOM_FLOOR: f64 = 1e-24;

fn check_lambda(lambda: f64) -> Result<()> {
    if !lambda.is_finite() || lambda < 0.0 {
        return Err(Error::BadArgument(format!(
            "lambda {lambda} must be finite and nonnegative"
        )));
    }
    Ok(())
}

fn single_target(target: Target) -> Result<DenseVector> {
    match target {
        Target::Single(y) => Ok(y),
        Target::Multi(_) => Err(Error::Shape(
            "this problem takes a single target column".to_string(),
        )),
    }
}

fn check_rows(a: &DenseMatrix, rows: usize) -> Result<()> {
    if a.rows() != rows {
        return Err(Error::Shape(format!(
            "design matrix has {} rows, target has {rows}",
            a.rows()
        )));
    }
    Ok(())
}

/// The CLI default regularization weight `0.1 * ||A^T y||_inf` (largest
/// column correlation), taken over all target columns for multitask data.
pub fn default_lambda(a: &DenseMatrix, target: &Target) -> Result<f64> {
    let max_corr = match target {
        Target::Single(y) => a.matvec_t(y)?.max_abs(),
        Target::Multi(ys) => {
            let mut m = 0.0_f64;
            for j in 0..ys.cols() {
                let col = DenseVector::new(ys.col(j).to_vec());
                m = m.max(a.matvec_t(&col)?.max_abs());
            }
            m
        }
    };
    Ok(0.1 * max_corr)
}

/// `f = ||Ax - y||^2 / 2 + lambda ||x||_1`.
pub fn build_lasso(data: RegressionData) -> Result<ProblemSpec> {
    let RegressionData {
        a,
        target,
        lambda,
        groups,
    } = data;
    if groups.is_some() {
        return Err(Error::BadArgument(
            "lasso does not take a group partition".to_string(),
        ));
    }
    check_lambda(lambda)?;
    let y = single_target(target)?;
    check_rows(&a, y.len())?;
    let f2 = move |x: &DenseVector| lambda * x.iter().map(|v| v.abs()).sum::<f64>();
    build_vector_problem(a, y, lambda, f2, move |u, t| prox_l1(u, t))
}

/// `f = ||Ax - y||^2 / 2 + lambda sum_g ||x_g||`.
pub fn build_group_lasso(data: RegressionData) -> Result<ProblemSpec> {
    let RegressionData {
        a,
        target,
        lambda,
        groups,
    } = data;
    let part = groups.ok_or_else(|| {
        Error::BadPartition("group lasso requires a group partition".to_string())
    })?;
    check_lambda(lambda)?;
    let y = single_target(target)?;
    check_rows(&a, y.len())?;
    if part.dim() != a.cols() {
        return Err(Error::BadPartition(format!(
            "partition covers {} coordinates, design matrix has {}",
            part.dim(),
            a.cols()
        )));
    }
    let part_f2 = part.clone();
    let f2 = move |x: &DenseVector| {
        lambda
            * part_f2
                .group_norm_sum(x)
                .expect("dimension fixed at build time")
    };
    build_vector_problem(a, y, lambda, f2, move |u, t| prox_group_l2(u, t, &part))
}

/// Shared construction for the two vector-variable problems.
fn build_vector_problem(
    a: DenseMatrix,
    y: DenseVector,
    lambda: f64,
    f2: impl Fn(&DenseVector) -> f64 + Send + Sync + 'static,
    prox: impl Fn(&DenseVector, f64) -> Result<DenseVector> + Send + Sync + 'static,
) -> Result<ProblemSpec> {
    let lipschitz = spectral_norm_sq_default(&a).value;
    let dim = a.cols();
    let a = Arc::new(a);
    let y = Arc::new(y);
    let f2 = Arc::new(f2);

    let residual = {
        let a = a.clone();
        let y = y.clone();
        move |x: &DenseVector| -> Result<DenseVector> {
            let mut r = a.matvec(x)?;
            for (ri, yi) in r.iter_mut().zip(y.iter()) {
                *ri -= yi;
            }
            Ok(r)
        }
    };

    let f1_value = {
        let residual = residual.clone();
        Box::new(move |x: &DenseVector| Ok(0.5 * norm2_sq(&residual(x)?)))
    };
    let f1_grad = {
        let a = a.clone();
        Box::new(move |x: &DenseVector| a.matvec_t(&residual(x)?))
    };
    let f2_value = {
        let f2 = f2.clone();
        Box::new(move |x: &DenseVector| Ok(f2(x)))
    };
    let prox_f2 = Box::new(move |u: &DenseVector, gamma: f64| prox(u, lambda * gamma));
    let theta = {
        let a = a.clone();
        let y = y.clone();
        Box::new(move |x: &DenseVector| {
            let ax = a.matvec(x)?;
            let denom = norm2_sq(&ax);
            if denom < THETA_DENOM_FLOOR {
                return Ok(1.0);
            }
            Ok((dot(&y, &ax)? - f2(x)) / denom)
        })
    };

    Ok(
        ProblemSpec::new(dim, lipschitz, f1_value, f1_grad, f2_value, prox_f2)?
            .with_theta_search(theta),
    )
}

/// `f = sum_j ||A x_j - y_j||^2 / 2 + lambda ||X||_*` over the flattened
/// `d x M` coefficient matrix.
pub fn build_trace_norm(data: RegressionData) -> Result<ProblemSpec> {
    let RegressionData {
        a,
        target,
        lambda,
        groups,
    } = data;
    if groups.is_some() {
        return Err(Error::BadArgument(
            "trace-norm regression does not take a group partition".to_string(),
        ));
    }
    check_lambda(lambda)?;
    let ys = match target {
        Target::Multi(ys) => ys,
        Target::Single(_) => {
            return Err(Error::Shape(
                "trace-norm regression takes a multi-column target".to_string(),
            ))
        }
    };
    check_rows(&a, ys.rows())?;
    let d = a.cols();
    let m = ys.cols();
    let dim = d * m;
    let lipschitz = spectral_norm_sq_default(&a).value;
    let a = Arc::new(a);
    let ys = Arc::new(ys);

    // Per-task residuals r_j = A x_j - y_j for the flattened variable.
    let residuals = {
        let a = a.clone();
        let ys = ys.clone();
        move |x: &DenseVector| -> Result<Vec<DenseVector>> {
            if x.len() != d * m {
                return Err(Error::Shape(format!(
                    "multitask point has length {}, expected {}",
                    x.len(),
                    d * m
                )));
            }
            (0..m)
                .map(|j| {
                    let xj = DenseVector::new(x[j * d..(j + 1) * d].to_vec());
                    let mut r = a.matvec(&xj)?;
                    for (ri, yi) in r.iter_mut().zip(ys.col(j).iter()) {
                        *ri -= yi;
                    }
                    Ok(r)
                })
                .collect()
        }
    };

    let f1_value = {
        let residuals = residuals.clone();
        Box::new(move |x: &DenseVector| {
            Ok(residuals(x)?.iter().map(norm2_sq).sum::<f64>() * 0.5)
        })
    };
    let f1_grad = {
        let a = a.clone();
        let residuals = residuals.clone();
        Box::new(move |x: &DenseVector| {
            let mut g = Vec::with_capacity(d * m);
            for r in residuals(x)? {
                g.extend_from_slice(a.matvec_t(&r)?.as_slice());
            }
            Ok(DenseVector::new(g))
        })
    };
    let f2_value = Box::new(move |x: &DenseVector| {
        let xm = DenseMatrix::from_flat(d, m, x)?;
        Ok(lambda * trace_norm(&xm)?)
    });
    let prox_f2 = Box::new(move |u: &DenseVector, gamma: f64| {
        let um = DenseMatrix::from_flat(d, m, u)?;
        Ok(DenseVector::new(
            prox_trace(&um, lambda * gamma)?.into_vec(),
        ))
    });
    let theta = {
        let a = a.clone();
        let ys = ys.clone();
        Box::new(move |x: &DenseVector| {
            let mut num = 0.0;
            let mut denom = 0.0;
            for j in 0..m {
                let xj = DenseVector::new(x[j * d..(j + 1) * d].to_vec());
                let axj = a.matvec(&xj)?;
                num += ys.col(j).iter().zip(axj.iter()).map(|(a, b)| a * b).sum::<f64>();
                denom += norm2_sq(&axj);
            }
            if denom < THETA_DENOM_FLOOR {
                return Ok(1.0);
            }
            let xm = DenseMatrix::from_flat(d, m, x)?;
            Ok((num - lambda * trace_norm(&xm)?) / denom)
        })
    };

    Ok(
        ProblemSpec::new(dim, lipschitz, f1_value, f1_grad, f2_value, prox_f2)?
            .with_theta_search(theta),
    )
}

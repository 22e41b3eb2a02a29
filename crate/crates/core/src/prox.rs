//! Proximal operators and projections.
//!
//! Each operator solves `argmin_x f2(x) + ||x - u||^2 / (2t)` in closed form
//! for its regularizer. Thresholds arrive already multiplied by the step size
//! (`t = lambda * gamma`), so the operators themselves stay stateless.

use crate::error::{Error, Result};
use crate::linalg::{thin_svd, DenseMatrix, DenseVector};

/// Disjoint groups of coordinate indices covering `0..dim` exactly once.
#[derive(Debug, Clone)]
pub struct GroupPartition {
    groups: Vec<Vec<usize>>,
    dim: usize,
}

impl GroupPartition {
    /// Validate that `groups` cover `0..dim` with no gaps or overlaps.
    pub fn new(groups: Vec<Vec<usize>>, dim: usize) -> Result<Self> {
        let mut seen = vec![false; dim];
        let mut covered = 0usize;
        for (g, group) in groups.iter().enumerate() {
            if group.is_empty() {
                return Err(Error::BadPartition(format!("group {g} is empty")));
            }
            for &i in group {
                if i >= dim {
                    return Err(Error::BadPartition(format!(
                        "group {g} references coordinate {i} outside 0..{dim}"
                    )));
                }
                if seen[i] {
                    return Err(Error::BadPartition(format!(
                        "coordinate {i} appears in more than one group"
                    )));
                }
                seen[i] = true;
                covered += 1;
            }
        }
        if covered != dim {
            return Err(Error::BadPartition(format!(
                "groups cover {covered} of {dim} coordinates"
            )));
        }
        Ok(GroupPartition { groups, dim })
    }

    /// Contiguous blocks of `group_size` coordinates; the last block keeps
    /// the remainder.
    pub fn contiguous(dim: usize, group_size: usize) -> Result<Self> {
        if group_size == 0 {
            return Err(Error::BadPartition("group size 0".to_string()));
        }
        let groups = (0..dim)
            .step_by(group_size)
            .map(|start| (start..(start + group_size).min(dim)).collect())
            .collect();
        GroupPartition::new(groups, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    /// Sum of Euclidean norms of the group sub-vectors of `x`.
    pub fn group_norm_sum(&self, x: &DenseVector) -> Result<f64> {
        if x.len() != self.dim {
            return Err(Error::Shape(format!(
                "group norm: vector length {} against partition over {}",
                x.len(),
                self.dim
            )));
        }
        Ok(self
            .groups
            .iter()
            .map(|g| g.iter().map(|&i| x[i] * x[i]).sum::<f64>().sqrt())
            .sum())
    }
}

fn check_threshold(t: f64) -> Result<()> {
    if t < 0.0 || !t.is_finite() {
        return Err(Error::BadThreshold(t));
    }
    Ok(())
}

/// Soft-thresholding, the proximal map of `t * ||x||_1`.
///
/// `prox_l1(u, 0) == u`; each output entry shrinks toward zero by `t`.
pub fn prox_l1(u: &DenseVector, t: f64) -> Result<DenseVector> {
    check_threshold(t)?;
    Ok(DenseVector::new(
        u.iter()
            .map(|&x| x.signum() * (x.abs() - t).max(0.0))
            .collect(),
    ))
}

/// Block soft-thresholding, the proximal map of `t * sum_g ||x_g||`.
///
/// A group whose norm is at most `t` collapses to zero; otherwise it shrinks
/// radially by `t`.
pub fn prox_group_l2(u: &DenseVector, t: f64, part: &GroupPartition) -> Result<DenseVector> {
    check_threshold(t)?;
    if u.len() != part.dim() {
        return Err(Error::BadPartition(format!(
            "vector length {} against partition over {}",
            u.len(),
            part.dim()
        )));
    }
    let mut out = u.clone();
    for group in part.groups() {
        let norm = group.iter().map(|&i| u[i] * u[i]).sum::<f64>().sqrt();
        if norm <= t {
            for &i in group {
                out[i] = 0.0;
            }
        } else {
            let shrink = 1.0 - t / norm;
            for &i in group {
                out[i] = u[i] * shrink;
            }
        }
    }
    Ok(out)
}

/// Singular value thresholding, the proximal map of `t * ||X||_*`.
///
/// Soft-thresholds the singular values and reconstructs; a zero input skips
/// the SVD and returns zero directly.
pub fn prox_trace(u: &DenseMatrix, t: f64) -> Result<DenseMatrix> {
    check_threshold(t)?;
    if u.as_slice().iter().all(|&x| x == 0.0) {
        return DenseMatrix::zeros(u.rows(), u.cols());
    }
    let svd = thin_svd(u)?;
    let shrunk = DenseVector::new(svd.sigma.iter().map(|&s| (s - t).max(0.0)).collect());
    let n = shrunk.len();
    let mut out = DenseMatrix::zeros(u.rows(), u.cols())?;
    for c in 0..u.cols() {
        let oc = out.col_mut(c);
        for j in 0..n {
            let s = shrunk[j] * svd.q.get(c, j);
            if s == 0.0 {
                continue;
            }
            for (o, &pij) in oc.iter_mut().zip(svd.p.col(j).iter()) {
                *o += s * pij;
            }
        }
    }
    Ok(out)
}

/// Nuclear norm (sum of singular values).
pub fn trace_norm(u: &DenseMatrix) -> Result<f64> {
    if u.as_slice().iter().all(|&x| x == 0.0) {
        return Ok(0.0);
    }
    Ok(thin_svd(u)?.sigma.iter().sum())
}

/// Coordinate-wise clamp onto `[lo, hi]`.
pub fn project_box(u: &DenseVector, lo: f64, hi: f64) -> Result<DenseVector> {
    if lo > hi {
        return Err(Error::BadBox { lo, hi });
    }
    Ok(DenseVector::new(
        u.iter().map(|&x| x.clamp(lo, hi)).collect(),
    ))
}

/// Projection onto the hyperplane `y^T x = 0` for a +/-1 label vector:
/// `u - (y^T u / ||y||_1) y`. For such labels `||y||_1 = ||y||_2^2`, so this
/// is the exact orthogonal projection.
pub fn project_hyperplane(u: &DenseVector, y: &DenseVector) -> Result<DenseVector> {
    if u.len() != y.len() {
        return Err(Error::Shape(format!(
            "hyperplane projection: lengths {} and {} differ",
            u.len(),
            y.len()
        )));
    }
    check_labels(y)?;
    let dot: f64 = u.iter().zip(y.iter()).map(|(a, b)| a * b).sum();
    let shift = dot / y.len() as f64;
    Ok(DenseVector::new(
        u.iter().zip(y.iter()).map(|(&ui, &yi)| ui - shift * yi).collect(),
    ))
}

/// Reject any label that is not exactly +1 or -1.
pub fn check_labels(y: &DenseVector) -> Result<()> {
    for (index, &value) in y.iter().enumerate() {
        if value != 1.0 && value != -1.0 {
            return Err(Error::BadLabels { index, value });
        }
    }
    Ok(())
}

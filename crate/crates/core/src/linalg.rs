//! Dense double-precision vectors and column-major matrices, plus the two
//! nontrivial kernels the solvers need: a power-iteration estimate of the
//! squared spectral norm and a one-sided Jacobi thin SVD.
//!
//! Everything is `f64`; matrices are column-major so per-column access (the
//! hot pattern in `matvec` and the SVD) is contiguous.

use crate::error::{Error, Result};

/// Dense vector of `f64` values.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseVector {
    data: Vec<f64>,
}

impl DenseVector {
    pub fn new(data: Vec<f64>) -> Self {
        DenseVector { data }
    }

    pub fn zeros(len: usize) -> Self {
        DenseVector {
            data: vec![0.0; len],
        }
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Euclidean norm.
    pub fn norm(&self) -> f64 {
        norm2_sq(self).sqrt()
    }

    /// Largest absolute entry, 0 for the empty vector.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, &x| m.max(x.abs()))
    }

    /// True when every entry is finite.
    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

impl std::ops::Deref for DenseVector {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.data
    }
}

impl std::ops::DerefMut for DenseVector {
    fn deref_mut(&mut self) -> &mut [f64] {
        &mut self.data
    }
}

fn check_same_len(what: &str, a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::Shape(format!("{what}: lengths {a} and {b} differ")));
    }
    Ok(())
}

/// Inner product.
pub fn dot(x: &DenseVector, y: &DenseVector) -> Result<f64> {
    check_same_len("dot", x.len(), y.len())?;
    Ok(x.iter().zip(y.iter()).map(|(a, b)| a * b).sum())
}

/// Squared Euclidean norm.
pub fn norm2_sq(x: &DenseVector) -> f64 {
    x.iter().map(|a| a * a).sum()
}

/// `y += alpha * x`.
pub fn axpy(alpha: f64, x: &DenseVector, y: &mut DenseVector) -> Result<()> {
    check_same_len("axpy", x.len(), y.len())?;
    for (yi, xi) in y.iter_mut().zip(x.iter()) {
        *yi += alpha * xi;
    }
    Ok(())
}

/// `x *= alpha`.
pub fn scale(alpha: f64, x: &mut DenseVector) {
    for xi in x.iter_mut() {
        *xi *= alpha;
    }
}

/// Copy `src` into `dst`.
pub fn copy(src: &DenseVector, dst: &mut DenseVector) -> Result<()> {
    check_same_len("copy", src.len(), dst.len())?;
    dst.as_mut_slice().copy_from_slice(src.as_slice());
    Ok(())
}

/// Dense column-major matrix.
///
/// Entry `(r, c)` lives at `data[c * rows + r]`; both dimensions are at
/// least 1.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    data: Vec<f64>,
    rows: usize,
    cols: usize,
}

impl DenseMatrix {
    /// Wrap column-major data. Rejects empty shapes and length mismatches.
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyData(format!("matrix shape {rows}x{cols}")));
        }
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "matrix {rows}x{cols} needs {} values, got {}",
                rows * cols,
                data.len()
            )));
        }
        Ok(DenseMatrix { data, rows, cols })
    }

    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        DenseMatrix::new(rows, cols, vec![0.0; rows.checked_mul(cols).unwrap_or(0)])
    }

    /// Build from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = DenseMatrix::zeros(rows, cols)?;
        for c in 0..cols {
            for r in 0..rows {
                m.data[c * rows + r] = f(r, c);
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        self.data[c * self.rows + r]
    }

    pub fn set(&mut self, r: usize, c: usize, v: f64) {
        assert!(r < self.rows && c < self.cols, "index ({r},{c}) out of bounds");
        self.data[c * self.rows + r] = v;
    }

    /// Contiguous view of column `c`.
    pub fn col(&self, c: usize) -> &[f64] {
        assert!(c < self.cols, "column {c} out of bounds");
        &self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn col_mut(&mut self, c: usize) -> &mut [f64] {
        assert!(c < self.cols, "column {c} out of bounds");
        &mut self.data[c * self.rows..(c + 1) * self.rows]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    /// Reinterpret a flat vector of length `rows * cols` as a matrix.
    pub fn from_flat(rows: usize, cols: usize, v: &DenseVector) -> Result<Self> {
        DenseMatrix::new(rows, cols, v.as_slice().to_vec())
    }

    pub fn transpose(&self) -> DenseMatrix {
        let mut out = vec![0.0; self.data.len()];
        for c in 0..self.cols {
            for r in 0..self.rows {
                out[r * self.cols + c] = self.data[c * self.rows + r];
            }
        }
        DenseMatrix {
            data: out,
            rows: self.cols,
            cols: self.rows,
        }
    }

    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// `A x`. Walks columns so memory access stays contiguous.
    pub fn matvec(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.len() != self.cols {
            return Err(Error::Shape(format!(
                "matvec: {}x{} against vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut y = vec![0.0; self.rows];
        for (c, &xc) in x.iter().enumerate() {
            if xc == 0.0 {
                continue;
            }
            let col = &self.data[c * self.rows..(c + 1) * self.rows];
            for (yi, &aic) in y.iter_mut().zip(col.iter()) {
                *yi += aic * xc;
            }
        }
        Ok(DenseVector::new(y))
    }

    /// `A^T x`: one dot product per column.
    pub fn matvec_t(&self, x: &DenseVector) -> Result<DenseVector> {
        if x.len() != self.rows {
            return Err(Error::Shape(format!(
                "matvec_t: {}x{} against vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        let mut y = vec![0.0; self.cols];
        for (c, yc) in y.iter_mut().enumerate() {
            let col = &self.data[c * self.rows..(c + 1) * self.rows];
            *yc = col.iter().zip(x.iter()).map(|(a, b)| a * b).sum();
        }
        Ok(DenseVector::new(y))
    }

    /// `A B`, or `A^T B` when `transpose_a` is set.
    pub fn gemm(&self, b: &DenseMatrix, transpose_a: bool) -> Result<DenseMatrix> {
        let (m, k) = if transpose_a {
            (self.cols, self.rows)
        } else {
            (self.rows, self.cols)
        };
        if k != b.rows {
            return Err(Error::Shape(format!(
                "gemm: inner dimensions {k} and {} differ",
                b.rows
            )));
        }
        let mut out = DenseMatrix::zeros(m, b.cols)?;
        for j in 0..b.cols {
            let bj = b.col(j);
            let oj = out.col_mut(j);
            if transpose_a {
                for (i, oij) in oj.iter_mut().enumerate() {
                    let ai = &self.data[i * self.rows..(i + 1) * self.rows];
                    *oij = ai.iter().zip(bj.iter()).map(|(a, x)| a * x).sum();
                }
            } else {
                for (c, &bcj) in bj.iter().enumerate() {
                    if bcj == 0.0 {
                        continue;
                    }
                    let ac = &self.data[c * self.rows..(c + 1) * self.rows];
                    for (oij, &aic) in oj.iter_mut().zip(ac.iter()) {
                        *oij += aic * bcj;
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Result of [`spectral_norm_sq`]: the estimate plus whether the relative
/// change dropped below tolerance within the iteration budget.
#[derive(Debug, Clone, Copy)]
pub struct SpectralEstimate {
    pub value: f64,
    pub converged: bool,
    pub iterations: usize,
}

/// Largest eigenvalue of `A^T A` (the squared spectral norm of `A`) by power
/// iteration with a deterministic start (normalized all-ones vector).
///
/// Stops when the relative change of the Rayleigh quotient drops below `tol`;
/// past `max_iter` it reports the best estimate with `converged = false`.
pub fn spectral_norm_sq(a: &DenseMatrix, tol: f64, max_iter: usize) -> SpectralEstimate {
    let d = a.cols();
    let mut b = DenseVector::new(vec![1.0 / (d as f64).sqrt(); d]);
    let mut lambda = 0.0_f64;
    for it in 1..=max_iter {
        let w = a.matvec(&b).expect("dimension fixed by construction");
        let next = norm2_sq(&w); // b is unit, so this is the Rayleigh quotient
        let mut z = a.matvec_t(&w).expect("dimension fixed by construction");
        let zn = z.norm();
        if zn == 0.0 {
            // A^T A annihilated the iterate: the matrix is (numerically) zero
            // on the explored subspace.
            return SpectralEstimate {
                value: next,
                converged: true,
                iterations: it,
            };
        }
        scale(1.0 / zn, &mut z);
        b = z;
        let delta = (next - lambda).abs();
        lambda = next;
        if delta <= tol * lambda.max(f64::MIN_POSITIVE) {
            return SpectralEstimate {
                value: lambda,
                converged: true,
                iterations: it,
            };
        }
    }
    SpectralEstimate {
        value: lambda,
        converged: false,
        iterations: max_iter,
    }
}

/// Convenience wrapper with the default tolerance (1e-8) and budget (5000).
pub fn spectral_norm_sq_default(a: &DenseMatrix) -> SpectralEstimate {
    spectral_norm_sq(a, 1e-8, 5000)
}

/// Thin SVD `u = p * diag(sigma) * q^T`.
#[derive(Debug, Clone)]
pub struct SvdResult {
    /// Left singular vectors, `rows x n`, orthonormal columns.
    pub p: DenseMatrix,
    /// Singular values, descending and nonnegative, length `n = min(rows, cols)`.
    pub sigma: DenseVector,
    /// Right singular vectors, `cols x n`, orthonormal columns.
    pub q: DenseMatrix,
}

impl SvdResult {
    /// `p * diag(sigma) * q^T`, for reconstruction checks.
    pub fn reconstruct(&self) -> DenseMatrix {
        let rows = self.p.rows();
        let cols = self.q.rows();
        let n = self.sigma.len();
        let mut out = DenseMatrix::zeros(rows, cols).expect("non-empty by construction");
        for c in 0..cols {
            let oc = out.col_mut(c);
            for j in 0..n {
                let s = self.sigma[j] * self.q.get(c, j);
                if s == 0.0 {
                    continue;
                }
                let pj = self.p.col(j);
                for (o, &pij) in oc.iter_mut().zip(pj.iter()) {
                    *o += s * pij;
                }
            }
        }
        out
    }
}

const SVD_MAX_SWEEPS: usize = 100;

/// Thin SVD by one-sided Jacobi.
///
/// Columns of a working copy are orthogonalized with plane rotations until
/// the implicit Gram off-diagonal mass falls below `1e-12 * ||u||_F`; column
/// norms then give the singular values. Handles both orientations by
/// transposing internally, and completes an orthonormal basis for numerically
/// zero columns so `p^T p = I` also holds for rank-deficient input.
pub fn thin_svd(u: &DenseMatrix) -> Result<SvdResult> {
    if u.rows() >= u.cols() {
        thin_svd_tall(u)
    } else {
        let t = thin_svd_tall(&u.transpose())?;
        Ok(SvdResult {
            p: t.q,
            sigma: t.sigma,
            q: t.p,
        })
    }
}

fn thin_svd_tall(u: &DenseMatrix) -> Result<SvdResult> {
    let rows = u.rows();
    let cols = u.cols();
    debug_assert!(rows >= cols);
    let mut b = u.clone();
    let mut v = DenseMatrix::from_fn(cols, cols, |r, c| if r == c { 1.0 } else { 0.0 })?;
    let unorm = u.frob_norm();
    let off_tol = 1e-12 * unorm;

    let mut off = 0.0_f64;
    let mut converged = unorm == 0.0;
    let mut sweeps = 0;
    while !converged && sweeps < SVD_MAX_SWEEPS {
        sweeps += 1;
        let mut off_sq = 0.0_f64;
        for i in 0..cols {
            for j in (i + 1)..cols {
                let (aii, ajj, aij) = {
                    let bi = b.col(i);
                    let bj = b.col(j);
                    let mut aii = 0.0;
                    let mut ajj = 0.0;
                    let mut aij = 0.0;
                    for (&x, &y) in bi.iter().zip(bj.iter()) {
                        aii += x * x;
                        ajj += y * y;
                        aij += x * y;
                    }
                    (aii, ajj, aij)
                };
                off_sq += 2.0 * aij * aij;
                if aij.abs() <= f64::MIN_POSITIVE {
                    continue;
                }
                // Rotation that zeroes the (i, j) entry of the implicit Gram matrix.
                let tau = (ajj - aii) / (2.0 * aij);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let cs = 1.0 / (1.0 + t * t).sqrt();
                let sn = cs * t;
                rotate_cols(&mut b, i, j, cs, sn);
                rotate_cols(&mut v, i, j, cs, sn);
            }
        }
        off = off_sq.sqrt();
        converged = off < off_tol;
    }
    if !converged {
        return Err(Error::SvdNoConverge { off, sweeps });
    }

    // Column norms are the singular values; sort descending.
    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols)
        .map(|j| b.col(j).iter().map(|x| x * x).sum::<f64>().sqrt())
        .collect();
    order.sort_by(|&i, &j| norms[j].partial_cmp(&norms[i]).expect("finite norms"));

    let mut p = DenseMatrix::zeros(rows, cols)?;
    let mut q = DenseMatrix::zeros(cols, cols)?;
    let mut sigma = vec![0.0; cols];
    // Columns whose norm is at rounding level get an orthonormal completion
    // instead of an amplified noise direction.
    let rank_tol = unorm * 1e-14;
    let mut completed: Vec<usize> = Vec::new();
    for (slot, &j) in order.iter().enumerate() {
        sigma[slot] = norms[j];
        q.col_mut(slot).copy_from_slice(v.col(j));
        if norms[j] > rank_tol && norms[j] > 0.0 {
            let inv = 1.0 / norms[j];
            for (pd, &bd) in p.col_mut(slot).iter_mut().zip(b.col(j).iter()) {
                *pd = bd * inv;
            }
        } else {
            completed.push(slot);
        }
    }
    for &slot in &completed {
        complete_orthonormal(&mut p, slot);
    }

    Ok(SvdResult {
        p,
        sigma: DenseVector::new(sigma),
        q,
    })
}

fn rotate_cols(m: &mut DenseMatrix, i: usize, j: usize, cs: f64, sn: f64) {
    debug_assert!(i < j);
    let rows = m.rows();
    let (a, b) = m.data.split_at_mut(j * rows);
    let ci = &mut a[i * rows..(i + 1) * rows];
    let cj = &mut b[..rows];
    for (x, y) in ci.iter_mut().zip(cj.iter_mut()) {
        let xi = *x;
        let yj = *y;
        *x = cs * xi - sn * yj;
        *y = sn * xi + cs * yj;
    }
}

/// Fill column `slot` of `p` with a unit vector orthogonal to every other
/// column. Picks the standard basis vector with the largest residual, which
/// always exists because the column count never exceeds the row count.
fn complete_orthonormal(p: &mut DenseMatrix, slot: usize) {
    let rows = p.rows();
    let cols = p.cols();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for k in 0..rows {
        let mut r = vec![0.0; rows];
        r[k] = 1.0;
        // Two rounds of modified Gram-Schmidt for numerical safety.
        for _ in 0..2 {
            for c in 0..cols {
                if c == slot {
                    continue;
                }
                let pc = p.col(c);
                let proj: f64 = pc.iter().zip(r.iter()).map(|(a, b)| a * b).sum();
                for (ri, &pci) in r.iter_mut().zip(pc.iter()) {
                    *ri -= proj * pci;
                }
            }
        }
        let n = r.iter().map(|x| x * x).sum::<f64>().sqrt();
        if best.as_ref().map_or(true, |(bn, _)| n > *bn) {
            best = Some((n, r));
        }
        if n > 0.9 {
            break;
        }
    }
    let (n, r) = best.expect("rows >= 1");
    assert!(n > 1e-8, "orthonormal completion failed");
    for (pd, rd) in p.col_mut(slot).iter_mut().zip(r.iter()) {
        *pd = rd / n;
    }
}

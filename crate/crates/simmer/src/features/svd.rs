//! Truncated SVD by seeded orthogonal iteration (block power method) with
//! Gram-Schmidt re-orthonormalization and a small Jacobi eigensolve for the
//! Rayleigh-Ritz extraction. Deterministic given the seed; no external
//! linear-algebra dependency.

use rand::Rng;
use thiserror::Error;

use crate::seeded::substream;

#[derive(Debug, Error)]
pub enum SvdError {
    #[error("rank k must be at least 1")]
    BadRank,
    #[error("matrix is all zero")]
    AllZero,
    #[error("vector length {got} does not match expected {expected}")]
    DimensionMismatch { got: usize, expected: usize },
}

/// Sparse matrix as coordinate triplets; enough for the matvec work here.
#[derive(Debug, Clone)]
pub struct SparseMatrix {
    pub rows: usize,
    pub cols: usize,
    pub triplets: Vec<(usize, usize, f64)>,
}

impl SparseMatrix {
    pub fn from_dense(rows: usize, cols: usize, data: &[f64]) -> SparseMatrix {
        assert_eq!(data.len(), rows * cols);
        let triplets = (0..rows)
            .flat_map(|i| (0..cols).map(move |j| (i, j, data[i * cols + j])))
            .filter(|&(_, _, v)| v != 0.0)
            .collect();
        SparseMatrix {
            rows,
            cols,
            triplets,
        }
    }

    /// y = A x
    fn apply(&self, x: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        for &(i, j, v) in &self.triplets {
            y[i] += v * x[j];
        }
    }

    /// y = A^T x
    fn apply_transpose(&self, x: &[f64], y: &mut [f64]) {
        y.fill(0.0);
        for &(i, j, v) in &self.triplets {
            y[j] += v * x[i];
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.triplets
            .iter()
            .map(|&(_, _, v)| v * v)
            .sum::<f64>()
            .sqrt()
    }
}

/// Rank-k factorization W ~= U diag(sigma) V^T with orthonormal U, V
/// columns and sigma sorted descending. Singular values below
/// `tol * sigma_1` are truncated, shrinking k.
#[derive(Debug, Clone)]
pub struct LowRankBasis {
    pub k: usize,
    pub singular_values: Vec<f64>,
    /// Columns of U, each of length `rows`.
    pub left: Vec<Vec<f64>>,
    /// Columns of V, each of length `cols`.
    pub right: Vec<Vec<f64>>,
}

impl LowRankBasis {
    /// Project an ingredient presence vector into the community space:
    /// Sigma_k^-1 V_k^T f.
    pub fn community_features(&self, f: &[f64]) -> Result<Vec<f64>, SvdError> {
        let n = self.right.first().map_or(0, Vec::len);
        if f.len() != n {
            return Err(SvdError::DimensionMismatch {
                got: f.len(),
                expected: n,
            });
        }
        Ok((0..self.k)
            .map(|j| dot(&self.right[j], f) / self.singular_values[j])
            .collect())
    }

    /// Squared Frobenius norm of W - U_k Sigma_k V_k^T.
    pub fn reconstruction_error(&self, w: &SparseMatrix) -> f64 {
        let mut dense = vec![0.0; w.rows * w.cols];
        for &(i, j, v) in &w.triplets {
            dense[i * w.cols + j] = v;
        }
        for t in 0..self.k {
            let s = self.singular_values[t];
            for i in 0..w.rows {
                let ui = self.left[t][i] * s;
                for j in 0..w.cols {
                    dense[i * w.cols + j] -= ui * self.right[t][j];
                }
            }
        }
        dense.iter().map(|v| v * v).sum()
    }
}

pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Top-k singular triplets of `w` by orthogonal iteration on W^T W.
///
/// `k` is clamped to min(rows, cols). Deterministic for a fixed seed;
/// iteration stops when the subspace stops moving (Frobenius change below
/// 1e-10) or after 1000 rounds.
pub fn svd_lowrank(
    w: &SparseMatrix,
    k: usize,
    tol: f64,
    seed: u64,
) -> Result<LowRankBasis, SvdError> {
    if k == 0 {
        return Err(SvdError::BadRank);
    }
    if w.triplets.iter().all(|&(_, _, v)| v == 0.0) {
        return Err(SvdError::AllZero);
    }
    let n = w.cols;
    let k_eff = k.min(w.rows).min(w.cols);
    let block = (k_eff + 4).min(n);

    let mut rng = substream(seed, "svd-init");
    let mut q: Vec<Vec<f64>> = (0..block)
        .map(|_| (0..n).map(|_| rng.random::<f64>() - 0.5).collect())
        .collect();
    orthonormalize(&mut q);

    let mut scratch_m = vec![0.0; w.rows];
    let mut scratch_n = vec![0.0; n];
    for _ in 0..1000 {
        let mut z: Vec<Vec<f64>> = Vec::with_capacity(block);
        for col in &q {
            w.apply(col, &mut scratch_m);
            w.apply_transpose(&scratch_m, &mut scratch_n);
            z.push(scratch_n.clone());
        }
        let old = q.clone();
        q = z;
        orthonormalize(&mut q);
        // Distance of the new basis from the old subspace.
        let mut change = 0.0;
        for col in &q {
            let mut residual = col.clone();
            for old_col in &old {
                let coeff = dot(old_col, col);
                for (r, o) in residual.iter_mut().zip(old_col) {
                    *r -= coeff * o;
                }
            }
            change += dot(&residual, &residual);
        }
        if change.sqrt() < 1e-10 {
            break;
        }
    }

    // Rayleigh-Ritz on the block: M = (WQ)^T (WQ), eigenvectors rotate Q.
    let wq: Vec<Vec<f64>> = q
        .iter()
        .map(|col| {
            w.apply(col, &mut scratch_m);
            scratch_m.clone()
        })
        .collect();
    let mut m = vec![0.0; block * block];
    for i in 0..block {
        for j in i..block {
            let v = dot(&wq[i], &wq[j]);
            m[i * block + j] = v;
            m[j * block + i] = v;
        }
    }
    let (mut eigenvalues, rotation) = jacobi_eigen(&m, block);

    let mut order: Vec<usize> = (0..block).collect();
    order.sort_by(|&a, &b| eigenvalues[b].total_cmp(&eigenvalues[a]));
    eigenvalues = order.iter().map(|&i| eigenvalues[i]).collect();

    let sigma_1 = eigenvalues[0].max(0.0).sqrt();
    if sigma_1 == 0.0 {
        return Err(SvdError::AllZero);
    }
    let mut singular_values = Vec::new();
    let mut right = Vec::new();
    let mut left = Vec::new();
    for (rank, &col) in order.iter().enumerate().take(k_eff) {
        let sigma = eigenvalues[rank].max(0.0).sqrt();
        if sigma <= tol * sigma_1 {
            break;
        }
        // v = Q * rotation[:, col]
        let mut v = vec![0.0; n];
        for (b, q_col) in q.iter().enumerate() {
            let coeff = rotation[b * block + col];
            for (vi, qi) in v.iter_mut().zip(q_col) {
                *vi += coeff * qi;
            }
        }
        w.apply(&v, &mut scratch_m);
        let u: Vec<f64> = scratch_m.iter().map(|x| x / sigma).collect();
        singular_values.push(sigma);
        right.push(v);
        left.push(u);
    }
    Ok(LowRankBasis {
        k: singular_values.len(),
        singular_values,
        left,
        right,
    })
}

/// Modified Gram-Schmidt. A column that collapses into the span of the
/// previous ones (the matrix has lower rank than the block) is reseeded
/// from standard basis vectors and re-orthogonalized, keeping Q
/// orthonormal for the Rayleigh-Ritz step.
fn orthonormalize(cols: &mut [Vec<f64>]) {
    let n = cols.first().map_or(0, Vec::len);
    for i in 0..cols.len() {
        let mut reseed = 0usize;
        loop {
            let pre_norm = dot(&cols[i], &cols[i]).sqrt();
            for j in 0..i {
                let coeff = dot(&cols[j], &cols[i]);
                let (left, right) = cols.split_at_mut(i);
                for (x, y) in right[0].iter_mut().zip(&left[j]) {
                    *x -= coeff * y;
                }
            }
            let norm = dot(&cols[i], &cols[i]).sqrt();
            if norm > 1e-10 * pre_norm.max(1e-300) && norm > 0.0 {
                for x in cols[i].iter_mut() {
                    *x /= norm;
                }
                break;
            }
            if reseed > n {
                // No independent direction left; leave a zero column.
                cols[i].fill(0.0);
                break;
            }
            let pos = (i + reseed) % n;
            cols[i].fill(0.0);
            cols[i][pos] = 1.0;
            reseed += 1;
        }
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix (row-major,
/// size n). Returns (eigenvalues, eigenvectors as a row-major matrix whose
/// column c is the eigenvector of eigenvalue c).
pub fn jacobi_eigen(matrix: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut a = matrix.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm == 0.0 {
        return (vec![0.0; n], v);
    }
    for _sweep in 0..100 {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() < 1e-14 * norm {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let app = a[p * n + p];
                let aqq = a[q * n + q];
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for i in 0..n {
                    let aip = a[i * n + p];
                    let aiq = a[i * n + q];
                    a[i * n + p] = c * aip - s * aiq;
                    a[i * n + q] = s * aip + c * aiq;
                }
                for j in 0..n {
                    let apj = a[p * n + j];
                    let aqj = a[q * n + j];
                    a[p * n + j] = c * apj - s * aqj;
                    a[q * n + j] = s * apj + c * aqj;
                }
                for i in 0..n {
                    let vip = v[i * n + p];
                    let viq = v[i * n + q];
                    v[i * n + p] = c * vip - s * viq;
                    v[i * n + q] = s * vip + c * viq;
                }
            }
        }
    }
    let eigenvalues = (0..n).map(|i| a[i * n + i]).collect();
    (eigenvalues, v)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_unit_singular_values() {
        let mut data = vec![0.0; 25];
        for i in 0..5 {
            data[i * 5 + i] = 1.0;
        }
        let w = SparseMatrix::from_dense(5, 5, &data);
        let basis = svd_lowrank(&w, 5, 1e-8, 1).unwrap();
        assert_eq!(basis.k, 5);
        for sigma in &basis.singular_values {
            assert!((sigma - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn rank_one_reconstructs_exactly() {
        let u = [0.6, 0.8, 0.0];
        let v = [0.0, 1.0, 0.0, 0.0];
        let mut data = vec![0.0; 12];
        for i in 0..3 {
            for j in 0..4 {
                data[i * 4 + j] = 2.0 * u[i] * v[j];
            }
        }
        let w = SparseMatrix::from_dense(3, 4, &data);
        let basis = svd_lowrank(&w, 1, 1e-8, 2).unwrap();
        assert_eq!(basis.k, 1);
        assert!((basis.singular_values[0] - 2.0).abs() < 1e-9);
        assert!(basis.reconstruction_error(&w) < 1e-16);
    }

    #[test]
    fn orthonormal_within_tolerance() {
        let mut rng = substream(5, "test-matrix");
        let data: Vec<f64> = (0..100).map(|_| rng.random::<f64>() - 0.5).collect();
        let w = SparseMatrix::from_dense(10, 10, &data);
        let basis = svd_lowrank(&w, 4, 1e-8, 3).unwrap();
        for i in 0..basis.k {
            for j in 0..basis.k {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((dot(&basis.right[i], &basis.right[j]) - expect).abs() < 1e-8);
                assert!((dot(&basis.left[i], &basis.left[j]) - expect).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn matches_dense_eigensolver_oracle() {
        // Oracle: full Jacobi eigendecomposition of W^T W (dense, all
        // eigenvalues), independent of the iterative path.
        let mut rng = substream(9, "test-matrix");
        for trial in 0..5 {
            let n = 6 + trial;
            let data: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
            let w = SparseMatrix::from_dense(n, n, &data);
            let k = 3;
            let basis = svd_lowrank(&w, k, 1e-10, trial as u64).unwrap();

            let mut gram = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    let mut sum = 0.0;
                    for r in 0..n {
                        sum += data[r * n + i] * data[r * n + j];
                    }
                    gram[i * n + j] = sum;
                }
            }
            let (mut eig, _) = jacobi_eigen(&gram, n);
            eig.sort_by(|a, b| b.total_cmp(a));
            for (rank, sigma) in basis.singular_values.iter().enumerate() {
                let expected = eig[rank].max(0.0).sqrt();
                assert!(
                    (sigma - expected).abs() <= 1e-6 * expected.max(1e-12),
                    "trial {trial} rank {rank}: {sigma} vs {expected}"
                );
            }
        }
    }

    #[test]
    fn zero_matrix_rejected() {
        let w = SparseMatrix::from_dense(3, 3, &[0.0; 9]);
        assert!(matches!(svd_lowrank(&w, 2, 1e-8, 1), Err(SvdError::AllZero)));
    }

    #[test]
    fn community_features_rank_one_case() {
        // W = u v^T (sigma = 1): Sigma^-1 V^T e_i = v_i.
        let u = [1.0, 0.0];
        let v = [0.6, 0.8];
        let mut data = vec![0.0; 4];
        for i in 0..2 {
            for j in 0..2 {
                data[i * 2 + j] = u[i] * v[j];
            }
        }
        let w = SparseMatrix::from_dense(2, 2, &data);
        let basis = svd_lowrank(&w, 1, 1e-8, 4).unwrap();
        let e0 = [1.0, 0.0];
        let feat = basis.community_features(&e0).unwrap();
        assert!((feat[0].abs() - 0.6).abs() < 1e-9);

        // Scaled rank-1 (sigma = 2): the value becomes v_i / sigma.
        let data2: Vec<f64> = data.iter().map(|x| 2.0 * x).collect();
        let w2 = SparseMatrix::from_dense(2, 2, &data2);
        let basis2 = svd_lowrank(&w2, 1, 1e-8, 4).unwrap();
        let feat2 = basis2.community_features(&e0).unwrap();
        assert!((feat2[0].abs() - 0.3).abs() < 1e-9);
    }

    #[test]
    fn community_features_linear_in_disjoint_vectors() {
        let mut rng = substream(11, "test-matrix");
        let data: Vec<f64> = (0..36).map(|_| rng.random::<f64>()).collect();
        let w = SparseMatrix::from_dense(6, 6, &data);
        let basis = svd_lowrank(&w, 3, 1e-8, 5).unwrap();
        let f1 = [1.0, 0.0, 1.0, 0.0, 0.0, 0.0];
        let f2 = [0.0, 1.0, 0.0, 0.0, 1.0, 0.0];
        let sum: Vec<f64> = f1.iter().zip(&f2).map(|(a, b)| a + b).collect();
        let a = basis.community_features(&f1).unwrap();
        let b = basis.community_features(&f2).unwrap();
        let c = basis.community_features(&sum).unwrap();
        for j in 0..basis.k {
            assert!((a[j] + b[j] - c[j]).abs() < 1e-10);
        }
    }

    #[test]
    fn truncation_prefix_stability() {
        // First k' columns of the k-basis equal the k'-basis (same seed).
        let mut rng = substream(13, "test-matrix");
        let data: Vec<f64> = (0..64).map(|_| rng.random::<f64>() - 0.2).collect();
        let w = SparseMatrix::from_dense(8, 8, &data);
        let big = svd_lowrank(&w, 5, 1e-10, 6).unwrap();
        let small = svd_lowrank(&w, 2, 1e-10, 6).unwrap();
        for rank in 0..small.k {
            assert!(
                (big.singular_values[rank] - small.singular_values[rank]).abs()
                    < 1e-7 * big.singular_values[rank]
            );
        }
    }

    #[test]
    fn reconstruction_error_bounded_by_tail() {
        let mut rng = substream(17, "test-matrix");
        let n = 7;
        let data: Vec<f64> = (0..n * n).map(|_| rng.random::<f64>() - 0.5).collect();
        let w = SparseMatrix::from_dense(n, n, &data);
        let k = 3;
        let basis = svd_lowrank(&w, k, 1e-10, 7).unwrap();

        let mut gram = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut sum = 0.0;
                for r in 0..n {
                    sum += data[r * n + i] * data[r * n + j];
                }
                gram[i * n + j] = sum;
            }
        }
        let (mut eig, _) = jacobi_eigen(&gram, n);
        eig.sort_by(|a, b| b.total_cmp(a));
        let tail: f64 = eig[k..].iter().map(|&l| l.max(0.0)).sum();
        let err = basis.reconstruction_error(&w);
        assert!(err <= tail + 1e-6, "err {err} tail {tail}");
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let w = SparseMatrix::from_dense(2, 2, &[1.0, 0.0, 0.0, 1.0]);
        let basis = svd_lowrank(&w, 1, 1e-8, 1).unwrap();
        assert!(matches!(
            basis.community_features(&[1.0, 2.0, 3.0]),
            Err(SvdError::DimensionMismatch { .. })
        ));
    }
}

//! Small dense and sparse linear-algebra kernels used by the forward solver.
//!
//! The sparse path is a symmetric CSR matrix factored by an envelope (skyline)
//! Cholesky after reverse Cuthill-McKee reordering. FEM systems from 2D disk
//! meshes have small envelopes under RCM, so the direct factorization is both
//! fast and bit-deterministic.

use crate::error::{EitError, Result};

/// Symmetric sparse matrix in CSR form. Stores the full pattern (both
/// triangles) so matrix-vector products and row sums are direct.
#[derive(Debug, Clone)]
pub struct CsrMatrix {
    pub n: usize,
    pub row_ptr: Vec<usize>,
    pub col_idx: Vec<usize>,
    pub values: Vec<f64>,
}

impl CsrMatrix {
    /// Build from unsorted (row, col, value) triplets, summing duplicates.
    pub fn from_triplets(n: usize, triplets: &[(usize, usize, f64)]) -> Self {
        let mut counts = vec![0usize; n + 1];
        for &(r, _, _) in triplets {
            counts[r + 1] += 1;
        }
        for i in 0..n {
            counts[i + 1] += counts[i];
        }
        let mut cols = vec![0usize; triplets.len()];
        let mut vals = vec![0.0f64; triplets.len()];
        let mut cursor = counts.clone();
        for &(r, c, v) in triplets {
            let k = cursor[r];
            cols[k] = c;
            vals[k] = v;
            cursor[r] += 1;
        }
        // sort each row by column and merge duplicates
        let mut row_ptr = vec![0usize; n + 1];
        let mut col_idx = Vec::with_capacity(triplets.len());
        let mut values = Vec::with_capacity(triplets.len());
        for r in 0..n {
            let (lo, hi) = (counts[r], counts[r + 1]);
            let mut row: Vec<(usize, f64)> =
                cols[lo..hi].iter().copied().zip(vals[lo..hi].iter().copied()).collect();
            row.sort_by_key(|&(c, _)| c);
            let mut j = 0;
            while j < row.len() {
                let c = row[j].0;
                let mut v = row[j].1;
                j += 1;
                while j < row.len() && row[j].0 == c {
                    v += row[j].1;
                    j += 1;
                }
                col_idx.push(c);
                values.push(v);
            }
            row_ptr[r + 1] = col_idx.len();
        }
        CsrMatrix { n, row_ptr, col_idx, values }
    }

    /// y = A x
    pub fn mul_vec(&self, x: &[f64]) -> Vec<f64> {
        debug_assert_eq!(x.len(), self.n);
        let mut y = vec![0.0; self.n];
        for r in 0..self.n {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            y[r] = acc;
        }
        y
    }

    pub fn row_sum(&self, r: usize) -> f64 {
        self.values[self.row_ptr[r]..self.row_ptr[r + 1]].iter().sum()
    }

    pub fn get(&self, r: usize, c: usize) -> f64 {
        for k in self.row_ptr[r]..self.row_ptr[r + 1] {
            if self.col_idx[k] == c {
                return self.values[k];
            }
        }
        0.0
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        let mut d = vec![vec![0.0; self.n]; self.n];
        for r in 0..self.n {
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                d[r][self.col_idx[k]] = self.values[k];
            }
        }
        d
    }
}

/// Reverse Cuthill-McKee ordering of a symmetric sparsity pattern.
/// Returns `perm` where `perm[new] = old`.
pub fn reverse_cuthill_mckee(a: &CsrMatrix) -> Vec<usize> {
    let n = a.n;
    let degree: Vec<usize> = (0..n).map(|r| a.row_ptr[r + 1] - a.row_ptr[r]).collect();
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = std::collections::VecDeque::new();

    // process every connected component from its minimum-degree node
    loop {
        let start = match (0..n).filter(|&i| !visited[i]).min_by_key(|&i| (degree[i], i)) {
            Some(s) => s,
            None => break,
        };
        visited[start] = true;
        queue.push_back(start);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut nbrs: Vec<usize> = (a.row_ptr[u]..a.row_ptr[u + 1])
                .map(|k| a.col_idx[k])
                .filter(|&v| v != u && !visited[v])
                .collect();
            nbrs.sort_by_key(|&v| (degree[v], v));
            for v in nbrs {
                if !visited[v] {
                    visited[v] = true;
                    queue.push_back(v);
                }
            }
        }
    }
    order.reverse();
    order
}

/// Envelope (skyline) Cholesky factorization of an SPD matrix.
///
/// The factor stores, for every row, the contiguous band from the first
/// nonzero column of that row up to the diagonal.
#[derive(Debug, Clone)]
pub struct SkylineCholesky {
    n: usize,
    /// first stored column per row
    first: Vec<usize>,
    /// start of each row's band in `data`
    offsets: Vec<usize>,
    data: Vec<f64>,
    /// perm[new] = old
    perm: Vec<usize>,
    /// inv_perm[old] = new
    inv_perm: Vec<usize>,
}

impl SkylineCholesky {
    /// Factor `a` (full symmetric CSR) after RCM reordering.
    /// Fails if a diagonal pivot is not strictly positive.
    pub fn factor(a: &CsrMatrix) -> Result<Self> {
        let n = a.n;
        let perm = reverse_cuthill_mckee(a);
        let mut inv_perm = vec![0usize; n];
        for (new, &old) in perm.iter().enumerate() {
            inv_perm[old] = new;
        }

        // envelope: first nonzero column (in new ordering) per row
        let mut first = vec![0usize; n];
        for new_r in 0..n {
            let old_r = perm[new_r];
            let mut lo = new_r;
            for k in a.row_ptr[old_r]..a.row_ptr[old_r + 1] {
                let new_c = inv_perm[a.col_idx[k]];
                if new_c < lo {
                    lo = new_c;
                }
            }
            first[new_r] = lo;
        }
        let mut offsets = vec![0usize; n + 1];
        for r in 0..n {
            offsets[r + 1] = offsets[r] + (r - first[r] + 1);
        }
        let mut data = vec![0.0f64; offsets[n]];
        for new_r in 0..n {
            let old_r = perm[new_r];
            for k in a.row_ptr[old_r]..a.row_ptr[old_r + 1] {
                let new_c = inv_perm[a.col_idx[k]];
                if new_c <= new_r {
                    data[offsets[new_r] + (new_c - first[new_r])] = a.values[k];
                }
            }
        }

        // in-place envelope Cholesky, row by row
        for i in 0..n {
            let fi = first[i];
            for j in fi..i {
                let fj = first[j];
                let lo = fi.max(fj);
                let mut s = data[offsets[i] + (j - fi)];
                // dot of row i and row j over columns [lo, j)
                let oi = offsets[i] + (lo - fi);
                let oj = offsets[j] + (lo - fj);
                let len = j - lo;
                for t in 0..len {
                    s -= data[oi + t] * data[oj + t];
                }
                let djj = data[offsets[j] + (j - fj)];
                data[offsets[i] + (j - fi)] = s / djj;
            }
            let mut s = data[offsets[i] + (i - fi)];
            for t in 0..(i - fi) {
                let v = data[offsets[i] + t];
                s -= v * v;
            }
            if s <= 0.0 || !s.is_finite() {
                return Err(EitError::SolveFailed(format!(
                    "non-positive pivot {s:.3e} at row {i}; matrix is not SPD"
                )));
            }
            data[offsets[i] + (i - fi)] = s.sqrt();
        }

        Ok(SkylineCholesky { n, first, offsets, data, perm, inv_perm })
    }

    /// Solve A x = b.
    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        debug_assert_eq!(b.len(), self.n);
        let n = self.n;
        // forward: L y = P b
        let mut y = vec![0.0f64; n];
        for i in 0..n {
            let fi = self.first[i];
            let mut s = b[self.perm[i]];
            let oi = self.offsets[i];
            for (t, yj) in y[fi..i].iter().enumerate() {
                s -= self.data[oi + t] * yj;
            }
            y[i] = s / self.data[oi + (i - fi)];
        }
        // backward: L^T z = y
        for i in (0..n).rev() {
            let fi = self.first[i];
            let oi = self.offsets[i];
            let zi = y[i] / self.data[oi + (i - fi)];
            y[i] = zi;
            for t in 0..(i - fi) {
                y[fi + t] -= self.data[oi + t] * zi;
            }
        }
        // un-permute
        let mut x = vec![0.0f64; n];
        for new in 0..n {
            x[self.perm[new]] = y[new];
        }
        x
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// used only by diagnostics
    pub fn inv_perm(&self) -> &[usize] {
        &self.inv_perm
    }
}

/// Invert a small dense matrix (row-major) by Gauss-Jordan with partial
/// pivoting. Returns the inverse and a 1-norm condition estimate
/// `||A||_1 * ||A^-1||_1`.
pub fn invert_dense(a: &[Vec<f64>]) -> Result<(Vec<Vec<f64>>, f64)> {
    let n = a.len();
    for row in a {
        if row.len() != n {
            return Err(EitError::ShapeMismatch(format!(
                "matrix is not square: {}x{}",
                n,
                row.len()
            )));
        }
    }
    let norm_a = one_norm(a);
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&i, &j| m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap())
            .unwrap();
        let pivot = m[pivot_row][col];
        if pivot.abs() < 1e-300 {
            return Err(EitError::SingularMatrix { name: "dense".into(), cond: f64::INFINITY });
        }
        m.swap(col, pivot_row);
        inv.swap(col, pivot_row);
        let inv_pivot = 1.0 / m[col][col];
        for j in 0..n {
            m[col][j] *= inv_pivot;
            inv[col][j] *= inv_pivot;
        }
        for i in 0..n {
            if i != col {
                let f = m[i][col];
                if f != 0.0 {
                    for j in 0..n {
                        m[i][j] -= f * m[col][j];
                        inv[i][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    let cond = norm_a * one_norm(&inv);
    Ok((inv, cond))
}

fn one_norm(a: &[Vec<f64>]) -> f64 {
    let n = a.len();
    (0..n)
        .map(|j| a.iter().map(|row| row[j].abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigenvalues of a symmetric dense matrix by cyclic Jacobi rotations.
/// Adequate for the small matrices used in diagnostics and tests.
pub fn symmetric_eigenvalues(a: &[Vec<f64>]) -> Vec<f64> {
    let n = a.len();
    let mut m: Vec<Vec<f64>> = a.to_vec();
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..n {
            for j in (i + 1)..n {
                off += m[i][j] * m[i][j];
            }
        }
        if off.sqrt() < 1e-14 * (1.0 + one_norm(&m)) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                if m[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
    }
    let mut eigs: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    eigs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    eigs
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn laplacian_1d(n: usize) -> CsrMatrix {
        let mut t = Vec::new();
        for i in 0..n {
            t.push((i, i, 2.0));
            if i > 0 {
                t.push((i, i - 1, -1.0));
            }
            if i + 1 < n {
                t.push((i, i + 1, -1.0));
            }
        }
        CsrMatrix::from_triplets(n, &t)
    }

    #[test]
    fn csr_merges_duplicates_and_multiplies() {
        let a = CsrMatrix::from_triplets(2, &[(0, 0, 1.0), (0, 0, 2.0), (0, 1, 1.0), (1, 1, 4.0)]);
        assert_eq!(a.get(0, 0), 3.0);
        let y = a.mul_vec(&[1.0, 2.0]);
        assert_eq!(y, vec![5.0, 8.0]);
    }

    #[test]
    fn skyline_solves_tridiagonal() {
        let n = 50;
        let a = laplacian_1d(n);
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin()).collect();
        let b = a.mul_vec(&x_true);
        let chol = SkylineCholesky::factor(&a).unwrap();
        let x = chol.solve(&b);
        for i in 0..n {
            assert_relative_eq!(x[i], x_true[i], epsilon = 1e-10);
        }
    }

    #[test]
    fn skyline_rejects_indefinite() {
        let a = CsrMatrix::from_triplets(2, &[(0, 0, 1.0), (0, 1, 2.0), (1, 0, 2.0), (1, 1, 1.0)]);
        assert!(SkylineCholesky::factor(&a).is_err());
    }

    #[test]
    fn dense_inverse_and_condition() {
        let a = vec![vec![2.0, 0.0], vec![0.0, 4.0]];
        let (inv, cond) = invert_dense(&a).unwrap();
        assert_relative_eq!(inv[0][0], 0.5);
        assert_relative_eq!(inv[1][1], 0.25);
        assert_relative_eq!(cond, 2.0); // 4 * 0.5
    }

    #[test]
    fn dense_inverse_detects_singular() {
        let a = vec![vec![1.0, 1.0], vec![1.0, 1.0]];
        assert!(invert_dense(&a).is_err());
    }

    #[test]
    fn jacobi_eigenvalues_of_known_matrix() {
        // eigenvalues of [[2,1],[1,2]] are 1 and 3
        let a = vec![vec![2.0, 1.0], vec![1.0, 2.0]];
        let e = symmetric_eigenvalues(&a);
        assert_relative_eq!(e[0], 1.0, epsilon = 1e-10);
        assert_relative_eq!(e[1], 3.0, epsilon = 1e-10);
    }

    #[test]
    fn rcm_is_a_permutation() {
        let a = laplacian_1d(17);
        let mut p = reverse_cuthill_mckee(&a);
        p.sort_unstable();
        assert_eq!(p, (0..17).collect::<Vec<_>>());
    }
}

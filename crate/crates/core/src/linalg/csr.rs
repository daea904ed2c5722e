use std::fmt;

use crate::error::{dim_err, Error, Result};
use crate::linalg::DenseMatrix;

/// Sparse matrix in compressed-row form.
///
/// Always canonical: column indices are strictly increasing within each row
/// and in bounds. Explicitly stored zeros are allowed (they carry pattern
/// information for the incomplete factorizations).
#[derive(Clone, PartialEq)]
pub struct CsrMatrix {
    nrows: usize,
    ncols: usize,
    row_ptr: Vec<usize>,
    col_idx: Vec<usize>,
    values: Vec<f64>,
}

impl fmt::Debug for CsrMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CsrMatrix")
            .field("nrows", &self.nrows)
            .field("ncols", &self.ncols)
            .field("nnz", &self.nnz())
            .finish()
    }
}

impl CsrMatrix {
    /// Builds a matrix from raw CSR arrays, checking every structural invariant.
    pub fn new(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if row_ptr.len() != nrows + 1 {
            return Err(dim_err(format!(
                "row_ptr has length {}, expected {}",
                row_ptr.len(),
                nrows + 1
            )));
        }
        if row_ptr[0] != 0 {
            return Err(Error::InvalidInput("row_ptr[0] must be 0".into()));
        }
        if col_idx.len() != values.len() || row_ptr[nrows] != col_idx.len() {
            return Err(dim_err(format!(
                "row_ptr[nrows] = {}, col_idx {}, values {}",
                row_ptr[nrows],
                col_idx.len(),
                values.len()
            )));
        }
        for i in 0..nrows {
            if row_ptr[i] > row_ptr[i + 1] {
                return Err(Error::InvalidInput(format!("row_ptr decreases at row {i}")));
            }
            let cols = &col_idx[row_ptr[i]..row_ptr[i + 1]];
            for (k, &c) in cols.iter().enumerate() {
                if c >= ncols {
                    return Err(dim_err(format!("column {c} out of bounds in row {i}")));
                }
                if k > 0 && cols[k - 1] >= c {
                    return Err(Error::InvalidInput(format!(
                        "columns not strictly increasing in row {i}"
                    )));
                }
            }
        }
        Ok(Self { nrows, ncols, row_ptr, col_idx, values })
    }

    /// Skips validation; callers must produce canonical arrays.
    pub(crate) fn from_parts_unchecked(
        nrows: usize,
        ncols: usize,
        row_ptr: Vec<usize>,
        col_idx: Vec<usize>,
        values: Vec<f64>,
    ) -> Self {
        debug_assert!(Self::new(nrows, ncols, row_ptr.clone(), col_idx.clone(), values.clone()).is_ok());
        Self { nrows, ncols, row_ptr, col_idx, values }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicates are summed.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: &[(usize, usize, f64)]) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, f64)> = Vec::with_capacity(triplets.len());
        for &(i, j, v) in triplets {
            if i >= nrows || j >= ncols {
                return Err(dim_err(format!("entry ({i}, {j}) outside {nrows}x{ncols}")));
            }
            sorted.push((i, j, v));
        }
        // stable sort keeps duplicate summation order deterministic
        sorted.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));

        let mut row_ptr = vec![0usize; nrows + 1];
        let mut col_idx = Vec::with_capacity(sorted.len());
        let mut values: Vec<f64> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                *values.last_mut().unwrap() += v;
                continue;
            }
            row_ptr[i + 1] += 1;
            col_idx.push(j);
            values.push(v);
            last = Some((i, j));
        }
        for i in 0..nrows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Ok(Self::from_parts_unchecked(nrows, ncols, row_ptr, col_idx, values))
    }

    pub fn identity(n: usize) -> Self {
        Self::from_diagonal(&vec![1.0; n])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        Self::from_parts_unchecked(n, n, (0..=n).collect(), (0..n).collect(), diag.to_vec())
    }

    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Self::from_parts_unchecked(nrows, ncols, vec![0; nrows + 1], Vec::new(), Vec::new())
    }

    /// Converts a dense matrix, keeping only entries with `|a_ij| > drop_tol`.
    pub fn from_dense(a: &DenseMatrix, drop_tol: f64) -> Self {
        let mut row_ptr = Vec::with_capacity(a.nrows() + 1);
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        row_ptr.push(0);
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                let v = a[(i, j)];
                if v.abs() > drop_tol {
                    col_idx.push(j);
                    values.push(v);
                }
            }
            row_ptr.push(col_idx.len());
        }
        Self::from_parts_unchecked(a.nrows(), a.ncols(), row_ptr, col_idx, values)
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    pub fn row_ptr(&self) -> &[usize] {
        &self.row_ptr
    }

    pub fn col_idx(&self) -> &[usize] {
        &self.col_idx
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Column indices and values of row `i`.
    #[inline]
    pub fn row(&self, i: usize) -> (&[usize], &[f64]) {
        let (s, e) = (self.row_ptr[i], self.row_ptr[i + 1]);
        (&self.col_idx[s..e], &self.values[s..e])
    }

    /// Entry `(i, j)`, zero when not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let (cols, vals) = self.row(i);
        match cols.binary_search(&j) {
            Ok(k) => vals[k],
            Err(_) => 0.0,
        }
    }

    /// Iterates `(row, col, value)` in storage order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.nrows).flat_map(move |i| {
            let (cols, vals) = self.row(i);
            cols.iter().zip(vals).map(move |(&j, &v)| (i, j, v))
        })
    }

    /// Main diagonal; missing entries read as zero.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.nrows.min(self.ncols)).map(|i| self.get(i, i)).collect()
    }

    /// `y = A x`.
    pub fn spmv(&self, x: &[f64]) -> Result<Vec<f64>> {
        if x.len() != self.ncols {
            return Err(dim_err(format!(
                "spmv: matrix is {}x{}, vector has length {}",
                self.nrows,
                self.ncols,
                x.len()
            )));
        }
        let mut y = vec![0.0; self.nrows];
        self.spmv_into(x, &mut y);
        Ok(y)
    }

    /// Unchecked `y = A x`, accumulating each row left to right.
    #[inline]
    pub fn spmv_into(&self, x: &[f64], y: &mut [f64]) {
        assert_eq!(x.len(), self.ncols);
        assert_eq!(y.len(), self.nrows);
        for (i, yi) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                acc += self.values[k] * x[self.col_idx[k]];
            }
            *yi = acc;
        }
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.ncols + 1];
        for &j in &self.col_idx {
            counts[j + 1] += 1;
        }
        for j in 0..self.ncols {
            counts[j + 1] += counts[j];
        }
        let row_ptr = counts.clone();
        let mut next = counts;
        let mut col_idx = vec![0usize; self.nnz()];
        let mut values = vec![0.0; self.nnz()];
        for i in 0..self.nrows {
            for k in self.row_ptr[i]..self.row_ptr[i + 1] {
                let j = self.col_idx[k];
                let dst = next[j];
                col_idx[dst] = i;
                values[dst] = self.values[k];
                next[j] += 1;
            }
        }
        Self::from_parts_unchecked(self.ncols, self.nrows, row_ptr, col_idx, values)
    }

    pub fn scaled(&self, alpha: f64) -> Self {
        let mut out = self.clone();
        out.values.iter_mut().for_each(|v| *v *= alpha);
        out
    }

    /// `alpha * self + beta * other` on the union pattern.
    pub fn linear_combination(&self, alpha: f64, other: &CsrMatrix, beta: f64) -> Result<Self> {
        if self.nrows != other.nrows || self.ncols != other.ncols {
            return Err(dim_err(format!(
                "cannot add {}x{} and {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut row_ptr = Vec::with_capacity(self.nrows + 1);
        let mut col_idx = Vec::with_capacity(self.nnz() + other.nnz());
        let mut values = Vec::with_capacity(self.nnz() + other.nnz());
        row_ptr.push(0);
        for i in 0..self.nrows {
            let (ca, va) = self.row(i);
            let (cb, vb) = other.row(i);
            let (mut p, mut q) = (0, 0);
            while p < ca.len() || q < cb.len() {
                let take_a = q >= cb.len() || (p < ca.len() && ca[p] <= cb[q]);
                let take_b = p >= ca.len() || (q < cb.len() && cb[q] <= ca[p]);
                if take_a && take_b {
                    col_idx.push(ca[p]);
                    values.push(alpha * va[p] + beta * vb[q]);
                    p += 1;
                    q += 1;
                } else if take_a {
                    col_idx.push(ca[p]);
                    values.push(alpha * va[p]);
                    p += 1;
                } else {
                    col_idx.push(cb[q]);
                    values.push(beta * vb[q]);
                    q += 1;
                }
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self::from_parts_unchecked(self.nrows, self.ncols, row_ptr, col_idx, values))
    }

    /// `self + shift * I`, inserting diagonal entries where missing.
    pub fn shift_diagonal(&self, shift: f64) -> Result<Self> {
        if !self.is_square() {
            return Err(dim_err("shift_diagonal needs a square matrix"));
        }
        self.linear_combination(1.0, &CsrMatrix::identity(self.nrows), shift)
    }

    /// Sparse product `self * other` (row-wise accumulation with a dense marker).
    pub fn matmul(&self, other: &CsrMatrix) -> Result<Self> {
        if self.ncols != other.nrows {
            return Err(dim_err(format!(
                "cannot multiply {}x{} by {}x{}",
                self.nrows, self.ncols, other.nrows, other.ncols
            )));
        }
        let mut acc = vec![0.0; other.ncols];
        let mut marker = vec![usize::MAX; other.ncols];
        let mut row_cols: Vec<usize> = Vec::new();
        let mut row_ptr = vec![0usize];
        let mut col_idx = Vec::new();
        let mut values = Vec::new();
        for i in 0..self.nrows {
            row_cols.clear();
            let (ca, va) = self.row(i);
            for (&k, &a_ik) in ca.iter().zip(va) {
                let (cb, vb) = other.row(k);
                for (&j, &b_kj) in cb.iter().zip(vb) {
                    if marker[j] != i {
                        marker[j] = i;
                        acc[j] = 0.0;
                        row_cols.push(j);
                    }
                    acc[j] += a_ik * b_kj;
                }
            }
            row_cols.sort_unstable();
            for &j in &row_cols {
                col_idx.push(j);
                values.push(acc[j]);
            }
            row_ptr.push(col_idx.len());
        }
        Ok(Self::from_parts_unchecked(self.nrows, other.ncols, row_ptr, col_idx, values))
    }

    /// Symmetric to `rel_tol * max|a_ij|`. Structural asymmetry with nonzero
    /// values counts as asymmetric.
    pub fn is_symmetric(&self, rel_tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs();
        let t = self.transpose();
        let diff = match self.linear_combination(1.0, &t, -1.0) {
            Ok(d) => d,
            Err(_) => return false,
        };
        diff.max_abs() <= rel_tol * scale
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut d = DenseMatrix::zeros(self.nrows, self.ncols);
        for (i, j, v) in self.triplets() {
            d[(i, j)] = v;
        }
        d
    }

    /// Largest `|i - j|` over stored entries.
    pub fn bandwidth(&self) -> usize {
        self.triplets().map(|(i, j, _)| i.abs_diff(j)).max().unwrap_or(0)
    }

    /// `P A Pᵀ` where `perm[new] = old`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Result<Self> {
        if !self.is_square() || perm.len() != self.nrows {
            return Err(dim_err("permutation length must match a square matrix"));
        }
        let inv = inverse_permutation(perm)?;
        let triplets: Vec<_> = self.triplets().map(|(i, j, v)| (inv[i], inv[j], v)).collect();
        Self::from_triplets(self.nrows, self.ncols, &triplets)
    }

    /// `A Pᵀ`: column `new` of the result is column `perm[new]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> Result<Self> {
        if perm.len() != self.ncols {
            return Err(dim_err("permutation length must match column count"));
        }
        let inv = inverse_permutation(perm)?;
        let triplets: Vec<_> = self.triplets().map(|(i, j, v)| (i, inv[j], v)).collect();
        Self::from_triplets(self.nrows, self.ncols, &triplets)
    }
}

/// Inverts `perm[new] = old`, validating that it is a bijection.
pub(crate) fn inverse_permutation(perm: &[usize]) -> Result<Vec<usize>> {
    let n = perm.len();
    let mut inv = vec![usize::MAX; n];
    for (new, &old) in perm.iter().enumerate() {
        if old >= n || inv[old] != usize::MAX {
            return Err(Error::InvalidInput("not a permutation".into()));
        }
        inv[old] = new;
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gen_banded;

    #[test]
    fn spmv_examples() {
        let i3 = CsrMatrix::identity(3);
        assert_eq!(i3.spmv(&[1.0, 2.0, 3.0]).unwrap(), vec![1.0, 2.0, 3.0]);

        let t = gen_banded(3, &[-1, 0, 1], &[1.0, 4.0, 1.0]).unwrap();
        assert_eq!(t.spmv(&[1.0, 1.0, 1.0]).unwrap(), vec![5.0, 6.0, 5.0]);

        let z = CsrMatrix::zeros(3, 3);
        assert_eq!(z.spmv(&[7.0, -2.0, 0.5]).unwrap(), vec![0.0; 3]);
    }

    #[test]
    fn spmv_dimension_error() {
        let a = CsrMatrix::identity(3);
        assert!(matches!(a.spmv(&[1.0, 2.0]), Err(Error::Dimension(_))));
    }

    #[test]
    fn transpose_examples() {
        let a = CsrMatrix::from_triplets(3, 3, &[(0, 2, 5.0)]).unwrap();
        let t = a.transpose();
        assert_eq!(t.get(2, 0), 5.0);
        assert_eq!(t.nnz(), 1);

        let s = gen_banded(5, &[-1, 0, 1], &[1.0, 4.0, 1.0]).unwrap();
        assert_eq!(s.transpose(), s);

        let r = CsrMatrix::from_triplets(2, 3, &[(0, 0, 1.0), (0, 2, 2.0), (1, 1, 3.0)]).unwrap();
        let rt = r.transpose();
        assert_eq!((rt.nrows(), rt.ncols(), rt.nnz()), (3, 2, 3));
        assert_eq!(rt.transpose(), r);
    }

    #[test]
    fn triplets_sum_duplicates() {
        let a = CsrMatrix::from_triplets(2, 2, &[(1, 0, 1.0), (0, 0, 2.0), (1, 0, 0.5)]).unwrap();
        assert_eq!(a.nnz(), 2);
        assert_eq!(a.get(1, 0), 1.5);
        assert!(CsrMatrix::from_triplets(2, 2, &[(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn new_rejects_non_canonical() {
        assert!(CsrMatrix::new(1, 3, vec![0, 2], vec![2, 1], vec![1.0, 1.0]).is_err());
        assert!(CsrMatrix::new(1, 3, vec![0, 2], vec![1, 1], vec![1.0, 1.0]).is_err());
        assert!(CsrMatrix::new(1, 2, vec![0, 1], vec![2], vec![1.0]).is_err());
        assert!(CsrMatrix::new(2, 2, vec![0, 1], vec![0], vec![1.0]).is_err());
        assert!(CsrMatrix::new(1, 2, vec![0, 2], vec![0, 1], vec![1.0, 2.0]).is_ok());
    }

    #[test]
    fn matmul_matches_dense() {
        let a = CsrMatrix::from_triplets(2, 3, &[(0, 0, 1.0), (0, 2, 2.0), (1, 1, -1.0)]).unwrap();
        let b = CsrMatrix::from_triplets(3, 2, &[(0, 1, 3.0), (1, 0, 4.0), (2, 0, 5.0)]).unwrap();
        let c = a.matmul(&b).unwrap().to_dense();
        let expect = a.to_dense().matmul(&b.to_dense()).unwrap();
        assert_eq!(c, expect);
    }

    #[test]
    fn permutation_and_bandwidth() {
        let a = gen_banded(4, &[-1, 0, 1], &[1.0, 2.0, 3.0]).unwrap();
        assert_eq!(a.bandwidth(), 1);
        let perm = vec![3, 2, 1, 0];
        let p = a.permute_symmetric(&perm).unwrap();
        assert_eq!(p.get(0, 0), a.get(3, 3));
        assert_eq!(p.get(0, 1), a.get(3, 2));
        assert!(a.permute_symmetric(&[0, 0, 1, 2]).is_err());
    }

    #[test]
    fn symmetry_check() {
        let s = gen_banded(4, &[-1, 0, 1], &[1.0, 4.0, 1.0]).unwrap();
        assert!(s.is_symmetric(1e-12));
        let n = gen_banded(4, &[-1, 0, 1], &[-1.0, 2.0, 0.5]).unwrap();
        assert!(!n.is_symmetric(1e-12));
    }
}

//! Exact and incomplete triangular factorizations.
//!
//! Every factorization is used only through triangular solves; inverses are
//! never formed.

use crate::error::{dim_err, Error, Result};
use crate::linalg::{CsrMatrix, DenseMatrix};

/// Relative pivot threshold for the incomplete factorizations.
pub const PIVOT_REL_TOL: f64 = 1e-14;

/// Largest order for which an exact factorization of a sparse matrix is
/// computed (densely).
pub const DENSE_FACTOR_LIMIT: usize = 2000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FactorKind {
    Lu,
    Ilu0,
    Cholesky,
    Ic0,
}

impl FactorKind {
    pub fn is_incomplete(self) -> bool {
        matches!(self, FactorKind::Ilu0 | FactorKind::Ic0)
    }
}

/// Triangular factor pair with `P A ≈ L U`.
///
/// For `Lu`/`Ilu0` the lower factor has a unit diagonal (stored explicitly);
/// for `Cholesky`/`Ic0` the upper factor is the transpose of the lower one.
/// `perm[i]` is the row of `A` that ended up in position `i`.
#[derive(Debug, Clone)]
pub struct Factorization {
    kind: FactorKind,
    lower: CsrMatrix,
    upper: CsrMatrix,
    perm: Option<Vec<usize>>,
}

impl Factorization {
    pub fn kind(&self) -> FactorKind {
        self.kind
    }

    pub fn lower(&self) -> &CsrMatrix {
        &self.lower
    }

    pub fn upper(&self) -> &CsrMatrix {
        &self.upper
    }

    pub fn perm(&self) -> Option<&[usize]> {
        self.perm.as_deref()
    }

    pub fn dim(&self) -> usize {
        self.lower.nrows()
    }

    /// `Pᵀ L U` as a dense matrix.
    pub fn reconstruct(&self) -> DenseMatrix {
        let lu = self.lower.to_dense().matmul(&self.upper.to_dense()).expect("square factors");
        match &self.perm {
            None => lu,
            Some(perm) => {
                let mut out = DenseMatrix::zeros(lu.nrows(), lu.ncols());
                for (i, &src) in perm.iter().enumerate() {
                    for j in 0..lu.ncols() {
                        out[(src, j)] = lu[(i, j)];
                    }
                }
                out
            }
        }
    }

    /// `x = U⁻¹ L⁻¹ P b`, writing into `out`.
    pub fn solve_into(&self, b: &[f64], out: &mut [f64]) {
        let n = self.dim();
        assert_eq!(b.len(), n);
        assert_eq!(out.len(), n);
        match &self.perm {
            Some(perm) => {
                for (o, &src) in out.iter_mut().zip(perm) {
                    *o = b[src];
                }
            }
            None => out.copy_from_slice(b),
        }
        // forward: diagonal is the last stored entry of each lower row
        for i in 0..n {
            let (cols, vals) = self.lower.row(i);
            let last = cols.len() - 1;
            let mut s = out[i];
            for k in 0..last {
                s -= vals[k] * out[cols[k]];
            }
            out[i] = s / vals[last];
        }
        // backward: diagonal is the first stored entry of each upper row
        for i in (0..n).rev() {
            let (cols, vals) = self.upper.row(i);
            let mut s = out[i];
            for k in 1..cols.len() {
                s -= vals[k] * out[cols[k]];
            }
            out[i] = s / vals[0];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.dim()];
        self.solve_into(b, &mut out);
        out
    }

    fn validate_diagonals(&self) -> Result<()> {
        for i in 0..self.dim() {
            let (lc, lv) = self.lower.row(i);
            let (uc, uv) = self.upper.row(i);
            let lower_ok = lc.last() == Some(&i) && *lv.last().unwrap() != 0.0;
            let upper_ok = uc.first() == Some(&i) && uv[0] != 0.0;
            if !lower_ok || !upper_ok {
                return Err(Error::SingularMatrix(format!("zero diagonal in triangular factor at row {i}")));
            }
        }
        Ok(())
    }
}

/// Applies the (approximate) inverse represented by `f` to `x`.
pub fn apply_inverse(f: &Factorization, x: &[f64]) -> Result<Vec<f64>> {
    if x.len() != f.dim() {
        return Err(dim_err(format!("factor of order {} applied to length {}", f.dim(), x.len())));
    }
    Ok(f.solve(x))
}

fn max_abs_diag(a: &CsrMatrix) -> f64 {
    a.diagonal().iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

fn diag_positions(a: &CsrMatrix) -> Result<Vec<usize>> {
    (0..a.nrows())
        .map(|i| {
            let (cols, _) = a.row(i);
            cols.binary_search(&i)
                .map(|k| a.row_ptr()[i] + k)
                .map_err(|_| Error::PivotBreakdown { row: i, pivot: 0.0 })
        })
        .collect()
}

/// Incomplete LU with zero fill: `L` and `U` keep exactly the pattern of `a`.
pub fn ilu0(a: &CsrMatrix) -> Result<Factorization> {
    if !a.is_square() {
        return Err(dim_err("ilu0 needs a square matrix"));
    }
    let n = a.nrows();
    let diag = diag_positions(a)?;
    let threshold = PIVOT_REL_TOL * max_abs_diag(a);
    let rp = a.row_ptr();
    let ci = a.col_idx();
    let mut w = a.values().to_vec();
    // position of column j in the current row, or usize::MAX
    let mut pos = vec![usize::MAX; n];

    for i in 0..n {
        for k in rp[i]..rp[i + 1] {
            pos[ci[k]] = k;
        }
        for kk in rp[i]..diag[i] {
            let k = ci[kk];
            let l_ik = w[kk] / w[diag[k]];
            w[kk] = l_ik;
            for jj in diag[k] + 1..rp[k + 1] {
                let p = pos[ci[jj]];
                if p != usize::MAX {
                    w[p] -= l_ik * w[jj];
                }
            }
        }
        let pivot = w[diag[i]];
        if !(pivot.abs() >= threshold) || pivot == 0.0 {
            return Err(Error::PivotBreakdown { row: i, pivot });
        }
        for k in rp[i]..rp[i + 1] {
            pos[ci[k]] = usize::MAX;
        }
    }

    let mut l_trip = Vec::with_capacity(a.nnz());
    let mut u_trip = Vec::with_capacity(a.nnz());
    for i in 0..n {
        for k in rp[i]..rp[i + 1] {
            let j = ci[k];
            if j < i {
                l_trip.push((i, j, w[k]));
            } else {
                u_trip.push((i, j, w[k]));
            }
        }
        l_trip.push((i, i, 1.0));
    }
    let f = Factorization {
        kind: FactorKind::Ilu0,
        lower: CsrMatrix::from_triplets(n, n, &l_trip)?,
        upper: CsrMatrix::from_triplets(n, n, &u_trip)?,
        perm: None,
    };
    f.validate_diagonals()?;
    Ok(f)
}

/// Incomplete Cholesky with zero fill on the lower-triangular pattern of `a`.
///
/// Only the lower triangle of `a` is read.
pub fn ic0(a: &CsrMatrix) -> Result<Factorization> {
    if !a.is_square() {
        return Err(dim_err("ic0 needs a square matrix"));
    }
    let n = a.nrows();
    diag_positions(a)?;
    let threshold = PIVOT_REL_TOL * max_abs_diag(a);
    // rows of L: strictly-lower columns/values plus the diagonal
    let mut l_cols: Vec<Vec<usize>> = Vec::with_capacity(n);
    let mut l_vals: Vec<Vec<f64>> = Vec::with_capacity(n);
    let mut l_diag = vec![0.0; n];

    for i in 0..n {
        let (cols, vals) = a.row(i);
        let mut rc = Vec::new();
        let mut rv: Vec<f64> = Vec::new();
        let mut a_ii = 0.0;
        for (&j, &v) in cols.iter().zip(vals) {
            if j > i {
                break;
            }
            if j == i {
                a_ii = v;
                break;
            }
            // l_ij = (a_ij - sum_{k<j} l_ik l_jk) / l_jj over the shared pattern
            let s = sparse_dot(&rc, &rv, &l_cols[j], &l_vals[j]);
            rc.push(j);
            rv.push((v - s) / l_diag[j]);
        }
        let d = a_ii - rv.iter().map(|x| x * x).sum::<f64>();
        if !(d > threshold) {
            return Err(Error::PivotBreakdown { row: i, pivot: d });
        }
        l_diag[i] = d.sqrt();
        l_cols.push(rc);
        l_vals.push(rv);
    }

    let mut row_ptr = vec![0usize];
    let mut col_idx = Vec::new();
    let mut values = Vec::new();
    for i in 0..n {
        col_idx.extend_from_slice(&l_cols[i]);
        values.extend_from_slice(&l_vals[i]);
        col_idx.push(i);
        values.push(l_diag[i]);
        row_ptr.push(col_idx.len());
    }
    let lower = CsrMatrix::new(n, n, row_ptr, col_idx, values)?;
    let upper = lower.transpose();
    Ok(Factorization { kind: FactorKind::Ic0, lower, upper, perm: None })
}

/// Dot product of two sorted sparse vectors.
fn sparse_dot(ca: &[usize], va: &[f64], cb: &[usize], vb: &[f64]) -> f64 {
    let (mut p, mut q, mut s) = (0, 0, 0.0);
    while p < ca.len() && q < cb.len() {
        match ca[p].cmp(&cb[q]) {
            std::cmp::Ordering::Less => p += 1,
            std::cmp::Ordering::Greater => q += 1,
            std::cmp::Ordering::Equal => {
                s += va[p] * vb[q];
                p += 1;
                q += 1;
            }
        }
    }
    s
}

/// Exact dense factorization: LU with partial pivoting or Cholesky.
pub fn factor_dense(a: &DenseMatrix, kind: FactorKind) -> Result<Factorization> {
    if a.nrows() != a.ncols() {
        return Err(dim_err("factor_dense needs a square matrix"));
    }
    match kind {
        FactorKind::Lu => dense_lu(a),
        FactorKind::Cholesky => dense_cholesky(a),
        other => Err(Error::InvalidInput(format!("{other:?} is not an exact dense factorization"))),
    }
}

fn dense_lu(a: &DenseMatrix) -> Result<Factorization> {
    let n = a.nrows();
    let mut w = a.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    let tol = f64::EPSILON * n.max(1) as f64 * a.max_abs();
    for k in 0..n {
        let (piv_row, piv_abs) = (k..n)
            .map(|i| (i, w[(i, k)].abs()))
            .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if piv_abs <= tol || piv_abs == 0.0 {
            return Err(Error::SingularMatrix(format!("pivot {piv_abs:e} in column {k}")));
        }
        if piv_row != k {
            perm.swap(k, piv_row);
            for j in 0..n {
                let t = w[(k, j)];
                w[(k, j)] = w[(piv_row, j)];
                w[(piv_row, j)] = t;
            }
        }
        let pivot = w[(k, k)];
        for i in k + 1..n {
            let l = w[(i, k)] / pivot;
            w[(i, k)] = l;
            if l != 0.0 {
                for j in k + 1..n {
                    w[(i, j)] -= l * w[(k, j)];
                }
            }
        }
    }
    let mut lower = DenseMatrix::identity(n);
    let mut upper = DenseMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            if j < i {
                lower[(i, j)] = w[(i, j)];
            } else {
                upper[(i, j)] = w[(i, j)];
            }
        }
    }
    let f = Factorization {
        kind: FactorKind::Lu,
        lower: CsrMatrix::from_dense(&lower, 0.0),
        upper: CsrMatrix::from_dense(&upper, 0.0),
        perm: Some(perm),
    };
    f.validate_diagonals()?;
    Ok(f)
}

fn dense_cholesky(a: &DenseMatrix) -> Result<Factorization> {
    let n = a.nrows();
    let mut l = DenseMatrix::zeros(n, n);
    let tol = f64::EPSILON * n.max(1) as f64 * a.max_abs();
    for j in 0..n {
        let mut d = a[(j, j)];
        for k in 0..j {
            d -= l[(j, k)] * l[(j, k)];
        }
        if !(d > tol) {
            return Err(Error::SingularMatrix(format!(
                "matrix is not positive definite (pivot {d:e} at row {j})"
            )));
        }
        let ljj = d.sqrt();
        l[(j, j)] = ljj;
        for i in j + 1..n {
            let mut s = a[(i, j)];
            for k in 0..j {
                s -= l[(i, k)] * l[(j, k)];
            }
            l[(i, j)] = s / ljj;
        }
    }
    let lower = CsrMatrix::from_dense(&l, 0.0);
    let upper = lower.transpose();
    Ok(Factorization { kind: FactorKind::Cholesky, lower, upper, perm: None })
}

/// Exact factorization of a sparse matrix, computed densely. Refuses orders
/// above [`DENSE_FACTOR_LIMIT`].
pub fn factor_exact(a: &CsrMatrix, kind: FactorKind) -> Result<Factorization> {
    if a.nrows() > DENSE_FACTOR_LIMIT {
        return Err(Error::Config(format!(
            "exact {kind:?} of order {} exceeds the dense limit {DENSE_FACTOR_LIMIT}",
            a.nrows()
        )));
    }
    factor_dense(&a.to_dense(), kind)
}

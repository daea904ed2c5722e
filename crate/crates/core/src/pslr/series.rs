//! Matrix-free Schur-complement pieces: `M`, the truncated series and its
//! remainder.

use crate::error::{dim_err, Result};
use crate::krylov::LinearOperator;
use crate::linalg::vector::axpy;
use crate::linalg::{CsrMatrix, SaddleSystem};

/// `M = -C⁻¹ B (AᵀA)⁻¹ Bᵀ` applied as two spmvs and two inverse applications.
///
/// `ata_inv` and `c_inv` are any operators acting as `(AᵀA)⁻¹` and `C⁻¹`,
/// normally [`Factorization`](crate::Factorization)s.
pub struct SchurM<'a> {
    b: &'a CsrMatrix,
    bt: &'a CsrMatrix,
    ata_inv: &'a dyn LinearOperator,
    c_inv: &'a dyn LinearOperator,
}

impl<'a> SchurM<'a> {
    pub fn new(
        b: &'a CsrMatrix,
        bt: &'a CsrMatrix,
        ata_inv: &'a dyn LinearOperator,
        c_inv: &'a dyn LinearOperator,
    ) -> Result<Self> {
        let (p, n) = (b.nrows(), b.ncols());
        if bt.nrows() != n || bt.ncols() != p || ata_inv.dim() != n || c_inv.dim() != p {
            return Err(dim_err("SchurM: block dimensions disagree"));
        }
        Ok(Self { b, bt, ata_inv, c_inv })
    }

    /// `v -> B (AᵀA)⁻¹ Bᵀ v`, the part shared by `M` and `S`.
    pub fn apply_bkbt(&self, v: &[f64], out: &mut [f64]) {
        let n = self.bt.nrows();
        let mut t = vec![0.0; n];
        let mut u = vec![0.0; n];
        self.bt.spmv_into(v, &mut t);
        self.ata_inv.apply_into(&t, &mut u);
        self.b.spmv_into(&u, out);
    }
}

/// `M` for the blocks of `sys` with the given inverse operators.
pub fn schur_m_operator<'a>(
    sys: &'a SaddleSystem,
    ata_inv: &'a dyn LinearOperator,
    c_inv: &'a dyn LinearOperator,
) -> Result<SchurM<'a>> {
    SchurM::new(sys.b_block(), sys.bt_block(), ata_inv, c_inv)
}

impl LinearOperator for SchurM<'_> {
    fn dim(&self) -> usize {
        self.b.nrows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let mut w = vec![0.0; self.dim()];
        self.apply_bkbt(x, &mut w);
        self.c_inv.apply_into(&w, y);
        for v in y.iter_mut() {
            *v = -*v;
        }
    }
}

/// Schur complement `S = C + B (AᵀA)⁻¹ Bᵀ` with the same inverse used in `M`.
pub struct SchurComplement<'a> {
    pub(crate) m: SchurM<'a>,
    pub(crate) c: &'a CsrMatrix,
}

impl<'a> SchurComplement<'a> {
    pub fn new(m: SchurM<'a>, c: &'a CsrMatrix) -> Self {
        Self { m, c }
    }
}

impl LinearOperator for SchurComplement<'_> {
    fn dim(&self) -> usize {
        self.c.nrows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let mut w = vec![0.0; self.dim()];
        self.m.apply_bkbt(x, &mut w);
        self.c.spmv_into(x, y);
        axpy(1.0, &w, y);
    }
}

/// `(Σ_{i=0}^{m} Mⁱ) C⁻¹ v` by Horner accumulation; exactly `m` applications of `M`.
pub fn power_series_apply(m_op: &dyn LinearOperator, c_inv: &dyn LinearOperator, m: usize, v: &[f64]) -> Vec<f64> {
    let w = c_inv.apply(v);
    series_apply(m_op, m, w)
}

/// `Σ_{i=0}^{m} Fⁱ w`.
pub(crate) fn series_apply(f_op: &dyn LinearOperator, m: usize, mut w: Vec<f64>) -> Vec<f64> {
    let mut acc = w.clone();
    let mut next = vec![0.0; w.len()];
    for _ in 0..m {
        f_op.apply_into(&w, &mut next);
        std::mem::swap(&mut w, &mut next);
        axpy(1.0, &w, &mut acc);
    }
    acc
}

/// `op^power`, applied by repetition.
pub struct PowerOperator<'a> {
    op: &'a dyn LinearOperator,
    power: usize,
}

impl<'a> PowerOperator<'a> {
    pub fn new(op: &'a dyn LinearOperator, power: usize) -> Self {
        Self { op, power }
    }
}

impl LinearOperator for PowerOperator<'_> {
    fn dim(&self) -> usize {
        self.op.dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x);
        let mut tmp = vec![0.0; x.len()];
        for _ in 0..self.power {
            self.op.apply_into(y, &mut tmp);
            y.copy_from_slice(&tmp);
        }
    }
}

/// Remainder of the `m`-term series: `E(m) = C M^{m+1} C⁻¹`.
pub struct ErrOperator<'a, M> {
    m_op: M,
    c: &'a CsrMatrix,
    c_inv: &'a dyn LinearOperator,
    m: usize,
}

pub fn build_errop<'a, M: LinearOperator>(
    m_op: M,
    c: &'a CsrMatrix,
    c_inv: &'a dyn LinearOperator,
    m: usize,
) -> Result<ErrOperator<'a, M>> {
    let p = m_op.dim();
    if c.nrows() != p || c.ncols() != p || c_inv.dim() != p {
        return Err(dim_err("build_errop: C and M dimensions disagree"));
    }
    Ok(ErrOperator { m_op, c, c_inv, m })
}

impl<M: LinearOperator> LinearOperator for ErrOperator<'_, M> {
    fn dim(&self) -> usize {
        self.c.nrows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let w = self.c_inv.apply(x);
        let mut z = vec![0.0; w.len()];
        PowerOperator::new(&self.m_op, self.m + 1).apply_into(&w, &mut z);
        self.c.spmv_into(&z, y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{factor_exact, FactorKind};
    use crate::krylov::{densify, Identity};
    use crate::linalg::{random_saddle, DenseMatrix, Sign};

    fn scalar(v: f64) -> CsrMatrix {
        CsrMatrix::from_triplets(1, 1, &[(0, 0, v)]).unwrap()
    }

    #[test]
    fn zero_b_gives_zero_m() {
        let b = CsrMatrix::zeros(3, 4);
        let bt = b.transpose();
        let (k, c) = (Identity(4), Identity(3));
        let m = SchurM::new(&b, &bt, &k, &c).unwrap();
        assert_eq!(m.apply(&[1.0, 2.0, 3.0]), vec![0.0; 3]);
    }

    #[test]
    fn scalar_m() {
        let sys = SaddleSystem::new(scalar(4.0), scalar(2.0), scalar(1.0), Sign::Positive).unwrap();
        let kf = factor_exact(sys.ata(), FactorKind::Cholesky).unwrap();
        let cf = factor_exact(sys.c_block(), FactorKind::Cholesky).unwrap();
        let m = schur_m_operator(&sys, &kf, &cf).unwrap();
        assert!((m.apply(&[3.0])[0] + 3.0).abs() < 1e-15);
    }

    #[test]
    fn series_examples() {
        let c = Identity(1);
        let neg = FnOperator1(-1.0);
        assert_eq!(power_series_apply(&neg, &c, 2, &[1.0]), vec![1.0]);
        assert_eq!(power_series_apply(&neg, &c, 0, &[5.0]), vec![5.0]);
        let zero = FnOperator1(0.0);
        assert_eq!(power_series_apply(&zero, &c, 4, &[5.0]), vec![5.0]);
    }

    #[test]
    fn errop_scalar() {
        let half = FnOperator1(0.5);
        let c = scalar(2.0);
        let cf = factor_exact(&c, FactorKind::Cholesky).unwrap();
        let e = build_errop(&half, &c, &cf, 1).unwrap();
        assert!((e.apply(&[1.0])[0] - 0.25).abs() < 1e-15);
    }

    #[test]
    fn errop_matches_dense_identity() {
        let sys = random_saddle(30, 30, 5).unwrap();
        let kf = factor_exact(sys.ata(), FactorKind::Cholesky).unwrap();
        let cf = factor_exact(sys.c_block(), FactorKind::Cholesky).unwrap();
        let m = schur_m_operator(&sys, &kf, &cf).unwrap();
        let s = densify(&SchurComplement::new(schur_m_operator(&sys, &kf, &cf).unwrap(), sys.c_block()));
        for deg in 0..4 {
            let e = densify(&build_errop(&m, sys.c_block(), &cf, deg).unwrap());
            let series = densify(&crate::krylov::FnOperator::new(30, |x: &[f64], y: &mut [f64]| {
                y.copy_from_slice(&power_series_apply(&m, &cf, deg, x))
            }));
            let oracle = DenseMatrix::identity(30).linear_combination(1.0, &s.matmul(&series).unwrap(), -1.0).unwrap();
            let diff = oracle.linear_combination(1.0, &e, -1.0).unwrap();
            assert!(diff.frobenius_norm() <= 1e-10 * e.frobenius_norm().max(1e-300));
        }
    }

    struct FnOperator1(f64);

    impl LinearOperator for FnOperator1 {
        fn dim(&self) -> usize {
            1
        }

        fn apply_into(&self, x: &[f64], y: &mut [f64]) {
            y[0] = self.0 * x[0];
        }
    }
}

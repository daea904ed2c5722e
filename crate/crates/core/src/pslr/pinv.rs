use crate::error::{dim_err, Error, Result};
use crate::krylov::LinearOperator;
use crate::linalg::vector::norm2;
use crate::linalg::CsrMatrix;
use crate::pslr::lowrank::LowRankCorrection;
use crate::pslr::series::{series_apply, PowerOperator};

/// `F = I - A` for a square matrix `A`, so that `A = I - F`.
pub struct IdentitySplitting<'a> {
    a: &'a CsrMatrix,
}

impl<'a> IdentitySplitting<'a> {
    pub fn new(a: &'a CsrMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(dim_err("splitting needs a square matrix"));
        }
        Ok(Self { a })
    }
}

impl LinearOperator for IdentitySplitting<'_> {
    fn dim(&self) -> usize {
        self.a.nrows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.a.spmv_into(x, y);
        for (yi, xi) in y.iter_mut().zip(x) {
            *yi = xi - *yi;
        }
    }
}

/// Approximate inverse of `A = I - F`: `(Σ_{i=0}^{m} Fⁱ)(I + V G Vᵀ)`, where
/// `V H Vᵀ` approximates `F^{m+1}`.
pub struct PinvOperator<F> {
    f_op: F,
    m: usize,
    correction: LowRankCorrection,
}

impl<F: LinearOperator> PinvOperator<F> {
    /// Arnoldi on `F^{m+1}` starting from `v1`.
    pub fn build(f_op: F, v1: &[f64], m: usize, r_k: usize) -> Result<Self> {
        if r_k == 0 || r_k > f_op.dim() {
            return Err(Error::InvalidInput(format!("r_k must lie in 1..={}, got {r_k}", f_op.dim())));
        }
        let correction = LowRankCorrection::from_arnoldi(&PowerOperator::new(&f_op, m + 1), v1, r_k)?;
        Ok(Self { f_op, m, correction })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn correction(&self) -> &LowRankCorrection {
        &self.correction
    }

    pub fn f_op(&self) -> &F {
        &self.f_op
    }
}

impl<F: LinearOperator> LinearOperator for PinvOperator<F> {
    fn dim(&self) -> usize {
        self.f_op.dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let t = self.correction.apply(x);
        y.copy_from_slice(&series_apply(&self.f_op, self.m, t));
    }
}

/// Approximately solves `(I - F) x = b`; the Arnoldi start vector is `b / ‖b‖`.
pub fn pinv_solve<F: LinearOperator>(f_op: F, b: &[f64], m: usize, r_k: usize) -> Result<(Vec<f64>, PinvOperator<F>)> {
    if b.len() != f_op.dim() {
        return Err(dim_err(format!("pinv_solve: b has length {}, operator dim {}", b.len(), f_op.dim())));
    }
    if norm2(b) == 0.0 {
        return Err(Error::InvalidInput("pinv_solve needs a nonzero right-hand side".into()));
    }
    let op = PinvOperator::build(f_op, b, m, r_k)?;
    let x = op.apply(b);
    Ok((x, op))
}

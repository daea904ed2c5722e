use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::krylov::{densify, LinearOperator};
use crate::linalg::vector::{dot, norm2, normalized_ones};
use crate::linalg::DenseMatrix;
use crate::pslr::PslrPreconditioner;

/// Dense check of the low-rank error bound for one preconditioner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorDiagnostics {
    /// `‖E(m) - V H Vᵀ‖₂`
    pub norm_x: f64,
    /// `‖(I - V H Vᵀ)⁻¹‖₂`
    pub norm_zinv: f64,
    /// `norm_x * norm_zinv`
    pub bound: f64,
    /// `‖S⁻¹ - S_app⁻¹‖₂ / ‖S⁻¹‖₂`
    pub actual: f64,
    /// `‖E(m) - V H Vᵀ‖_F / ‖E(m)‖_F`, zero when `E(m) = 0`.
    pub projection_error: f64,
}

impl ErrorDiagnostics {
    /// `actual <= bound * (1 + 1e-8)`.
    pub fn bound_holds(&self) -> bool {
        self.actual <= self.bound * (1.0 + 1e-8)
    }
}

fn spectral_norm(a: &DenseMatrix) -> f64 {
    if a.nrows() == 0 {
        return 0.0;
    }
    a.to_nalgebra().singular_values().max()
}

fn smallest_singular_value(a: &DenseMatrix) -> f64 {
    a.to_nalgebra().singular_values().min()
}

/// Densifies `E(m)`, `S` and the approximate Schur inverse and evaluates both
/// sides of the error bound. `S` is the Schur complement implied by the
/// stored factorization of `AᵀA`, which is the operator the series inverts.
pub fn error_diagnostics(pre: &PslrPreconditioner, dense_cap: usize) -> Result<ErrorDiagnostics> {
    let p = pre.p();
    if p > dense_cap {
        return Err(Error::Config(format!("Schur block of order {p} exceeds the dense cap {dense_cap}")));
    }
    let e = densify(&pre.err_op());
    let vhv = pre.correction().projected();
    let x = e.linear_combination(1.0, &vhv, -1.0)?;
    let z = DenseMatrix::identity(p).linear_combination(1.0, &vhv, -1.0)?;
    let norm_x = spectral_norm(&x);
    let sigma_min = smallest_singular_value(&z);
    let norm_zinv = if sigma_min > 0.0 { 1.0 / sigma_min } else { f64::INFINITY };

    let s = densify(&pre.schur());
    let s_inv = DMatrix::from_row_slice(p, p, s.values())
        .try_inverse()
        .ok_or_else(|| Error::SingularMatrix("Schur complement is singular".into()))?;
    let s_inv = DenseMatrix::from_nalgebra(&s_inv);
    let s_app = densify(&pre.schur_inverse(true));
    let actual = spectral_norm(&s_inv.linear_combination(1.0, &s_app, -1.0)?) / spectral_norm(&s_inv);

    let e_norm = e.frobenius_norm();
    let projection_error = if e_norm > 0.0 { x.frobenius_norm() / e_norm } else { 0.0 };
    Ok(ErrorDiagnostics { norm_x, norm_zinv, bound: norm_x * norm_zinv, actual, projection_error })
}

/// Power-iteration estimate of the spectral radius from the normalized ones
/// vector: the magnitude of the final Rayleigh quotient. An estimate only;
/// it can undershoot when the start vector misses the dominant eigenvector
/// or the dominant eigenvalues are a complex pair. At least 10 iterations run.
pub fn spectral_radius(op: &dyn LinearOperator, iters: usize) -> f64 {
    let n = op.dim();
    if n == 0 {
        return 0.0;
    }
    let mut x = normalized_ones(n);
    let mut ax = vec![0.0; n];
    let mut rq = 0.0;
    for _ in 0..iters.max(10) {
        op.apply_into(&x, &mut ax);
        rq = dot(&x, &ax);
        let nrm = norm2(&ax);
        if nrm == 0.0 {
            return 0.0;
        }
        for (xi, ai) in x.iter_mut().zip(&ax) {
            *xi = ai / nrm;
        }
    }
    rq.abs()
}

//! Dense reference computations shared by the integration tests. Everything
//! here works on explicit nalgebra matrices and never calls the library's
//! series, correction or Krylov code.

#![allow(dead_code)]

use nalgebra::DMatrix;
use pslr::factor::{factor_exact, FactorKind};
use pslr::krylov::{densify, LinearOperator};
use pslr::linalg::{random_saddle, CsrMatrix, DenseMatrix, SaddleSystem};
use pslr::PslrPreconditioner;

pub fn csr_dense(a: &CsrMatrix) -> DMatrix<f64> {
    let mut out = DMatrix::zeros(a.nrows(), a.ncols());
    for (i, j, v) in a.triplets() {
        out[(i, j)] += v;
    }
    out
}

pub fn na(d: &DenseMatrix) -> DMatrix<f64> {
    DMatrix::from_row_slice(d.nrows(), d.ncols(), d.values())
}

pub fn op_dense(op: &dyn LinearOperator) -> DMatrix<f64> {
    na(&densify(op))
}

pub fn spectral_norm(a: &DMatrix<f64>) -> f64 {
    a.singular_values().max()
}

pub fn inverse(a: &DMatrix<f64>) -> DMatrix<f64> {
    a.clone().try_inverse().expect("reference matrix is singular")
}

/// Dense `(K, B, C)` with `K = AᵀA`.
pub fn blocks(sys: &SaddleSystem) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    (csr_dense(sys.ata()), csr_dense(sys.b_block()), csr_dense(sys.c_block()))
}

/// `M = -C⁻¹ B K⁻¹ Bᵀ`.
pub fn dense_m(sys: &SaddleSystem) -> DMatrix<f64> {
    let (k, b, c) = blocks(sys);
    -(inverse(&c) * &b * inverse(&k) * b.transpose())
}

/// `S = C + B K⁻¹ Bᵀ`.
pub fn dense_schur(sys: &SaddleSystem) -> DMatrix<f64> {
    let (k, b, c) = blocks(sys);
    &c + &b * inverse(&k) * b.transpose()
}

/// PSLR built on exact Cholesky factors of `AᵀA` and `C`.
pub fn exact_pre(sys: &SaddleSystem, m: usize, r_k: usize) -> PslrPreconditioner {
    let k = factor_exact(sys.ata(), FactorKind::Cholesky).unwrap();
    let c = factor_exact(sys.c_block(), FactorKind::Cholesky).unwrap();
    PslrPreconditioner::with_factors(sys, k, c, m, r_k).unwrap()
}

/// Random instance with `‖M‖₂ = target`, obtained by scaling `B`
/// (`M` is quadratic in `B`).
pub fn saddle_with_m_norm(n: usize, p: usize, seed: u64, target: f64) -> SaddleSystem {
    let base = random_saddle(n, p, seed).unwrap();
    let t = (target / spectral_norm(&dense_m(&base))).sqrt();
    SaddleSystem::new(base.ata().clone(), base.b_block().scaled(t), base.c_block().clone(), base.sign()).unwrap()
}

pub fn rel_residual(a: &CsrMatrix, x: &[f64], b: &[f64]) -> f64 {
    let ax = a.spmv(x).unwrap();
    let r: f64 = ax.iter().zip(b).map(|(u, v)| (u - v).powi(2)).sum::<f64>().sqrt();
    r / b.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn dense_solve(a: &CsrMatrix, b: &[f64]) -> Vec<f64> {
    let lu = csr_dense(a).lu();
    lu.solve(&nalgebra::DVector::from_column_slice(b)).expect("singular system").as_slice().to_vec()
}

pub fn max_abs_diff(x: &[f64], y: &[f64]) -> f64 {
    x.iter().zip(y).map(|(u, v)| (u - v).abs()).fold(0.0, f64::max)
}

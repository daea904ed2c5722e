use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::krylov::{arnoldi_restarting, ArnoldiResult, LinearOperator};
use crate::linalg::DenseMatrix;

/// Pivot threshold, relative to `max |I - H|`, below which `I - H` counts as singular.
pub const CORRECTION_PIVOT_TOL: f64 = 1e-12;

/// Rank-`k` approximation `E ≈ V H Vᵀ` together with the Woodbury factor
/// `G = (I - H)⁻¹ - I`, so that `(I - V H Vᵀ)⁻¹ = I + V G Vᵀ`.
#[derive(Debug, Clone)]
pub struct LowRankCorrection {
    v: DenseMatrix,
    h: DenseMatrix,
    g: DenseMatrix,
    arnoldi_breakdown: bool,
}

impl LowRankCorrection {
    /// Runs `r_k` Arnoldi steps on `op` from `v1`, restarting on breakdown,
    /// and forms `G`.
    pub fn from_arnoldi(op: &dyn LinearOperator, v1: &[f64], r_k: usize) -> Result<Self> {
        let ArnoldiResult { basis, hessenberg, breakdown, .. } = arnoldi_restarting(op, v1, r_k)?;
        let g = woodbury_g(&hessenberg)?;
        Ok(Self { v: basis, h: hessenberg, g, arnoldi_breakdown: breakdown })
    }

    /// Assembles the correction from a given orthonormal `V` and `H`.
    pub fn from_parts(v: DenseMatrix, h: DenseMatrix) -> Result<Self> {
        if h.nrows() != h.ncols() || v.ncols() != h.nrows() {
            return Err(Error::Dimension(format!(
                "V is {}x{}, H is {}x{}",
                v.nrows(),
                v.ncols(),
                h.nrows(),
                h.ncols()
            )));
        }
        let g = woodbury_g(&h)?;
        Ok(Self { v, h, g, arnoldi_breakdown: false })
    }

    pub fn basis(&self) -> &DenseMatrix {
        &self.v
    }

    pub fn hessenberg(&self) -> &DenseMatrix {
        &self.h
    }

    pub fn g(&self) -> &DenseMatrix {
        &self.g
    }

    pub fn rank(&self) -> usize {
        self.h.nrows()
    }

    pub fn arnoldi_breakdown(&self) -> bool {
        self.arnoldi_breakdown
    }

    /// `x + V G Vᵀ x`.
    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let vtx = self.v.tr_matvec(x).expect("length checked by caller");
        let gv = self.g.matvec(&vtx).expect("square G");
        let mut out = x.to_vec();
        let n = self.v.nrows();
        for (j, &c) in gv.iter().enumerate() {
            if c != 0.0 {
                for (i, o) in out.iter_mut().enumerate().take(n) {
                    *o += c * self.v[(i, j)];
                }
            }
        }
        out
    }

    /// `V H Vᵀ` as a dense matrix.
    pub fn projected(&self) -> DenseMatrix {
        let vh = self.v.matmul(&self.h).expect("conforming");
        vh.matmul(&self.v.transpose()).expect("conforming")
    }
}

/// `G = (I - H)⁻¹ - I`.
pub fn woodbury_g(h: &DenseMatrix) -> Result<DenseMatrix> {
    let k = h.nrows();
    let i_minus_h = DenseMatrix::identity(k).linear_combination(1.0, h, -1.0)?;
    let scale = i_minus_h.max_abs();
    let lu = DMatrix::from_row_slice(k, k, i_minus_h.values()).lu();
    let u = lu.u();
    let min_pivot = (0..k).map(|i| u[(i, i)].abs()).fold(f64::INFINITY, f64::min);
    if !(min_pivot > CORRECTION_PIVOT_TOL * scale) {
        return Err(Error::CorrectionSingular(format!(
            "I - H has pivot {min_pivot:e} relative to scale {scale:e}"
        )));
    }
    let inv = lu
        .try_inverse()
        .ok_or_else(|| Error::CorrectionSingular("I - H is not invertible".into()))?;
    let inv = DenseMatrix::from_nalgebra(&inv);
    inv.linear_combination(1.0, &DenseMatrix::identity(k), -1.0)
}

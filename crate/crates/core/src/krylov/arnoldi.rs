use crate::error::{dim_err, Error, Result};
use crate::krylov::LinearOperator;
use crate::linalg::vector::{axpy, dot, norm2};
use crate::linalg::DenseMatrix;

/// `h_{j+1,j} <= ARNOLDI_BREAKDOWN_TOL * ‖op v_j‖` ends the process early.
pub const ARNOLDI_BREAKDOWN_TOL: f64 = 1e-14;

/// Output of [`arnoldi`].
#[derive(Debug, Clone)]
pub struct ArnoldiResult {
    /// `n x k`, orthonormal columns.
    pub basis: DenseMatrix,
    /// `k x k` upper Hessenberg, equal to `Vᵀ op V`.
    pub hessenberg: DenseMatrix,
    pub k: usize,
    /// `h_{k+1,k}`; zero after a breakdown.
    pub next_coeff: f64,
    /// `v_{k+1}` when the process ran the full `r_k` steps without breakdown.
    pub next_vector: Option<Vec<f64>>,
    pub breakdown: bool,
}

/// Arnoldi process with modified Gram-Schmidt and one reorthogonalization
/// pass. Runs at most `r_k` steps from `v1` (which need not be normalized).
pub fn arnoldi(op: &dyn LinearOperator, v1: &[f64], r_k: usize) -> Result<ArnoldiResult> {
    run(op, v1, r_k, false)
}

/// Like [`arnoldi`], but a breakdown before `r_k` steps does not end the
/// process: it continues from the unit coordinate vector farthest from the
/// current basis. The basis then has `min(r_k, n)` columns and `H = Vᵀ op V`
/// is still upper Hessenberg, with a zero subdiagonal entry at each restart.
/// `breakdown` records whether any restart happened.
pub fn arnoldi_restarting(op: &dyn LinearOperator, v1: &[f64], r_k: usize) -> Result<ArnoldiResult> {
    run(op, v1, r_k, true)
}

fn run(op: &dyn LinearOperator, v1: &[f64], r_k: usize, restart: bool) -> Result<ArnoldiResult> {
    let n = op.dim();
    if v1.len() != n {
        return Err(dim_err(format!("start vector has length {}, operator dim {n}", v1.len())));
    }
    if r_k == 0 {
        return Err(Error::InvalidInput("Arnoldi rank must be at least 1".into()));
    }
    let beta = norm2(v1);
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(Error::InvalidInput("Arnoldi start vector is zero".into()));
    }
    let steps = r_k.min(n);
    let mut basis: Vec<Vec<f64>> = Vec::with_capacity(steps + 1);
    basis.push(v1.iter().map(|v| v / beta).collect());
    // column-major storage of the (steps+1) x steps Hessenberg
    let mut h = vec![vec![0.0; steps + 1]; steps];
    let mut w = vec![0.0; n];
    let mut k = steps;
    let mut breakdown = false;

    for j in 0..steps {
        op.apply_into(&basis[j], &mut w);
        let w_norm = norm2(&w);
        for _pass in 0..2 {
            for (i, v) in basis.iter().enumerate().take(j + 1) {
                let c = dot(&w, v);
                h[j][i] += c;
                axpy(-c, v, &mut w);
            }
        }
        let h_next = norm2(&w);
        h[j][j + 1] = h_next;
        if h_next <= ARNOLDI_BREAKDOWN_TOL * w_norm {
            breakdown = true;
            if restart && j + 1 < steps {
                h[j][j + 1] = 0.0;
                basis.push(fresh_direction(&basis, n));
                continue;
            }
            k = j + 1;
            break;
        }
        basis.push(w.iter().map(|v| v / h_next).collect());
    }

    let ended_early = basis.len() == k;
    let next_coeff = if ended_early { 0.0 } else { h[k - 1][k] };
    let next_vector = if ended_early { None } else { basis.pop() };
    basis.truncate(k);
    let mut hess = DenseMatrix::zeros(k, k);
    for (j, col) in h.iter().enumerate().take(k) {
        for (i, &v) in col.iter().enumerate().take(k) {
            hess[(i, j)] = v;
        }
    }
    Ok(ArnoldiResult {
        basis: DenseMatrix::from_columns(n, &basis)?,
        hessenberg: hess,
        k,
        next_coeff,
        next_vector,
        breakdown,
    })
}

/// Unit vector orthogonal to `basis`, from the coordinate axis with the
/// largest component outside its span. Requires `basis.len() < n`.
fn fresh_direction(basis: &[Vec<f64>], n: usize) -> Vec<f64> {
    let outside = |i: usize| 1.0 - basis.iter().map(|v| v[i] * v[i]).sum::<f64>();
    let axis = (0..n).max_by(|&a, &b| outside(a).total_cmp(&outside(b))).unwrap_or(0);
    let mut w = vec![0.0; n];
    w[axis] = 1.0;
    for _pass in 0..2 {
        for v in basis {
            let c = dot(&w, v);
            axpy(-c, v, &mut w);
        }
    }
    let nw = norm2(&w);
    w.iter().map(|v| v / nw).collect()
}

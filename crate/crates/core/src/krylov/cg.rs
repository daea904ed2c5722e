use std::time::Instant;

use crate::error::{dim_err, Error, Result};
use crate::krylov::report::stop_scale;
use crate::krylov::{Identity, LinearOperator, SolveReport, SolveStatus};
use crate::linalg::vector::{axpy, dot, norm2};

#[derive(Debug, Clone, Copy)]
pub struct CgOptions {
    /// Stop when `‖b - A x‖ <= tol * min(‖b - A x0‖, ‖b‖)`.
    pub tol: f64,
    pub maxit: usize,
}

impl Default for CgOptions {
    fn default() -> Self {
        Self { tol: 1e-6, maxit: 500 }
    }
}

/// Conjugate gradients. `a` must be SPD; this is not checked beyond the
/// curvature test that flags [`SolveStatus::Breakdown`].
pub fn cg(a: &dyn LinearOperator, b: &[f64], x0: &[f64], opts: CgOptions) -> Result<(Vec<f64>, SolveReport)> {
    pcg(a, b, x0, opts, &Identity(a.dim()))
}

/// Preconditioned conjugate gradients with `m_inv` applied once per iteration.
pub fn pcg(
    a: &dyn LinearOperator,
    b: &[f64],
    x0: &[f64],
    opts: CgOptions,
    m_inv: &dyn LinearOperator,
) -> Result<(Vec<f64>, SolveReport)> {
    let n = a.dim();
    if b.len() != n || x0.len() != n || m_inv.dim() != n {
        return Err(dim_err(format!(
            "pcg: operator dim {n}, b {}, x0 {}, preconditioner {}",
            b.len(),
            x0.len(),
            m_inv.dim()
        )));
    }
    if !(opts.tol > 0.0) || opts.maxit == 0 {
        return Err(Error::InvalidInput("pcg needs tol > 0 and maxit >= 1".into()));
    }
    let start = Instant::now();

    let mut x = x0.to_vec();
    let mut r = a.apply(&x);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let r0 = norm2(&r);
    let mut history = vec![r0];
    let mut status = SolveStatus::MaxIterations;
    if r0 == 0.0 {
        status = SolveStatus::Converged;
    } else {
        let target = opts.tol * stop_scale(r0, norm2(b));
        let mut z = m_inv.apply(&r);
        let mut rz = dot(&r, &z);
        let mut p = z.clone();
        let mut ap = vec![0.0; n];
        for _ in 0..opts.maxit {
            if !(rz > 0.0) {
                status = SolveStatus::Breakdown;
                break;
            }
            a.apply_into(&p, &mut ap);
            let curv = dot(&p, &ap);
            if !(curv > 0.0) {
                status = SolveStatus::Breakdown;
                break;
            }
            let alpha = rz / curv;
            axpy(alpha, &p, &mut x);
            axpy(-alpha, &ap, &mut r);
            let rn = norm2(&r);
            history.push(rn);
            if rn <= target {
                status = SolveStatus::Converged;
                break;
            }
            m_inv.apply_into(&r, &mut z);
            let rz_new = dot(&r, &z);
            let beta = rz_new / rz;
            rz = rz_new;
            for (pi, zi) in p.iter_mut().zip(&z) {
                *pi = zi + beta * *pi;
            }
        }
    }

    let ax = a.apply(&x);
    let final_residual = norm2(&b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect::<Vec<_>>());
    let report = SolveReport::new(history, status, norm2(b), final_residual, start.elapsed().as_secs_f64());
    Ok((x, report))
}

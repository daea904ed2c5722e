use std::time::Instant;

use crate::error::{dim_err, Error, Result};
use crate::krylov::report::stop_scale;
use crate::krylov::{LinearOperator, SolveReport, SolveStatus};
use crate::linalg::vector::{axpy, dot, norm2};

#[derive(Debug, Clone, Copy)]
pub struct GmresOptions {
    /// Stop when `‖b - A x‖ <= tol * min(‖b - A x0‖, ‖b‖)`.
    pub tol: f64,
    pub maxit: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        Self { tol: 1e-6, maxit: 500 }
    }
}

/// Full (non-restarted) GMRES with optional right preconditioning.
///
/// With a preconditioner `P` the method solves `A P u = b - A x0` and returns
/// `x = x0 + P u`, so the monitored residual is the residual of the original
/// system.
pub fn gmres(
    op: &dyn LinearOperator,
    b: &[f64],
    x0: &[f64],
    opts: GmresOptions,
    precond: Option<&dyn LinearOperator>,
) -> Result<(Vec<f64>, SolveReport)> {
    let n = op.dim();
    if b.len() != n || x0.len() != n {
        return Err(dim_err(format!("gmres: operator dim {n}, b {}, x0 {}", b.len(), x0.len())));
    }
    if let Some(p) = precond {
        if p.dim() != n {
            return Err(dim_err("gmres: preconditioner dimension mismatch"));
        }
    }
    if !(opts.tol > 0.0) || opts.maxit == 0 {
        return Err(Error::InvalidInput("gmres needs tol > 0 and maxit >= 1".into()));
    }
    let start = Instant::now();

    let mut r = op.apply(x0);
    for (ri, bi) in r.iter_mut().zip(b) {
        *ri = bi - *ri;
    }
    let beta = norm2(&r);
    let mut history = vec![beta];
    if beta == 0.0 {
        let report = SolveReport::new(history, SolveStatus::Converged, norm2(b), 0.0, start.elapsed().as_secs_f64());
        return Ok((x0.to_vec(), report));
    }
    let target = opts.tol * stop_scale(beta, norm2(b));

    let mut basis: Vec<Vec<f64>> = vec![r.iter().map(|v| v / beta).collect()];
    // columns of the rotated Hessenberg, i.e. the triangular factor R
    let mut rcols: Vec<Vec<f64>> = Vec::new();
    let mut cs: Vec<f64> = Vec::new();
    let mut sn: Vec<f64> = Vec::new();
    let mut g = vec![beta];
    let mut z = vec![0.0; n];
    let mut w = vec![0.0; n];
    let mut status = SolveStatus::MaxIterations;

    for j in 0..opts.maxit {
        match precond {
            Some(p) => {
                p.apply_into(&basis[j], &mut z);
                op.apply_into(&z, &mut w);
            }
            None => op.apply_into(&basis[j], &mut w),
        }
        let mut h = vec![0.0; j + 2];
        for (i, v) in basis.iter().enumerate() {
            let c = dot(&w, v);
            h[i] = c;
            axpy(-c, v, &mut w);
        }
        let h_next = norm2(&w);
        h[j + 1] = h_next;

        for i in 0..j {
            let t = cs[i] * h[i] + sn[i] * h[i + 1];
            h[i + 1] = -sn[i] * h[i] + cs[i] * h[i + 1];
            h[i] = t;
        }
        let denom = h[j].hypot(h[j + 1]);
        if denom == 0.0 {
            // A P v_j = 0: the least-squares problem lost rank
            status = SolveStatus::Breakdown;
            break;
        }
        let (c, s) = (h[j] / denom, h[j + 1] / denom);
        cs.push(c);
        sn.push(s);
        h[j] = denom;
        h[j + 1] = 0.0;
        g.push(-s * g[j]);
        g[j] *= c;
        h.truncate(j + 1);
        rcols.push(h);

        let resid = g[j + 1].abs();
        history.push(resid);
        if resid <= target {
            status = SolveStatus::Converged;
            break;
        }
        if h_next == 0.0 {
            // exact invariant subspace, yet the estimate is above target
            status = SolveStatus::Breakdown;
            break;
        }
        basis.push(w.iter().map(|v| v / h_next).collect());
    }

    let k = rcols.len();
    let mut y = vec![0.0; k];
    for i in (0..k).rev() {
        let mut s = g[i];
        for (jj, yj) in y.iter().enumerate().skip(i + 1) {
            s -= rcols[jj][i] * yj;
        }
        y[i] = s / rcols[i][i];
    }
    let mut update = vec![0.0; n];
    for (yi, v) in y.iter().zip(&basis) {
        axpy(*yi, v, &mut update);
    }
    let mut x = x0.to_vec();
    match precond {
        Some(p) => {
            p.apply_into(&update, &mut z);
            axpy(1.0, &z, &mut x);
        }
        None => axpy(1.0, &update, &mut x),
    }

    let ax = op.apply(&x);
    let final_residual = norm2(&b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect::<Vec<_>>());
    let report = SolveReport::new(history, status, norm2(b), final_residual, start.elapsed().as_secs_f64());
    Ok((x, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::{factor_exact, FactorKind};
    use crate::krylov::Identity;
    use crate::linalg::{gen_banded, vector::norm_inf, CsrMatrix};

    #[test]
    fn identity_one_iteration() {
        let b = vec![1.0, -2.0, 3.0];
        let (x, rep) = gmres(&Identity(3), &b, &[0.0; 3], GmresOptions::default(), None).unwrap();
        assert_eq!(rep.iterations, 1);
        assert_eq!(rep.status, SolveStatus::Converged);
        for (u, v) in x.iter().zip(&b) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn tridiag_against_direct_solve() {
        let a = gen_banded(128, &[-1, 0, 1], &[1.0, 4.0, 1.0]).unwrap();
        let b = vec![1.0; 128];
        let (x, rep) = gmres(&a, &b, &[0.0; 128], GmresOptions { tol: 1e-6, maxit: 500 }, None).unwrap();
        assert!(rep.converged());
        let exact = factor_exact(&a, FactorKind::Lu).unwrap().solve(&b);
        let err: Vec<f64> = x.iter().zip(&exact).map(|(u, v)| u - v).collect();
        assert!(norm_inf(&err) <= 1e-5);
        assert!(rep.relative_residual() <= 1e-6 * 1.0001);
    }

    #[test]
    fn history_is_monotone() {
        let a = gen_banded(60, &[-1, 0, 1], &[-1.0, 2.0, 0.5]).unwrap();
        let b: Vec<f64> = (0..60).map(|i| (i as f64).sin()).collect();
        let (_, rep) = gmres(&a, &b, &[0.0; 60], GmresOptions { tol: 1e-10, maxit: 200 }, None).unwrap();
        for w in rep.residual_history.windows(2) {
            assert!(w[1] <= w[0] * (1.0 + 1e-12));
        }
    }

    #[test]
    fn identity_preconditioner_is_transparent() {
        let a = gen_banded(40, &[-2, 0, 1], &[0.3, 3.0, -1.0]).unwrap();
        let b: Vec<f64> = (0..40).map(|i| 1.0 / (1.0 + i as f64)).collect();
        let opts = GmresOptions { tol: 1e-10, maxit: 100 };
        let (x1, r1) = gmres(&a, &b, &[0.0; 40], opts, None).unwrap();
        let (x2, r2) = gmres(&a, &b, &[0.0; 40], opts, Some(&Identity(40))).unwrap();
        assert_eq!(r1.iterations, r2.iterations);
        for (u, v) in r1.residual_history.iter().zip(&r2.residual_history) {
            assert!((u - v).abs() <= 1e-12 * u.max(1e-300));
        }
        for (u, v) in x1.iter().zip(&x2) {
            assert!((u - v).abs() <= 1e-12);
        }
    }

    #[test]
    fn exact_initial_guess_needs_no_iterations() {
        let a = CsrMatrix::identity(3);
        let (_, rep) = gmres(&a, &[1.0; 3], &[1.0; 3], GmresOptions::default(), None).unwrap();
        assert_eq!(rep.iterations, 0);
        assert!(rep.converged());
    }

    #[test]
    fn singular_direction_is_breakdown() {
        let a = CsrMatrix::from_diagonal(&[1.0, 0.0]);
        let (_, rep) = gmres(&a, &[0.0, 1.0], &[0.0, 0.0], GmresOptions::default(), None).unwrap();
        assert_eq!(rep.status, SolveStatus::Breakdown);
    }

    #[test]
    fn max_iterations_reported() {
        let a = gen_banded(50, &[-1, 0, 1], &[-1.0, 2.0, -1.0]).unwrap();
        let (_, rep) = gmres(&a, &[1.0; 50], &[0.0; 50], GmresOptions { tol: 1e-12, maxit: 3 }, None).unwrap();
        assert_eq!(rep.status, SolveStatus::MaxIterations);
        assert_eq!(rep.iterations, 3);
    }

    #[test]
    fn rejects_bad_options() {
        let a = Identity(2);
        assert!(gmres(&a, &[1.0; 2], &[0.0; 2], GmresOptions { tol: 0.0, maxit: 5 }, None).is_err());
        assert!(gmres(&a, &[1.0; 3], &[0.0; 2], GmresOptions::default(), None).is_err());
    }
}

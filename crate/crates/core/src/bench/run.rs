use std::time::Instant;

use rayon::prelude::*;

use crate::baselines::{adi_solve, jacobi_inverse, rcm_order, AdiConfig};
use crate::bench::problem::{Instance, System};
use crate::bench::{BenchConfig, InitialGuess, Method, PslrSide};
use crate::error::{Error, Result};
use crate::factor::ic0;
use crate::krylov::{cg, gmres, pcg, CgOptions, GmresOptions, LinearOperator, SolveReport, SolveStatus};
use crate::linalg::{random_vector, CsrMatrix};
use crate::pslr::{build_pslr, IdentitySplitting, PinvOperator, PslrConfig};

/// `maxit` at or above which an exhausted run is reported as `-` instead of `F`.
pub const LONG_RUN_MAXIT: usize = 3000;

/// One result row.
#[derive(Debug, Clone)]
pub struct BenchRow {
    pub problem: String,
    pub method: Method,
    pub m: Option<usize>,
    pub r_k: Option<usize>,
    pub x0: InitialGuess,
    pub maxit: usize,
    pub report: SolveReport,
}

impl BenchRow {
    /// Iteration count, `F` for a failed run and `-` for a run that
    /// exhausted a long (`maxit >= 3000`) budget.
    pub fn n_iter(&self) -> String {
        match self.report.status {
            SolveStatus::Converged => self.report.iterations.to_string(),
            SolveStatus::MaxIterations if self.maxit >= LONG_RUN_MAXIT => "-".into(),
            _ => "F".into(),
        }
    }

    /// Final true residual relative to `‖b‖`.
    pub fn error(&self) -> f64 {
        self.report.relative_residual()
    }

    pub fn converged(&self) -> bool {
        self.report.converged()
    }
}

fn permute_vec(v: &[f64], perm: &[usize]) -> Vec<f64> {
    perm.iter().map(|&old| v[old]).collect()
}

/// Applies RCM to the matrix (or to `AᵀA` of a saddle system) and permutes
/// the right-hand side to match. Returns the ordering time.
fn reorder(inst: &mut Instance) -> Result<f64> {
    let start = Instant::now();
    match &mut inst.system {
        System::Matrix(a) => {
            let perm = rcm_order(a)?;
            *a = a.permute_symmetric(&perm)?;
            inst.rhs = permute_vec(&inst.rhs, &perm);
        }
        System::Saddle(s) => {
            let perm = rcm_order(s.ata())?;
            *s = s.permute_primal(&perm)?;
            let n = perm.len();
            let mut rhs = permute_vec(&inst.rhs[..n], &perm);
            rhs.extend_from_slice(&inst.rhs[n..]);
            inst.rhs = rhs;
        }
    }
    Ok(start.elapsed().as_secs_f64())
}

fn require_symmetric(a: &CsrMatrix, method: Method) -> Result<()> {
    if a.is_symmetric(1e-12) {
        Ok(())
    } else {
        Err(Error::Config(format!("{method} needs a symmetric system matrix")))
    }
}

/// Builds the problem, sets up the method, solves and reports.
pub fn run_bench(cfg: &BenchConfig) -> Result<BenchRow> {
    cfg.validate()?;
    let mut inst = cfg.problem.instance(cfg.method, cfg.seed)?;
    let time_order = if cfg.reorder { reorder(&mut inst)? } else { 0.0 };
    let a = inst.matrix();
    let b = inst.rhs.clone();
    let n = b.len();
    let x0_kind = cfg.initial_guess();
    let plain_x0 = |kind: InitialGuess| match kind {
        InitialGuess::Random(seed) => random_vector(n, seed.unwrap_or(cfg.seed.wrapping_add(1))),
        _ => vec![0.0; n],
    };
    let gm_opts = GmresOptions { tol: cfg.tol, maxit: cfg.maxit };
    let cg_opts = CgOptions { tol: cfg.tol, maxit: cfg.maxit };

    let (report, time_precond) = match cfg.method {
        Method::Gmres => (gmres(&a, &b, &plain_x0(x0_kind), gm_opts, None)?.1, 0.0),
        Method::JacobiGmres => {
            let start = Instant::now();
            let jac = jacobi_inverse(&a)?;
            let t = start.elapsed().as_secs_f64();
            (gmres(&a, &b, &plain_x0(x0_kind), gm_opts, Some(&jac))?.1, t)
        }
        Method::Cg => {
            require_symmetric(&a, cfg.method)?;
            (cg(&a, &b, &plain_x0(x0_kind), cg_opts)?.1, 0.0)
        }
        Method::PcgIc0 => {
            require_symmetric(&a, cfg.method)?;
            let start = Instant::now();
            let f = ic0(&a)?;
            let t = start.elapsed().as_secs_f64();
            (pcg(&a, &b, &plain_x0(x0_kind), cg_opts, &f)?.1, t)
        }
        Method::Adi => {
            let adi = AdiConfig { alpha: cfg.alpha, tol: cfg.tol, maxit: cfg.maxit };
            (adi_solve(&a, &b, &adi)?.1, 0.0)
        }
        Method::PslrGmres if matches!(inst.system, System::Saddle(_)) => {
            let System::Saddle(sys) = &inst.system else { unreachable!() };
            let start = Instant::now();
            let pcfg = PslrConfig { m: cfg.m, r_k: cfg.r_k, ata_solver: cfg.ata_solver };
            let pre = build_pslr(sys, &pcfg)?;
            let t = start.elapsed().as_secs_f64();
            (solve_with_inverse(&a, &b, &pre, x0_kind, &plain_x0, cfg.side, gm_opts)?, t)
        }
        Method::PslrGmres | Method::Pinv => {
            let start = Instant::now();
            let pinv = PinvOperator::build(IdentitySplitting::new(&a)?, &b, cfg.m, cfg.r_k)?;
            let t = start.elapsed().as_secs_f64();
            (solve_with_inverse(&a, &b, &pinv, x0_kind, &plain_x0, cfg.side, gm_opts)?, t)
        }
    };

    let uses_series = cfg.method.uses_series();
    Ok(BenchRow {
        problem: cfg.problem.to_string(),
        method: cfg.method,
        m: uses_series.then_some(cfg.m),
        r_k: uses_series.then_some(cfg.r_k),
        x0: x0_kind,
        maxit: cfg.maxit,
        report: report.with_setup_times(time_order, time_precond),
    })
}

fn solve_with_inverse(
    a: &CsrMatrix,
    b: &[f64],
    inv: &dyn LinearOperator,
    x0_kind: InitialGuess,
    plain_x0: &dyn Fn(InitialGuess) -> Vec<f64>,
    side: PslrSide,
    opts: GmresOptions,
) -> Result<SolveReport> {
    let x0 = match x0_kind {
        InitialGuess::Pre => inv.apply(b),
        other => plain_x0(other),
    };
    let precond = match side {
        PslrSide::Warm => None,
        PslrSide::Right => Some(inv),
    };
    Ok(gmres(a, b, &x0, opts, precond)?.1)
}

/// Runs independent configurations on `jobs` worker threads (1 = serial).
/// Results keep the input order.
pub fn run_sweep(cfgs: &[BenchConfig], jobs: usize) -> Vec<Result<BenchRow>> {
    if jobs <= 1 {
        return cfgs.iter().map(run_bench).collect();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(jobs).build() {
        Ok(pool) => pool.install(|| cfgs.par_iter().map(run_bench).collect()),
        Err(_) => cfgs.iter().map(run_bench).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench::Problem;

    #[test]
    fn gmres_on_banded() {
        let row = run_bench(&BenchConfig::new(Problem::Banded3, Method::Gmres)).unwrap();
        assert!(row.converged());
        assert_eq!(row.n_iter(), row.report.iterations.to_string());
        assert!(row.error() <= 1e-6);
        assert_eq!(row.m, None);
    }

    #[test]
    fn cg_rejects_nonsymmetric() {
        let cfg = BenchConfig::new(Problem::TridiagPaper, Method::Cg);
        assert!(matches!(run_bench(&cfg), Err(Error::Config(_))));
        let cfg = BenchConfig::new(Problem::Example1 { order: 256 }, Method::PcgIc0);
        assert!(matches!(run_bench(&cfg), Err(Error::Config(_))));
    }

    #[test]
    fn failure_markers() {
        let mut cfg = BenchConfig::new(Problem::Banded3, Method::Gmres);
        cfg.maxit = 2;
        let mut row = run_bench(&cfg).unwrap();
        assert_eq!(row.n_iter(), "F");
        row.maxit = LONG_RUN_MAXIT;
        assert_eq!(row.n_iter(), "-");
        row.report.status = SolveStatus::Breakdown;
        assert_eq!(row.n_iter(), "F");
    }

    #[test]
    fn reorder_reports_time_and_converges() {
        let mut cfg = BenchConfig::new(Problem::Example1 { order: 256 }, Method::PslrGmres);
        cfg.reorder = true;
        let row = run_bench(&cfg).unwrap();
        assert!(row.converged());
        assert!(row.report.time_order > 0.0);
    }

    #[test]
    fn sweep_keeps_order() {
        let cfgs: Vec<_> = [Method::Gmres, Method::JacobiGmres, Method::Pinv, Method::Cg]
            .into_iter()
            .map(|m| BenchConfig::new(Problem::Banded3, m))
            .collect();
        let rows = run_sweep(&cfgs, 3);
        for (row, cfg) in rows.iter().zip(&cfgs) {
            assert_eq!(row.as_ref().unwrap().method, cfg.method);
        }
    }
}

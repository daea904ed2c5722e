//! Comparison methods: Jacobi scaling, the Hermitian/skew-Hermitian splitting
//! iteration (two alternating shifted half-steps) and RCM ordering.

use std::collections::VecDeque;
use std::time::Instant;

use crate::error::{dim_err, Error, Result};
use crate::factor::ic0;
use crate::krylov::{gmres, pcg, CgOptions, GmresOptions, LinearOperator, SolveReport, SolveStatus};
use crate::linalg::vector::norm2;
use crate::linalg::CsrMatrix;

/// `v -> D⁻¹ v` with `D = diag(a)`.
#[derive(Debug, Clone)]
pub struct JacobiOperator {
    inv_diag: Vec<f64>,
}

impl LinearOperator for JacobiOperator {
    fn dim(&self) -> usize {
        self.inv_diag.len()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        for ((yi, xi), d) in y.iter_mut().zip(x).zip(&self.inv_diag) {
            *yi = xi * d;
        }
    }
}

pub fn jacobi_inverse(a: &CsrMatrix) -> Result<JacobiOperator> {
    if !a.is_square() {
        return Err(dim_err("Jacobi needs a square matrix"));
    }
    let diag = a.diagonal();
    if let Some(i) = diag.iter().position(|&d| d == 0.0) {
        return Err(Error::SingularMatrix(format!("zero diagonal entry at row {i}")));
    }
    Ok(JacobiOperator { inv_diag: diag.iter().map(|d| 1.0 / d).collect() })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdiConfig {
    /// Shift applied in both half-steps.
    pub alpha: f64,
    /// Stop when `‖b - a x‖ <= tol * ‖b‖`.
    pub tol: f64,
    pub maxit: usize,
}

impl Default for AdiConfig {
    fn default() -> Self {
        Self { alpha: 1.5, tol: 1e-6, maxit: 300 }
    }
}

const INNER_TOL: f64 = 1e-8;
const INNER_MAXIT: usize = 200;

/// Splitting iteration with `H = (a + aᵀ)/2`, `S = (a - aᵀ)/2`:
///
/// ```text
/// (H + αI) x_{k+1/2} = (αI - S) x_k + b        (PCG, IC(0) of H + αI)
/// (S + αI) x_{k+1}   = (αI - H) x_{k+1/2} + b  (GMRES)
/// ```
///
/// starting from `x_0 = 0`. Both inner solves are warm-started from the
/// current iterate. `residual_history` holds the true residual norms.
pub fn adi_solve(a: &CsrMatrix, b: &[f64], cfg: &AdiConfig) -> Result<(Vec<f64>, SolveReport)> {
    if !a.is_square() || b.len() != a.nrows() {
        return Err(dim_err("adi_solve needs a square matrix and matching right-hand side"));
    }
    if !(cfg.alpha > 0.0) || !(cfg.tol > 0.0) || cfg.maxit == 0 {
        return Err(Error::InvalidInput("adi_solve needs alpha > 0, tol > 0 and maxit >= 1".into()));
    }
    let start = Instant::now();
    let n = a.nrows();
    let at = a.transpose();
    let h = a.linear_combination(0.5, &at, 0.5)?;
    let s = a.linear_combination(0.5, &at, -0.5)?;
    let h_shift = h.shift_diagonal(cfg.alpha)?;
    let s_shift = s.shift_diagonal(cfg.alpha)?;
    let h_fact = ic0(&h_shift)?;
    let cg_opts = CgOptions { tol: INNER_TOL, maxit: INNER_MAXIT };
    let gm_opts = GmresOptions { tol: INNER_TOL, maxit: INNER_MAXIT };

    let residual = |x: &[f64]| -> f64 {
        let ax = a.spmv(x).expect("conforming");
        norm2(&b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect::<Vec<_>>())
    };
    let b_norm = norm2(b);
    let target = cfg.tol * b_norm;
    let mut x = vec![0.0; n];
    let mut history = vec![b_norm];
    let mut status = if b_norm == 0.0 { SolveStatus::Converged } else { SolveStatus::MaxIterations };

    let mut rhs = vec![0.0; n];
    let mut tmp = vec![0.0; n];
    while status == SolveStatus::MaxIterations && history.len() <= cfg.maxit {
        // (αI - S) x + b = 2αx - (S + αI) x + b
        s_shift.spmv_into(&x, &mut tmp);
        for i in 0..n {
            rhs[i] = 2.0 * cfg.alpha * x[i] - tmp[i] + b[i];
        }
        let (half, rep) = pcg(&h_shift, &rhs, &x, cg_opts, &h_fact)?;
        if rep.status == SolveStatus::Breakdown {
            status = SolveStatus::Breakdown;
            break;
        }
        h_shift.spmv_into(&half, &mut tmp);
        for i in 0..n {
            rhs[i] = 2.0 * cfg.alpha * half[i] - tmp[i] + b[i];
        }
        let (next, rep) = gmres(&s_shift, &rhs, &half, gm_opts, None)?;
        if rep.status == SolveStatus::Breakdown {
            status = SolveStatus::Breakdown;
            break;
        }
        x = next;
        let r = residual(&x);
        history.push(r);
        if r <= target {
            status = SolveStatus::Converged;
        }
    }
    let final_residual = residual(&x);
    Ok((x, SolveReport::new(history, status, b_norm, final_residual, start.elapsed().as_secs_f64())))
}

/// Reverse Cuthill-McKee ordering of the symmetrized pattern of `a`, as
/// `perm[new] = old`. Each connected component starts from a pseudo-peripheral
/// node of minimum degree.
pub fn rcm_order(a: &CsrMatrix) -> Result<Vec<usize>> {
    if !a.is_square() {
        return Err(dim_err("rcm_order needs a square matrix"));
    }
    let n = a.nrows();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    for (i, j, _) in a.triplets() {
        if i != j {
            adj[i].push(j);
            adj[j].push(i);
        }
    }
    for list in &mut adj {
        list.sort_unstable();
        list.dedup();
    }
    let degree: Vec<usize> = adj.iter().map(Vec::len).collect();

    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut by_degree: Vec<usize> = (0..n).collect();
    by_degree.sort_by_key(|&i| (degree[i], i));
    for &seed in &by_degree {
        if visited[seed] {
            continue;
        }
        let root = pseudo_peripheral(seed, &adj, &degree);
        visited[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            let mut next: Vec<usize> = adj[u].iter().copied().filter(|&v| !visited[v]).collect();
            next.sort_by_key(|&v| (degree[v], v));
            for v in next {
                visited[v] = true;
                queue.push_back(v);
            }
        }
    }
    order.reverse();
    Ok(order)
}

/// BFS levels from `root`: (eccentricity, nodes of the last level).
fn last_level(root: usize, adj: &[Vec<usize>]) -> (usize, Vec<usize>) {
    let mut dist = vec![usize::MAX; adj.len()];
    dist[root] = 0;
    let mut queue = VecDeque::from([root]);
    let mut reached = vec![root];
    while let Some(u) = queue.pop_front() {
        for &v in &adj[u] {
            if dist[v] == usize::MAX {
                dist[v] = dist[u] + 1;
                reached.push(v);
                queue.push_back(v);
            }
        }
    }
    let ecc = reached.iter().map(|&v| dist[v]).max().unwrap_or(0);
    (ecc, reached.into_iter().filter(|&v| dist[v] == ecc).collect())
}

fn pseudo_peripheral(seed: usize, adj: &[Vec<usize>], degree: &[usize]) -> usize {
    let mut root = seed;
    let (mut ecc, mut level) = last_level(root, adj);
    loop {
        let cand = match level.iter().min_by_key(|&&v| (degree[v], v)) {
            Some(&c) => c,
            None => return root,
        };
        let (e, l) = last_level(cand, adj);
        if e <= ecc {
            return root;
        }
        root = cand;
        ecc = e;
        level = l;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gen_banded;

    #[test]
    fn jacobi_examples() {
        let j = jacobi_inverse(&CsrMatrix::from_diagonal(&[2.0, 4.0])).unwrap();
        assert_eq!(j.apply(&[2.0, 4.0]), vec![1.0, 1.0]);
        let j = jacobi_inverse(&CsrMatrix::identity(3)).unwrap();
        assert_eq!(j.apply(&[1.0, 2.0, 3.0]), vec![1.0, 2.0, 3.0]);
        let z = CsrMatrix::from_triplets(2, 2, &[(0, 0, 1.0), (0, 1, 1.0)]).unwrap();
        assert!(matches!(jacobi_inverse(&z), Err(Error::SingularMatrix(_))));
    }

    #[test]
    fn adi_identity_is_fixed_point() {
        let a = CsrMatrix::identity(5);
        let b = [1.0, -1.0, 2.0, 0.5, 3.0];
        let (x, rep) = adi_solve(&a, &b, &AdiConfig::default()).unwrap();
        assert!(rep.converged());
        for (u, v) in x.iter().zip(&b) {
            assert!((u - v).abs() <= 1e-6 * 4.0);
        }
    }

    #[test]
    fn adi_converges_on_nonsymmetric() {
        let a = gen_banded(64, &[-1, 0, 1], &[-1.0, 3.0, 0.5]).unwrap();
        let (_, rep) = adi_solve(&a, &[1.0; 64], &AdiConfig::default()).unwrap();
        assert!(rep.converged(), "{:?}", rep.status);
        assert!(rep.final_residual <= 1e-6 * 8.0);
    }

    #[test]
    fn rcm_keeps_tridiagonal_band() {
        let a = gen_banded(20, &[-1, 0, 1], &[1.0, 4.0, 1.0]).unwrap();
        let perm = rcm_order(&a).unwrap();
        assert!(a.permute_symmetric(&perm).unwrap().bandwidth() <= 1);
    }

    #[test]
    fn rcm_reduces_arrow_bandwidth() {
        let n = 12;
        let mut t = vec![];
        for i in 0..n {
            t.push((i, i, 4.0));
            if i > 0 {
                t.push((0, i, 1.0));
                t.push((i, 0, 1.0));
            }
        }
        // a second, disconnected block
        let a = CsrMatrix::from_triplets(n + 2, n + 2, &[t, vec![(n, n, 1.0), (n + 1, n + 1, 1.0), (n, n + 1, 1.0), (n + 1, n, 1.0)]].concat())
            .unwrap();
        let perm = rcm_order(&a).unwrap();
        let mut seen = perm.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..n + 2).collect::<Vec<_>>());
        assert!(a.permute_symmetric(&perm).unwrap().bandwidth() < a.bandwidth());
    }
}

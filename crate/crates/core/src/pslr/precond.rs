use std::time::Instant;

use crate::error::{dim_err, Error, Result};
use crate::factor::{factor_exact, ic0, ilu0, FactorKind, Factorization, DENSE_FACTOR_LIMIT};
use crate::krylov::LinearOperator;
use crate::linalg::vector::{axpy, normalized_ones};
use crate::linalg::{CsrMatrix, SaddleSystem, Sign};
use crate::pslr::lowrank::LowRankCorrection;
use crate::pslr::series::{build_errop, series_apply, ErrOperator, SchurComplement, SchurM};

/// How the `AᵀA` block is factored.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AtaSolver {
    /// IC(0) when the block is symmetric, falling back to ILU(0) if IC(0)
    /// breaks down; ILU(0) otherwise.
    #[default]
    Auto,
    Ilu0,
    Ic0,
    /// Exact dense LU (order up to the dense limit).
    Lu,
    /// Exact dense Cholesky (order up to the dense limit).
    Cholesky,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PslrConfig {
    /// Highest power kept in the series for the Schur inverse.
    pub m: usize,
    /// Arnoldi steps for the low-rank correction.
    pub r_k: usize,
    pub ata_solver: AtaSolver,
}

impl Default for PslrConfig {
    fn default() -> Self {
        Self { m: 5, r_k: 15, ata_solver: AtaSolver::Auto }
    }
}

pub fn factor_ata(ata: &CsrMatrix, solver: AtaSolver) -> Result<Factorization> {
    match solver {
        AtaSolver::Auto => {
            if ata.is_symmetric(1e-12) {
                match ic0(ata) {
                    Err(Error::PivotBreakdown { .. }) => ilu0(ata),
                    other => other,
                }
            } else {
                ilu0(ata)
            }
        }
        AtaSolver::Ilu0 => ilu0(ata),
        AtaSolver::Ic0 => ic0(ata),
        AtaSolver::Lu => factor_exact(ata, FactorKind::Lu),
        AtaSolver::Cholesky => factor_exact(ata, FactorKind::Cholesky),
    }
}

/// Dense Cholesky up to the dense limit, IC(0) above it.
pub fn factor_c(c: &CsrMatrix) -> Result<Factorization> {
    if c.nrows() <= DENSE_FACTOR_LIMIT {
        factor_exact(c, FactorKind::Cholesky)
    } else {
        ic0(c)
    }
}

/// Block preconditioner for a saddle system: block elimination with the
/// Schur inverse replaced by `(Σ_{i=0}^{m} Mⁱ C⁻¹)(I + V G Vᵀ)`.
///
/// Immutable once built; applications are pure.
#[derive(Debug, Clone)]
pub struct PslrPreconditioner {
    ata_fact: Factorization,
    c_fact: Factorization,
    b: CsrMatrix,
    bt: CsrMatrix,
    c: CsrMatrix,
    sign: Sign,
    m: usize,
    r_k: usize,
    correction: LowRankCorrection,
    build_time: f64,
}

/// Factors the blocks per `cfg` and builds the preconditioner.
pub fn build_pslr(sys: &SaddleSystem, cfg: &PslrConfig) -> Result<PslrPreconditioner> {
    let start = Instant::now();
    check_rank(sys, cfg.r_k)?;
    let ata_fact = factor_ata(sys.ata(), cfg.ata_solver)?;
    let c_fact = factor_c(sys.c_block())?;
    let mut p = PslrPreconditioner::with_factors(sys, ata_fact, c_fact, cfg.m, cfg.r_k)?;
    p.build_time = start.elapsed().as_secs_f64();
    Ok(p)
}

fn check_rank(sys: &SaddleSystem, r_k: usize) -> Result<()> {
    if r_k == 0 || r_k > sys.p() {
        return Err(Error::InvalidInput(format!("r_k must lie in 1..={}, got {r_k}", sys.p())));
    }
    Ok(())
}

impl PslrPreconditioner {
    /// Builds from given factorizations of `AᵀA` and `C`.
    pub fn with_factors(
        sys: &SaddleSystem,
        ata_fact: Factorization,
        c_fact: Factorization,
        m: usize,
        r_k: usize,
    ) -> Result<Self> {
        let start = Instant::now();
        check_rank(sys, r_k)?;
        if ata_fact.dim() != sys.n() || c_fact.dim() != sys.p() {
            return Err(dim_err("factorizations do not match the saddle blocks"));
        }
        let correction = {
            let m_op = SchurM::new(sys.b_block(), sys.bt_block(), &ata_fact, &c_fact)?;
            let e = build_errop(m_op, sys.c_block(), &c_fact, m)?;
            LowRankCorrection::from_arnoldi(&e, &normalized_ones(sys.p()), r_k)?
        };
        Ok(Self {
            ata_fact,
            c_fact,
            b: sys.b_block().clone(),
            bt: sys.bt_block().clone(),
            c: sys.c_block().clone(),
            sign: sys.sign(),
            m,
            r_k,
            correction,
            build_time: start.elapsed().as_secs_f64(),
        })
    }

    pub fn n(&self) -> usize {
        self.ata_fact.dim()
    }

    pub fn p(&self) -> usize {
        self.c_fact.dim()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Requested Arnoldi rank.
    pub fn r_k(&self) -> usize {
        self.r_k
    }

    /// Rank actually obtained (smaller than `r_k` after an Arnoldi breakdown).
    pub fn rank(&self) -> usize {
        self.correction.rank()
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Wall time of the build in seconds.
    pub fn build_time(&self) -> f64 {
        self.build_time
    }

    pub fn correction(&self) -> &LowRankCorrection {
        &self.correction
    }

    pub fn ata_factor(&self) -> &Factorization {
        &self.ata_fact
    }

    pub fn c_factor(&self) -> &Factorization {
        &self.c_fact
    }

    pub fn c_block(&self) -> &CsrMatrix {
        &self.c
    }

    /// `M` built from the stored factorizations.
    pub fn schur_m(&self) -> SchurM<'_> {
        SchurM::new(&self.b, &self.bt, &self.ata_fact, &self.c_fact).expect("validated at build")
    }

    /// `S = C + B K⁻¹ Bᵀ`, where `K⁻¹` is the stored (possibly incomplete)
    /// factorization of `AᵀA`.
    pub fn schur(&self) -> SchurComplement<'_> {
        SchurComplement::new(self.schur_m(), &self.c)
    }

    /// `E(m) = C M^{m+1} C⁻¹`.
    pub fn err_op(&self) -> ErrOperator<'_, SchurM<'_>> {
        build_errop(self.schur_m(), &self.c, &self.c_fact, self.m).expect("validated at build")
    }

    /// Approximate `S⁻¹ g`, with or without the low-rank correction.
    pub fn apply_schur_inverse(&self, g: &[f64], low_rank: bool) -> Vec<f64> {
        let t = if low_rank { self.correction.apply(g) } else { g.to_vec() };
        let w = self.c_fact.solve(&t);
        series_apply(&self.schur_m(), self.m, w)
    }

    /// The approximate Schur inverse as an operator of dimension `p`.
    pub fn schur_inverse(&self, low_rank: bool) -> SchurInverse<'_> {
        SchurInverse { pre: self, low_rank }
    }

    /// `S_app⁻¹ S`, whose eigenvalues cluster at one for a good preconditioner.
    pub fn preconditioned_schur(&self, low_rank: bool) -> PreconditionedSchur<'_> {
        PreconditionedSchur { pre: self, low_rank }
    }
}

/// Applies the preconditioner to `b = (f, g)`.
pub fn apply_pslr(pre: &PslrPreconditioner, b: &[f64]) -> Result<Vec<f64>> {
    if b.len() != pre.n() + pre.p() {
        return Err(dim_err(format!("apply_pslr: length {} for dimension {}", b.len(), pre.n() + pre.p())));
    }
    Ok(pre.apply(b))
}

impl LinearOperator for PslrPreconditioner {
    fn dim(&self) -> usize {
        self.n() + self.p()
    }

    fn apply_into(&self, b: &[f64], out: &mut [f64]) {
        let n = self.n();
        let (f, g) = b.split_at(n);
        let kf = self.ata_fact.solve(f);
        let bkf = self.b.spmv(&kf).expect("conforming");
        // right-hand side of the Schur system S y = ĝ
        let ghat: Vec<f64> = match self.sign {
            Sign::Positive => g.iter().zip(&bkf).map(|(gi, bi)| gi + bi).collect(),
            Sign::Negative => g.iter().zip(&bkf).map(|(gi, bi)| bi - gi).collect(),
        };
        let y = self.apply_schur_inverse(&ghat, true);
        let mut rhs = f.to_vec();
        axpy(-1.0, &self.bt.spmv(&y).expect("conforming"), &mut rhs);
        let (xo, yo) = out.split_at_mut(n);
        self.ata_fact.solve_into(&rhs, xo);
        yo.copy_from_slice(&y);
    }
}

pub struct SchurInverse<'a> {
    pre: &'a PslrPreconditioner,
    low_rank: bool,
}

impl LinearOperator for SchurInverse<'_> {
    fn dim(&self) -> usize {
        self.pre.p()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(&self.pre.apply_schur_inverse(x, self.low_rank));
    }
}

pub struct PreconditionedSchur<'a> {
    pre: &'a PslrPreconditioner,
    low_rank: bool,
}

impl LinearOperator for PreconditionedSchur<'_> {
    fn dim(&self) -> usize {
        self.pre.p()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        let s = self.pre.schur().apply(x);
        y.copy_from_slice(&self.pre.apply_schur_inverse(&s, self.low_rank));
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor::factor_dense;
    use crate::krylov::densify;
    use crate::linalg::{gen_example1, random_saddle, vector::norm2, DenseMatrix};

    fn scalar(v: f64) -> CsrMatrix {
        CsrMatrix::from_triplets(1, 1, &[(0, 0, v)]).unwrap()
    }

    #[test]
    fn decoupled_blocks() {
        let ata = crate::linalg::gen_banded(4, &[-1, 0, 1], &[1.0, 4.0, 1.0]).unwrap();
        let sys = SaddleSystem::new(ata.clone(), CsrMatrix::zeros(3, 4), CsrMatrix::identity(3), Sign::Positive).unwrap();
        let cfg = PslrConfig { m: 3, r_k: 2, ata_solver: AtaSolver::Cholesky };
        let pre = build_pslr(&sys, &cfg).unwrap();
        assert!(pre.correction().g().max_abs() < 1e-15);
        let b = [1.0, 2.0, 3.0, 4.0, 5.0, 6.0, 7.0];
        let z = pre.apply(&b);
        let x = factor_exact(&ata, FactorKind::Cholesky).unwrap().solve(&b[..4]);
        for (a, w) in z[..4].iter().zip(&x) {
            assert!((a - w).abs() < 1e-14);
        }
        assert_eq!(&z[4..], &b[4..]);
    }

    #[test]
    fn scalar_system_is_exact() {
        for sign in [Sign::Positive, Sign::Negative] {
            let sys = SaddleSystem::new(scalar(4.0), scalar(2.0), scalar(1.0), sign).unwrap();
            let cfg = PslrConfig { m: 2, r_k: 1, ata_solver: AtaSolver::Cholesky };
            let pre = build_pslr(&sys, &cfg).unwrap();
            let b = [1.0, 3.0];
            let z = apply_pslr(&pre, &b).unwrap();
            let a = sys.assemble().to_dense();
            let exact = factor_dense(&a, FactorKind::Lu).unwrap().solve(&b);
            for (u, v) in z.iter().zip(&exact) {
                assert!((u - v).abs() < 1e-12, "{sign:?}: {z:?} vs {exact:?}");
            }
        }
    }

    #[test]
    fn example1_builds() {
        let sys = gen_example1();
        let pre = build_pslr(&sys, &PslrConfig::default()).unwrap();
        assert!(pre.build_time() >= 0.0);
        assert!(pre.rank() <= 15);
        let v = pre.correction().basis();
        let vtv = v.transpose().matmul(v).unwrap();
        let k = pre.rank();
        assert!(vtv.linear_combination(1.0, &DenseMatrix::identity(k), -1.0).unwrap().frobenius_norm() < 1e-10);
    }

    #[test]
    fn full_rank_matches_dense_schur_inverse() {
        let sys = random_saddle(40, 40, 3).unwrap();
        let kf = factor_exact(sys.ata(), FactorKind::Cholesky).unwrap();
        let cf = factor_exact(sys.c_block(), FactorKind::Cholesky).unwrap();
        let pre = PslrPreconditioner::with_factors(&sys, kf, cf, 3, 40).unwrap();
        let s = densify(&pre.schur());
        let s_inv = factor_dense(&s, FactorKind::Lu).unwrap();
        let g: Vec<f64> = (0..40).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
        let want = s_inv.solve(&g);
        let got = pre.apply_schur_inverse(&g, true);
        let diff: Vec<f64> = got.iter().zip(&want).map(|(a, b)| a - b).collect();
        assert!(norm2(&diff) <= 1e-8 * norm2(&want));
    }

    #[test]
    fn rank_out_of_range() {
        let sys = gen_example1();
        let cfg = PslrConfig { r_k: 0, ..Default::default() };
        assert!(matches!(build_pslr(&sys, &cfg), Err(Error::InvalidInput(_))));
        let cfg = PslrConfig { r_k: 129, ..Default::default() };
        assert!(build_pslr(&sys, &cfg).is_err());
    }
}

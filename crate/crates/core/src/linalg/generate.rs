//! Test-problem generators.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{dim_err, Error, Result};
use crate::linalg::{CsrMatrix, SaddleSystem, Sign};

/// Toeplitz band matrix with `vals[k]` on diagonal `offsets[k]`
/// (negative offsets are below the main diagonal).
pub fn gen_banded(n: usize, offsets: &[isize], vals: &[f64]) -> Result<CsrMatrix> {
    if offsets.len() != vals.len() {
        return Err(dim_err("offsets and vals must have equal length"));
    }
    for (k, &o) in offsets.iter().enumerate() {
        if o.unsigned_abs() >= n.max(1) {
            return Err(dim_err(format!("offset {o} invalid for order {n}")));
        }
        if offsets[..k].contains(&o) {
            return Err(dim_err(format!("offset {o} repeated")));
        }
    }
    let mut triplets = Vec::with_capacity(n * offsets.len());
    for i in 0..n {
        for (&o, &v) in offsets.iter().zip(vals) {
            let j = i as isize + o;
            if j >= 0 && (j as usize) < n {
                triplets.push((i, j as usize, v));
            }
        }
    }
    CsrMatrix::from_triplets(n, n, &triplets)
}

/// The order-256 test system: `AᵀA = tridiag(1, 4, 1)` of order 128, `B` with
/// a single unit entry so that `Bᵀ` has its 1 in the bottom-left corner,
/// `C = I`, positive sign.
pub fn gen_example1() -> SaddleSystem {
    gen_example1_with_order(256).expect("order 256 is valid")
}

/// Same band pattern at assembled order `order` (blocks of order `order / 2`).
pub fn gen_example1_with_order(order: usize) -> Result<SaddleSystem> {
    if order < 4 || order % 2 != 0 {
        return Err(Error::InvalidInput(format!("order must be even and >= 4, got {order}")));
    }
    let n = order / 2;
    let ata = gen_banded(n, &[-1, 0, 1], &[1.0, 4.0, 1.0])?;
    let b = CsrMatrix::from_triplets(n, n, &[(0, n - 1, 1.0)])?;
    SaddleSystem::new(ata, b, CsrMatrix::identity(n), Sign::Positive)
}

/// Random sparse saddle system with positive sign.
///
/// `AᵀA` is formed from a diagonally dominant sparse `A` (diagonal 2, three
/// off-diagonal entries per row in `[-0.5, 0.5]`), `C` is diagonal with
/// entries in `[1, 2]`. Row `i` of `B` has an entry of magnitude in `[0.5, 1]`
/// at column `i * n / p` plus two more in `[-1, 1]`, so when `p <= n` the
/// leading entries sit in distinct columns and `B` has full row rank with
/// high probability.
pub fn random_saddle(n: usize, p: usize, seed: u64) -> Result<SaddleSystem> {
    if n == 0 || p == 0 {
        return Err(Error::InvalidInput("random_saddle needs n, p >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a_trip = Vec::with_capacity(4 * n);
    for i in 0..n {
        a_trip.push((i, i, 2.0));
        if n > 1 {
            for _ in 0..3 {
                let j = rng.random_range(0..n);
                if j != i {
                    a_trip.push((i, j, rng.random_range(-0.5..0.5)));
                }
            }
        }
    }
    let a = CsrMatrix::from_triplets(n, n, &a_trip)?;
    let ata = a.transpose().matmul(&a)?;
    // AᵀA is symmetric in exact arithmetic; enforce it bitwise
    let ata = ata.linear_combination(0.5, &ata.transpose(), 0.5)?;

    let b = random_coupling(&mut rng, p, n)?;
    let c_diag: Vec<f64> = (0..p).map(|_| rng.random_range(1.0..2.0)).collect();
    SaddleSystem::new(ata, b, CsrMatrix::from_diagonal(&c_diag), Sign::Positive)
}

/// Saddle system around a given `AᵀA`: `B` is square with the same random
/// pattern as in [`random_saddle`], `C = I`, positive sign.
pub fn saddle_from_ata(ata: CsrMatrix, seed: u64) -> Result<SaddleSystem> {
    let n = ata.nrows();
    if n == 0 || !ata.is_square() {
        return Err(Error::InvalidInput("saddle_from_ata needs a nonempty square block".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let b = random_coupling(&mut rng, n, n)?;
    SaddleSystem::new(ata, b, CsrMatrix::identity(n), Sign::Positive)
}

fn random_coupling(rng: &mut ChaCha8Rng, p: usize, n: usize) -> Result<CsrMatrix> {
    let mut b_trip = Vec::with_capacity(3 * p);
    for i in 0..p {
        let lead = rng.random_range(0.5..1.0) * if rng.random::<bool>() { 1.0 } else { -1.0 };
        b_trip.push((i, i * n / p, lead));
        for _ in 0..2 {
            let j = rng.random_range(0..n);
            b_trip.push((i, j, rng.random_range(-1.0..1.0)));
        }
    }
    CsrMatrix::from_triplets(p, n, &b_trip)
}

/// Uniform `[0, 1)` vector from a seeded ChaCha8 stream.
pub fn random_vector(len: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..len).map(|_| rng.random::<f64>()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::DenseMatrix;

    #[test]
    fn banded_tridiagonal() {
        let a = gen_banded(3, &[-1, 0, 1], &[2.0, 6.0, 2.0]).unwrap();
        let expect = DenseMatrix::from_rows(&[
            vec![6.0, 2.0, 0.0],
            vec![2.0, 6.0, 2.0],
            vec![0.0, 2.0, 6.0],
        ])
        .unwrap();
        assert_eq!(a.to_dense(), expect);
    }

    #[test]
    fn banded_five_diagonal() {
        let a = gen_banded(4, &[-2, -1, 0, 1, 2], &[1.0, 2.0, 6.0, 2.0, 1.0]).unwrap();
        let expect = DenseMatrix::from_rows(&[
            vec![6.0, 2.0, 1.0, 0.0],
            vec![2.0, 6.0, 2.0, 1.0],
            vec![1.0, 2.0, 6.0, 2.0],
            vec![0.0, 1.0, 2.0, 6.0],
        ])
        .unwrap();
        assert_eq!(a.to_dense(), expect);
    }

    #[test]
    fn banded_nonsymmetric() {
        let a = gen_banded(3, &[-1, 0, 1], &[-1.0, 2.0, 0.5]).unwrap();
        let expect = DenseMatrix::from_rows(&[
            vec![2.0, 0.5, 0.0],
            vec![-1.0, 2.0, 0.5],
            vec![0.0, -1.0, 2.0],
        ])
        .unwrap();
        assert_eq!(a.to_dense(), expect);
        assert!(!a.is_symmetric(1e-12));
    }

    #[test]
    fn banded_invalid() {
        assert!(gen_banded(3, &[3], &[1.0]).is_err());
        assert!(gen_banded(3, &[0, 0], &[1.0, 2.0]).is_err());
        assert!(gen_banded(3, &[0, 1], &[1.0]).is_err());
    }

    #[test]
    fn example1_blocks() {
        let sys = gen_example1();
        assert_eq!(sys.n(), 128);
        assert_eq!(sys.ata().get(0, 0), 4.0);
        assert_eq!(sys.ata().get(0, 1), 1.0);
        assert_eq!(sys.b_block().nnz(), 1);
        assert_eq!(sys.bt_block().get(127, 0), 1.0);
        assert_eq!(sys.c_block(), &CsrMatrix::identity(128));
        assert_eq!(sys.sign(), Sign::Positive);
    }

    #[test]
    fn random_saddle_is_deterministic() {
        let a = random_saddle(20, 10, 7).unwrap();
        let b = random_saddle(20, 10, 7).unwrap();
        assert_eq!(a.ata(), b.ata());
        assert_eq!(a.b_block(), b.b_block());
        assert!(a.ata().is_symmetric(0.0));
        assert_eq!(random_vector(5, 3), random_vector(5, 3));
    }
}

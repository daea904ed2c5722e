use crate::factor::Factorization;
use crate::linalg::{CsrMatrix, DenseMatrix};

/// A square linear map applied matrix-free.
pub trait LinearOperator {
    fn dim(&self) -> usize;

    /// `y = op(x)`; both slices have length `dim()`.
    fn apply_into(&self, x: &[f64], y: &mut [f64]);

    fn apply(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim()];
        self.apply_into(x, &mut y);
        y
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for &T {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply_into(x, y)
    }
}

impl<T: LinearOperator + ?Sized> LinearOperator for Box<T> {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        (**self).apply_into(x, y)
    }
}

impl LinearOperator for CsrMatrix {
    fn dim(&self) -> usize {
        debug_assert!(self.is_square());
        self.nrows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.spmv_into(x, y)
    }
}

impl LinearOperator for DenseMatrix {
    fn dim(&self) -> usize {
        debug_assert_eq!(self.nrows(), self.ncols());
        self.nrows()
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        for (i, yi) in y.iter_mut().enumerate() {
            *yi = self.row(i).iter().zip(x).map(|(a, b)| a * b).sum();
        }
    }
}

/// A factorization acts as its (approximate) inverse.
impl LinearOperator for Factorization {
    fn dim(&self) -> usize {
        Factorization::dim(self)
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        self.solve_into(x, y)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Identity(pub usize);

impl LinearOperator for Identity {
    fn dim(&self) -> usize {
        self.0
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        y.copy_from_slice(x)
    }
}

/// Wraps a closure `x -> y` of fixed dimension.
pub struct FnOperator<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64], &mut [f64])> FnOperator<F> {
    pub fn new(dim: usize, f: F) -> Self {
        Self { dim, f }
    }
}

impl<F: Fn(&[f64], &mut [f64])> LinearOperator for FnOperator<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply_into(&self, x: &[f64], y: &mut [f64]) {
        (self.f)(x, y)
    }
}

/// Materializes `op` column by column.
pub fn densify(op: &dyn LinearOperator) -> DenseMatrix {
    let n = op.dim();
    let mut out = DenseMatrix::zeros(n, n);
    let mut e = vec![0.0; n];
    let mut col = vec![0.0; n];
    for j in 0..n {
        e[j] = 1.0;
        op.apply_into(&e, &mut col);
        for i in 0..n {
            out[(i, j)] = col[i];
        }
        e[j] = 0.0;
    }
    out
}

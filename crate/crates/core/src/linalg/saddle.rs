use crate::error::{dim_err, Error, Result};
use crate::linalg::CsrMatrix;

/// Sign convention of the lower block row.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    /// `[AᵀA, Bᵀ; -B, C]`
    Positive,
    /// `[AᵀA, Bᵀ; B, -C]`
    Negative,
}

/// The blocks of a 2x2 saddle-point matrix.
///
/// `ata` is `n x n` SPD, `b_block` is `p x n`, `c_block` is `p x p` SPD.
/// `Bᵀ` is materialized once on construction.
#[derive(Debug, Clone)]
pub struct SaddleSystem {
    ata: CsrMatrix,
    b_block: CsrMatrix,
    bt_block: CsrMatrix,
    c_block: CsrMatrix,
    sign: Sign,
}

const SYMMETRY_TOL: f64 = 1e-12;

impl SaddleSystem {
    pub fn new(ata: CsrMatrix, b_block: CsrMatrix, c_block: CsrMatrix, sign: Sign) -> Result<Self> {
        let n = ata.nrows();
        let p = c_block.nrows();
        if !ata.is_square() || !c_block.is_square() {
            return Err(dim_err("AᵀA and C must be square"));
        }
        if b_block.nrows() != p || b_block.ncols() != n {
            return Err(dim_err(format!(
                "B is {}x{}, expected {p}x{n}",
                b_block.nrows(),
                b_block.ncols()
            )));
        }
        if !ata.is_symmetric(SYMMETRY_TOL) {
            return Err(Error::InvalidInput("AᵀA block is not symmetric".into()));
        }
        if !c_block.is_symmetric(SYMMETRY_TOL) {
            return Err(Error::InvalidInput("C block is not symmetric".into()));
        }
        let bt_block = b_block.transpose();
        Ok(Self { ata, b_block, bt_block, c_block, sign })
    }

    pub fn ata(&self) -> &CsrMatrix {
        &self.ata
    }

    pub fn b_block(&self) -> &CsrMatrix {
        &self.b_block
    }

    pub fn bt_block(&self) -> &CsrMatrix {
        &self.bt_block
    }

    pub fn c_block(&self) -> &CsrMatrix {
        &self.c_block
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Size of the primal block.
    pub fn n(&self) -> usize {
        self.ata.nrows()
    }

    /// Size of the constraint block.
    pub fn p(&self) -> usize {
        self.c_block.nrows()
    }

    pub fn dim(&self) -> usize {
        self.n() + self.p()
    }

    pub fn assemble(&self) -> CsrMatrix {
        assemble_saddle(self)
    }

    /// Relabels the primal unknowns: `AᵀA -> P AᵀA Pᵀ`, `B -> B Pᵀ`.
    pub fn permute_primal(&self, perm: &[usize]) -> Result<Self> {
        let ata = self.ata.permute_symmetric(perm)?;
        let b = self.b_block.permute_columns(perm)?;
        Self::new(ata, b, self.c_block.clone(), self.sign)
    }
}

/// Places the blocks into one `(n+p) x (n+p)` CSR matrix according to the sign.
pub fn assemble_saddle(sys: &SaddleSystem) -> CsrMatrix {
    let n = sys.n();
    let p = sys.p();
    let (lower_left, lower_right) = match sys.sign {
        Sign::Positive => (-1.0, 1.0),
        Sign::Negative => (1.0, -1.0),
    };
    let nnz = sys.ata.nnz() + 2 * sys.b_block.nnz() + sys.c_block.nnz();
    let mut row_ptr = Vec::with_capacity(n + p + 1);
    let mut col_idx = Vec::with_capacity(nnz);
    let mut values = Vec::with_capacity(nnz);
    row_ptr.push(0);
    for i in 0..n {
        let (c, v) = sys.ata.row(i);
        col_idx.extend_from_slice(c);
        values.extend_from_slice(v);
        let (c, v) = sys.bt_block.row(i);
        col_idx.extend(c.iter().map(|j| j + n));
        values.extend_from_slice(v);
        row_ptr.push(col_idx.len());
    }
    for i in 0..p {
        let (c, v) = sys.b_block.row(i);
        col_idx.extend_from_slice(c);
        values.extend(v.iter().map(|x| lower_left * x));
        let (c, v) = sys.c_block.row(i);
        col_idx.extend(c.iter().map(|j| j + n));
        values.extend(v.iter().map(|x| lower_right * x));
        row_ptr.push(col_idx.len());
    }
    CsrMatrix::from_parts_unchecked(n + p, n + p, row_ptr, col_idx, values)
}

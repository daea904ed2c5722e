//! Power-series Schur-complement low-rank (PSLR) preconditioning for 2x2 block
//! saddle-point systems
//!
//! ```text
//! [ AᵀA   Bᵀ ] [x]   [f]
//! [ ±B    ∓C ] [y] = [g]
//! ```
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`]: CSR and small dense matrices, Matrix Market I/O, saddle-point
//!   block assembly and the test-problem generators.
//! * [`factor`]: ILU(0), IC(0) and exact dense LU/Cholesky factorizations,
//!   applied as triangular solves.
//! * [`krylov`]: matrix-free operators, Arnoldi, full GMRES, CG and PCG.
//! * [`pslr`]: the truncated Neumann series for the Schur complement inverse,
//!   the Arnoldi low-rank correction of its remainder, the PSLR preconditioner,
//!   the general-matrix `Pinv` solver and error diagnostics.
//! * [`baselines`]: Jacobi, the HSS ("ADI") splitting iteration and RCM ordering.
//! * [`bench`]: problem catalogue, solver matchups, CSV/Markdown reports and
//!   eigenvalue scatter emission.

pub mod baselines;
pub mod bench;
pub mod error;
pub mod factor;
pub mod krylov;
pub mod linalg;
pub mod pslr;

pub use error::{Error, Result};
pub use factor::{FactorKind, Factorization};
pub use krylov::{LinearOperator, SolveReport, SolveStatus};
pub use linalg::{CsrMatrix, DenseMatrix, SaddleSystem, Sign};
pub use pslr::{PslrConfig, PslrPreconditioner};

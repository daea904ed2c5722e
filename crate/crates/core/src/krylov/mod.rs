//! Matrix-free operators and Krylov solvers.

mod arnoldi;
mod cg;
mod gmres;
mod operator;
mod report;

pub use arnoldi::{arnoldi, arnoldi_restarting, ArnoldiResult, ARNOLDI_BREAKDOWN_TOL};
pub use cg::{cg, pcg, CgOptions};
pub use gmres::{gmres, GmresOptions};
pub use operator::{densify, FnOperator, Identity, LinearOperator};
pub use report::{SolveReport, SolveStatus};

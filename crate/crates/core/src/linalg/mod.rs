//! Matrix and vector primitives.

mod csr;
mod dense;
pub mod generate;
pub mod mm;
mod saddle;
pub mod vector;

pub use csr::CsrMatrix;
pub use dense::DenseMatrix;
pub use generate::{gen_banded, gen_example1, gen_example1_with_order, random_saddle, random_vector, saddle_from_ata};
pub use mm::{mm_read, mm_write};
pub use saddle::{assemble_saddle, SaddleSystem, Sign};

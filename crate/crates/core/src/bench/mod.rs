//! Benchmark harness: problem catalogue, solver matchups, CSV/Markdown
//! reports and eigenvalue scatter data.

mod config;
mod output;
mod problem;
mod run;
mod spectrum;

pub use config::{BenchConfig, InitialGuess, Method, Problem, PslrSide, DEFAULT_MAX_M};
pub use output::{write_csv, write_markdown, CSV_HEADER};
pub use problem::{Instance, System};
pub use run::{run_bench, run_sweep, BenchRow, LONG_RUN_MAXIT};
pub use spectrum::{
    eigenvalues, emit_spectrum, spectrum_matrix, write_spectrum, SpectrumTarget, DEFAULT_SPECTRUM_CAP,
};

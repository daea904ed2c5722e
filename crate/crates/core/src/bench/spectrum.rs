use std::fs::File;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use crate::bench::problem::System;
use crate::bench::BenchConfig;
use crate::error::{Error, Result};
use crate::krylov::{densify, LinearOperator};
use crate::linalg::DenseMatrix;
use crate::pslr::{build_pslr, PslrConfig};

pub const DEFAULT_SPECTRUM_CAP: usize = 1024;

/// Eigenvalues of a dense square matrix as `(re, im)` pairs.
pub fn eigenvalues(a: &DenseMatrix) -> Result<Vec<(f64, f64)>> {
    let n = a.nrows();
    let m = faer::Mat::<f64>::from_fn(n, n, |i, j| a[(i, j)]);
    let eig = m
        .eigenvalues()
        .map_err(|_| Error::NoConvergence(format!("eigenvalue iteration on a {n}x{n} matrix")))?;
    Ok(eig.into_iter().map(|c| (c.re, c.im)).collect())
}

fn fmt_value(v: f64) -> String {
    // normalize -0.0 so that equal spectra print identically
    let v = if v == 0.0 { 0.0 } else { v };
    format!("{v:?}")
}

/// Densifies `op` and writes its eigenvalues as CSV with header `re,im`.
pub fn write_spectrum<W: Write>(op: &dyn LinearOperator, out: W, cap: usize) -> Result<Vec<(f64, f64)>> {
    if op.dim() > cap {
        return Err(Error::Config(format!("dimension {} exceeds the spectrum cap {cap}", op.dim())));
    }
    let eig = eigenvalues(&densify(op))?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::Config(format!("csv output failed: {e}"));
    w.write_record(["re", "im"]).map_err(io)?;
    for &(re, im) in &eig {
        w.write_record([fmt_value(re), fmt_value(im)]).map_err(io)?;
    }
    w.flush()?;
    Ok(eig)
}

pub fn emit_spectrum(op: &dyn LinearOperator, out: &Path, cap: usize) -> Result<Vec<(f64, f64)>> {
    if op.dim() > cap {
        return Err(Error::Config(format!("dimension {} exceeds the spectrum cap {cap}", op.dim())));
    }
    write_spectrum(op, File::create(out)?, cap)
}

/// What to take the spectrum of.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpectrumTarget {
    /// The system matrix (assembled for saddle problems).
    Matrix,
    /// `S_app⁻¹ S` with the series only.
    SchurSeries,
    /// `S_app⁻¹ S` with series and low-rank correction.
    SchurPslr,
}

impl FromStr for SpectrumTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "matrix" => Ok(SpectrumTarget::Matrix),
            "schur-series" => Ok(SpectrumTarget::SchurSeries),
            "schur-pslr" => Ok(SpectrumTarget::SchurPslr),
            _ => Err(Error::Config(format!("unknown spectrum target {s:?}"))),
        }
    }
}

/// Dense matrix whose eigenvalues `target` asks for, built from the problem,
/// `m`, `r_k` and AᵀA solver in `cfg`.
pub fn spectrum_matrix(cfg: &BenchConfig, target: SpectrumTarget, cap: usize) -> Result<DenseMatrix> {
    let inst = cfg.problem.instance(cfg.method, cfg.seed)?;
    let check = |dim: usize| {
        if dim > cap {
            Err(Error::Config(format!("dimension {dim} exceeds the spectrum cap {cap}")))
        } else {
            Ok(())
        }
    };
    match (target, &inst.system) {
        (SpectrumTarget::Matrix, _) => {
            let a = inst.matrix();
            check(a.nrows())?;
            Ok(a.to_dense())
        }
        (_, System::Matrix(_)) => Err(Error::Config("Schur spectra need a saddle problem".into())),
        (t, System::Saddle(sys)) => {
            check(sys.p())?;
            let pcfg = PslrConfig { m: cfg.m, r_k: cfg.r_k, ata_solver: cfg.ata_solver };
            let pre = build_pslr(sys, &pcfg)?;
            Ok(densify(&pre.preconditioned_schur(t == SpectrumTarget::SchurPslr)))
        }
    }
}

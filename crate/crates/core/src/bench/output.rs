use std::io::Write;

use crate::bench::BenchRow;
use crate::error::{Error, Result};

pub const CSV_HEADER: [&str; 12] =
    ["problem", "method", "m", "r_k", "x0", "o-t", "p-t", "i-t", "t-t", "n-iter", "error", "status"];

fn opt(v: Option<usize>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl BenchRow {
    /// Cells in [`CSV_HEADER`] order. Times are seconds with six decimals.
    pub fn cells(&self) -> [String; 12] {
        let r = &self.report;
        [
            self.problem.clone(),
            self.method.to_string(),
            opt(self.m),
            opt(self.r_k),
            self.x0.to_string(),
            format!("{:.6}", r.time_order),
            format!("{:.6}", r.time_precond),
            format!("{:.6}", r.time_iterate),
            format!("{:.6}", r.time_total),
            self.n_iter(),
            format!("{:.6e}", self.error()),
            format!("{:?}", r.status),
        ]
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Config(format!("csv output failed: {other:?}")),
    }
}

/// RFC 4180 CSV with a header row.
pub fn write_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(CSV_HEADER).map_err(csv_err)?;
    for row in rows {
        w.write_record(row.cells()).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Pipe table with the CSV columns.
pub fn write_markdown<W: Write>(rows: &[BenchRow], mut out: W) -> Result<()> {
    writeln!(out, "| {} |", CSV_HEADER.join(" | "))?;
    writeln!(out, "|{}", "---|".repeat(CSV_HEADER.len()))?;
    for row in rows {
        writeln!(out, "| {} |", row.cells().join(" | "))?;
    }
    Ok(())
}

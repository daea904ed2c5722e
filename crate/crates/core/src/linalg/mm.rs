//! Matrix Market coordinate format (real/integer, general/symmetric).

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::CsrMatrix;

pub fn mm_read(path: impl AsRef<Path>) -> Result<CsrMatrix> {
    let file = File::open(path)?;
    mm_read_from(BufReader::new(file))
}

/// Parses a Matrix Market coordinate stream into canonical CSR.
///
/// Symmetric storage is mirrored to full storage, indices are converted to
/// zero-based and duplicate entries are summed.
pub fn mm_read_from<R: BufRead>(reader: R) -> Result<CsrMatrix> {
    let mut lines = reader.lines().enumerate();

    let (_, header) = lines
        .next()
        .ok_or_else(|| Error::Parse { line: 1, msg: "empty input".into() })?;
    let header = header?;
    let tokens: Vec<String> = header.split_whitespace().map(str::to_ascii_lowercase).collect();
    if tokens.len() != 5 || tokens[0] != "%%matrixmarket" || tokens[1] != "matrix" {
        return Err(Error::Parse { line: 1, msg: format!("malformed header: {header:?}") });
    }
    if tokens[2] != "coordinate" {
        return Err(Error::UnsupportedFormat(format!("{} storage", tokens[2])));
    }
    match tokens[3].as_str() {
        "real" | "integer" => {}
        "pattern" | "complex" => return Err(Error::UnsupportedFormat(format!("{} field", tokens[3]))),
        other => return Err(Error::Parse { line: 1, msg: format!("unknown field {other:?}") }),
    }
    let symmetric = match tokens[4].as_str() {
        "general" => false,
        "symmetric" => true,
        "skew-symmetric" | "hermitian" => {
            return Err(Error::UnsupportedFormat(format!("{} symmetry", tokens[4])))
        }
        other => return Err(Error::Parse { line: 1, msg: format!("unknown symmetry {other:?}") }),
    };

    let mut size: Option<(usize, usize, usize)> = None;
    let mut triplets = Vec::new();
    let mut read_entries = 0usize;
    for (idx, line) in lines {
        let lineno = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        let parse_usize = |s: &str| {
            s.parse::<usize>()
                .map_err(|_| Error::Parse { line: lineno, msg: format!("bad integer {s:?}") })
        };
        match size {
            None => {
                if fields.len() != 3 {
                    return Err(Error::Parse { line: lineno, msg: "expected 'rows cols nnz'".into() });
                }
                let (r, c, nz) = (parse_usize(fields[0])?, parse_usize(fields[1])?, parse_usize(fields[2])?);
                if symmetric && r != c {
                    return Err(Error::Parse { line: lineno, msg: "symmetric matrix must be square".into() });
                }
                size = Some((r, c, nz));
                triplets.reserve(if symmetric { 2 * nz } else { nz });
            }
            Some((nrows, ncols, _)) => {
                if fields.len() != 3 {
                    return Err(Error::Parse { line: lineno, msg: "expected 'row col value'".into() });
                }
                let i = parse_usize(fields[0])?;
                let j = parse_usize(fields[1])?;
                let v: f64 = fields[2]
                    .parse()
                    .map_err(|_| Error::Parse { line: lineno, msg: format!("bad value {:?}", fields[2]) })?;
                if i == 0 || j == 0 || i > nrows || j > ncols {
                    return Err(Error::Parse {
                        line: lineno,
                        msg: format!("index ({i}, {j}) outside declared {nrows}x{ncols}"),
                    });
                }
                triplets.push((i - 1, j - 1, v));
                if symmetric && i != j {
                    triplets.push((j - 1, i - 1, v));
                }
                read_entries += 1;
            }
        }
    }
    let (nrows, ncols, nz) =
        size.ok_or_else(|| Error::Parse { line: 0, msg: "missing size line".into() })?;
    if read_entries != nz {
        return Err(Error::Parse {
            line: 0,
            msg: format!("declared {nz} entries, found {read_entries}"),
        });
    }
    CsrMatrix::from_triplets(nrows, ncols, &triplets)
}

pub fn mm_write(a: &CsrMatrix, path: impl AsRef<Path>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    mm_write_to(a, &mut w)?;
    w.flush()?;
    Ok(())
}

/// Writes general coordinate storage with 17 significant digits.
pub fn mm_write_to<W: Write>(a: &CsrMatrix, w: &mut W) -> Result<()> {
    writeln!(w, "%%MatrixMarket matrix coordinate real general")?;
    writeln!(w, "{} {} {}", a.nrows(), a.ncols(), a.nnz())?;
    for (i, j, v) in a.triplets() {
        writeln!(w, "{} {} {:.16e}", i + 1, j + 1, v)?;
    }
    Ok(())
}

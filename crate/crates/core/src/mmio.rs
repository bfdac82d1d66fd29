//! Matrix Market reading and writing of the `R` and `C` blocks.
//!
//! Supported headers:
//!
//! ```text
//! %%MatrixMarket matrix coordinate complex general|hermitian|symmetric
//! %%MatrixMarket matrix array complex general|hermitian|symmetric
//! ```
//!
//! Coordinate files become sparse blocks, array files dense ones. For the
//! `hermitian` and `symmetric` tags only the lower triangle is stored and the
//! upper one is mirrored on read. After expansion `R` must be exactly
//! Hermitian and `C` exactly symmetric.
//!
//! A coordinate file for the 2×2 block `[[2, 0.5−0.5i], [0.5+0.5i, 3]]`:
//!
//! ```text
//! %%MatrixMarket matrix coordinate complex hermitian
//! 2 2 3
//! 1 1 2.0 0.0
//! 2 1 0.5 0.5
//! 2 2 3.0 0.0
//! ```
//!
//! Values are written with Rust's shortest round-trip formatting, so a write
//! followed by a read reproduces every entry bit for bit.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;

use num_complex::Complex;

use crate::error::{BseError, Result};
use crate::operator::{Block, BseOperator, CsrBlock, DenseBlock};
use crate::scalar::{Cplx, Real};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Coordinate,
    Array,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Symmetry {
    General,
    Hermitian,
    Symmetric,
}

fn perr(path: &Path, line: usize, msg: impl Into<String>) -> BseError {
    BseError::Parse {
        path: path.to_path_buf(),
        line,
        msg: msg.into(),
    }
}

fn io_err(path: &Path, source: std::io::Error) -> BseError {
    BseError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Read one block. `name` labels symmetry errors.
pub fn read_block<T: Real>(path: &Path) -> Result<Block<T>> {
    let text = fs::read_to_string(path).map_err(|e| io_err(path, e))?;
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));

    let (hl, header) = lines.next().ok_or_else(|| perr(path, 1, "empty file"))?;
    let tags: Vec<String> = header.split_whitespace().map(|s| s.to_ascii_lowercase()).collect();
    if tags.len() != 5 || tags[0] != "%%matrixmarket" || tags[1] != "matrix" {
        return Err(perr(path, hl, format!("not a Matrix Market header: {header:?}")));
    }
    let layout = match tags[2].as_str() {
        "coordinate" => Layout::Coordinate,
        "array" => Layout::Array,
        other => return Err(perr(path, hl, format!("unsupported format {other:?}"))),
    };
    if tags[3] != "complex" {
        return Err(perr(path, hl, format!("field must be complex, got {:?}", tags[3])));
    }
    let sym = match tags[4].as_str() {
        "general" => Symmetry::General,
        "hermitian" => Symmetry::Hermitian,
        "symmetric" => Symmetry::Symmetric,
        other => return Err(perr(path, hl, format!("unsupported symmetry {other:?}"))),
    };

    let mut body = lines.filter(|(_, l)| {
        let t = l.trim();
        !t.is_empty() && !t.starts_with('%')
    });
    let (sl, size) = body.next().ok_or_else(|| perr(path, hl, "missing size line"))?;
    let dims: Vec<usize> = size
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| perr(path, sl, format!("bad size entry {t:?}"))))
        .collect::<Result<_>>()?;
    let expected = if layout == Layout::Coordinate { 3 } else { 2 };
    if dims.len() != expected {
        return Err(perr(path, sl, format!("size line needs {expected} integers")));
    }
    let n = dims[0];
    if dims[1] != n || n == 0 {
        return Err(perr(path, sl, format!("block must be square and nonempty, got {}x{}", n, dims[1])));
    }

    let parse_val = |ln: usize, re: &str, im: &str| -> Result<Cplx<T>> {
        let re: f64 = re.parse().map_err(|_| perr(path, ln, format!("bad number {re:?}")))?;
        let im: f64 = im.parse().map_err(|_| perr(path, ln, format!("bad number {im:?}")))?;
        Ok(Cplx::new(T::lit(re), T::lit(im)))
    };
    let mirror = |v: Cplx<T>| match sym {
        Symmetry::Hermitian => v.conj(),
        _ => v,
    };

    match layout {
        Layout::Coordinate => {
            let nnz = dims[2];
            let mut trip = Vec::with_capacity(nnz * if sym == Symmetry::General { 1 } else { 2 });
            let mut count = 0;
            for (ln, l) in body {
                let f: Vec<&str> = l.split_whitespace().collect();
                if f.len() != 4 {
                    return Err(perr(path, ln, "coordinate entry needs: row col re im"));
                }
                let idx = |s: &str| -> Result<usize> {
                    let v: usize = s.parse().map_err(|_| perr(path, ln, format!("bad index {s:?}")))?;
                    if v == 0 || v > n {
                        return Err(perr(path, ln, format!("index {v} outside 1..={n}")));
                    }
                    Ok(v - 1)
                };
                let (i, j) = (idx(f[0])?, idx(f[1])?);
                let v = parse_val(ln, f[2], f[3])?;
                if sym != Symmetry::General {
                    if i < j {
                        return Err(perr(path, ln, "entry above the diagonal in a symmetric-tagged file"));
                    }
                    if i != j {
                        trip.push((j, i, mirror(v)));
                    }
                }
                trip.push((i, j, v));
                count += 1;
            }
            if count != nnz {
                return Err(perr(path, sl, format!("header announces {nnz} entries, found {count}")));
            }
            Ok(Block::Sparse(CsrBlock::from_triplets(n, &trip)?))
        }
        Layout::Array => {
            let mut d = DenseBlock::zeros(n);
            // column-major; lower triangle only for the symmetric tags
            let mut slots = Vec::new();
            for j in 0..n {
                let start = if sym == Symmetry::General { 0 } else { j };
                for i in start..n {
                    slots.push((i, j));
                }
            }
            let mut it = slots.iter();
            for (ln, l) in body {
                let f: Vec<&str> = l.split_whitespace().collect();
                if f.len() != 2 {
                    return Err(perr(path, ln, "array entry needs: re im"));
                }
                let &(i, j) = it
                    .next()
                    .ok_or_else(|| perr(path, ln, "more entries than the size line allows"))?;
                let v = parse_val(ln, f[0], f[1])?;
                d.set(i, j, v);
                if i != j {
                    if sym != Symmetry::General {
                        d.set(j, i, mirror(v));
                    }
                }
            }
            if it.next().is_some() {
                return Err(perr(path, sl, format!("fewer entries than {} announced", slots.len())));
            }
            Ok(Block::Dense(d))
        }
    }
}

/// Read `R` and `C` and validate them as an operator.
pub fn read_blocks<T: Real>(path_r: &Path, path_c: &Path) -> Result<BseOperator<T>> {
    let r = read_block(path_r)?;
    let c = read_block(path_c)?;
    BseOperator::new(r, c).map_err(|e| match e {
        BseError::SymmetryViolation {
            block,
            expected,
            row,
            col,
            deviation,
        } => {
            let p = if block == "R" { path_r } else { path_c };
            BseError::SymmetryViolation {
                block: format!("{block} ({})", p.display()),
                expected,
                row,
                col,
                deviation,
            }
        }
        other => other,
    })
}

fn fmt<T: Real>(z: Cplx<T>) -> String {
    format!("{:?} {:?}", z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

/// Write one block: sparse blocks as coordinate general, dense ones as array
/// general.
pub fn write_block<T: Real>(block: &Block<T>, path: &Path) -> Result<()> {
    let f = fs::File::create(path).map_err(|e| io_err(path, e))?;
    let mut w = BufWriter::new(f);
    let n = block.dim();
    let mut out = || -> std::io::Result<()> {
        match block {
            Block::Sparse(_) => {
                let entries = block.entries();
                writeln!(w, "%%MatrixMarket matrix coordinate complex general")?;
                writeln!(w, "{n} {n} {}", entries.len())?;
                for (i, j, v) in entries {
                    writeln!(w, "{} {} {}", i + 1, j + 1, fmt(v))?;
                }
            }
            Block::Dense(d) => {
                writeln!(w, "%%MatrixMarket matrix array complex general")?;
                writeln!(w, "{n} {n}")?;
                for j in 0..n {
                    for i in 0..n {
                        writeln!(w, "{}", fmt(d.get(i, j)))?;
                    }
                }
            }
        }
        w.flush()
    };
    out().map_err(|e| io_err(path, e))
}

pub fn write_blocks<T: Real>(op: &BseOperator<T>, path_r: &Path, path_c: &Path) -> Result<()> {
    write_block(op.r(), path_r)?;
    write_block(op.c(), path_c)
}

/// Convert for callers that hold `f64` data.
pub fn to_c64<T: Real>(z: Cplx<T>) -> Complex<f64> {
    Complex::new(z.re.to_f64_lossy(), z.im.to_f64_lossy())
}

//! Versioned text format for cached plans.
//!
//! ```text
//! johnson-fft-plan
//! format_version 1
//! n 4
//! k 2
//! dim 6
//! build_ops 212
//! level 0
//! / 1122
//! ...
//! factor 1 blocks 4
//! 2 0 1 0 1 7.0710678118654746e-1 ...
//! end
//! ```
//!
//! Label lines hold a tableau (`/` when empty) and a suffix (`-` when empty).
//! Block lines hold the size, row indices, column indices and the row-major
//! entries with 17 significant digits, so a reload is bit-identical.

use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::combinatorics::{BasisLabel, StandardTableau};
use crate::error::{Error, Result};
use crate::factorization::{Block, SparseOrthFactor, TransformPlan};

pub const MAGIC: &str = "johnson-fft-plan";
pub const FORMAT_VERSION: u32 = 1;

pub fn write_plan<W: Write>(plan: &TransformPlan, out: W) -> Result<()> {
    let mut w = BufWriter::new(out);
    writeln!(w, "{MAGIC}")?;
    writeln!(w, "format_version {FORMAT_VERSION}")?;
    writeln!(w, "n {}", plan.n())?;
    writeln!(w, "k {}", plan.k())?;
    writeln!(w, "dim {}", plan.dim())?;
    writeln!(w, "build_ops {}", plan.build_ops())?;
    for (i, table) in plan.levels().iter().enumerate() {
        writeln!(w, "level {i}")?;
        for l in table {
            let suffix = if l.suffix.is_empty() { "-".to_string() } else { l.suffix_string() };
            writeln!(w, "{} {suffix}", l.tableau)?;
        }
    }
    for f in plan.factors() {
        writeln!(w, "factor {} blocks {}", f.level(), f.blocks().len())?;
        for b in f.blocks() {
            write!(w, "{}", b.dim())?;
            for r in b.rows().iter().chain(b.cols()) {
                write!(w, " {r}")?;
            }
            for e in b.entries() {
                write!(w, " {e:.16e}")?;
            }
            writeln!(w)?;
        }
    }
    writeln!(w, "end")?;
    w.flush()?;
    Ok(())
}

struct Lines<R> {
    inner: std::io::Lines<R>,
    number: usize,
}

impl<R: BufRead> Lines<R> {
    fn next_line(&mut self) -> Result<(usize, String)> {
        loop {
            self.number += 1;
            match self.inner.next() {
                Some(line) => {
                    let line = line?;
                    if !line.trim().is_empty() {
                        return Ok((self.number, line));
                    }
                }
                None => return Err(Error::parse(self.number, "unexpected end of file")),
            }
        }
    }

    fn keyed<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        let (no, line) = self.next_line()?;
        let mut parts = line.split_whitespace();
        if parts.next() != Some(key) {
            return Err(Error::parse(no, format!("expected {key:?}")));
        }
        let value = parts
            .next()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| Error::parse(no, format!("bad value for {key:?}")))?;
        if parts.next().is_some() {
            return Err(Error::parse(no, "trailing fields"));
        }
        Ok(value)
    }
}

fn parse_num<T: std::str::FromStr>(no: usize, s: &str) -> Result<T> {
    s.parse().map_err(|_| Error::parse(no, format!("bad number {s:?}")))
}

fn parse_label(no: usize, line: &str) -> Result<BasisLabel> {
    let mut parts = line.split_whitespace();
    let (Some(t), Some(s), None) = (parts.next(), parts.next(), parts.next()) else {
        return Err(Error::parse(no, "expected \"tableau suffix\""));
    };
    let tableau: StandardTableau = t.parse().map_err(|e: Error| Error::parse(no, e.to_string()))?;
    let suffix = if s == "-" {
        Vec::new()
    } else {
        s.chars()
            .map(|c| match c {
                '1' => Ok(1),
                '2' => Ok(2),
                _ => Err(Error::parse(no, format!("bad suffix letter {c:?}"))),
            })
            .collect::<Result<Vec<u8>>>()?
    };
    Ok(BasisLabel { tableau, suffix })
}

fn parse_block(no: usize, line: &str) -> Result<Block> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    let d: usize = parse_num(no, fields.first().copied().unwrap_or(""))?;
    if !(1..=2).contains(&d) || fields.len() != 1 + 2 * d + d * d {
        return Err(Error::parse(no, "malformed block line"));
    }
    let idx = fields[1..1 + 2 * d]
        .iter()
        .map(|f| parse_num(no, f))
        .collect::<Result<Vec<usize>>>()?;
    let entries = fields[1 + 2 * d..]
        .iter()
        .map(|f| parse_num(no, f))
        .collect::<Result<Vec<f64>>>()?;
    if entries.iter().any(|e| !e.is_finite()) {
        return Err(Error::parse(no, "non-finite entry"));
    }
    Block::new(&idx[..d], &idx[d..], &entries).map_err(|e| Error::parse(no, e.to_string()))
}

/// Reads a plan, validating structure but not orthogonality; corrupted
/// entries are left for the oracle to detect.
pub fn read_plan<R: BufRead>(input: R) -> Result<TransformPlan> {
    let mut lines = Lines {
        inner: input.lines(),
        number: 0,
    };
    let (no, magic) = lines.next_line()?;
    if magic.trim() != MAGIC {
        return Err(Error::parse(no, "not a plan file"));
    }
    let version: u32 = lines.keyed("format_version")?;
    if version != FORMAT_VERSION {
        return Err(Error::parse(lines.number, format!("unsupported format version {version}")));
    }
    let n: usize = lines.keyed("n")?;
    let k: usize = lines.keyed("k")?;
    let dim: usize = lines.keyed("dim")?;
    let build_ops: u64 = lines.keyed("build_ops")?;
    if n == 0 || n > crate::combinatorics::MAX_N || k > n || crate::combinatorics::binomial(n, k) != dim as u128 {
        return Err(Error::parse(lines.number, format!("inconsistent header n = {n}, k = {k}, dim = {dim}")));
    }

    let mut levels = Vec::with_capacity(n + 1);
    for i in 0..=n {
        let level: usize = lines.keyed("level")?;
        if level != i {
            return Err(Error::parse(lines.number, format!("expected level {i}")));
        }
        let mut table = Vec::with_capacity(dim);
        for _ in 0..dim {
            let (no, line) = lines.next_line()?;
            table.push(parse_label(no, &line)?);
        }
        levels.push(table);
    }

    let mut factors = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        let (no, line) = lines.next_line()?;
        let parts: Vec<&str> = line.split_whitespace().collect();
        if parts.len() != 4 || parts[0] != "factor" || parts[2] != "blocks" {
            return Err(Error::parse(no, "expected \"factor i blocks m\""));
        }
        let level: usize = parse_num(no, parts[1])?;
        let count: usize = parse_num(no, parts[3])?;
        if level != i || count > dim {
            return Err(Error::parse(no, format!("bad factor header for level {i}")));
        }
        let mut blocks = Vec::with_capacity(count);
        for _ in 0..count {
            let (no, line) = lines.next_line()?;
            blocks.push(parse_block(no, &line)?);
        }
        factors.push(SparseOrthFactor::new(i, dim, blocks).map_err(|e| Error::parse(no, e.to_string()))?);
    }
    let (no, end) = lines.next_line()?;
    if end.trim() != "end" {
        return Err(Error::parse(no, "expected \"end\""));
    }
    TransformPlan::from_parts(n, k, levels, factors, build_ops).map_err(|e| Error::parse(no, e.to_string()))
}

pub fn save_plan(plan: &TransformPlan, path: &Path) -> Result<()> {
    write_plan(plan, fs::File::create(path)?)
}

pub fn load_plan(path: &Path) -> Result<TransformPlan> {
    read_plan(BufReader::new(fs::File::open(path)?))
}

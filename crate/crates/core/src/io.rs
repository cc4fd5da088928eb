//! Text formats.
//!
//! Codewords: a header `PGCODE n q p h` followed by `theta_n` values in point
//! order, or `PGCODE-SPARSE n q p h` followed by `index:value` pairs for the
//! nonzero values. Flats: one basis row per line, entries separated by commas,
//! each entry a field element id.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt::Write;

use crate::code::Codeword;
use crate::field::{prime_power, PrimeFieldElement};
use crate::geometry::{ProjSpace, Subspace};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub msg: String,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError { line, msg: msg.into() }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CodewordFormat {
    Dense,
    Sparse,
}

const PER_LINE: usize = 32;

pub fn write_codeword(c: &Codeword, format: CodewordFormat) -> String {
    let s = c.space();
    let f = s.field();
    let mut out = String::new();
    let tag = match format {
        CodewordFormat::Dense => "PGCODE",
        CodewordFormat::Sparse => "PGCODE-SPARSE",
    };
    let _ = writeln!(out, "{tag} {} {} {} {}", s.n(), s.q(), f.p(), f.h());
    match format {
        CodewordFormat::Dense => {
            for chunk in c.values().chunks(PER_LINE) {
                let row: Vec<String> = chunk.iter().map(|v| v.0.to_string()).collect();
                let _ = writeln!(out, "{}", row.join(" "));
            }
        }
        CodewordFormat::Sparse => {
            let pairs: Vec<String> = c.support().iter().map(|&i| format!("{i}:{}", c.get(i).0)).collect();
            for chunk in pairs.chunks(PER_LINE / 2) {
                let _ = writeln!(out, "{}", chunk.join(" "));
            }
        }
    }
    out
}

fn parse_header(line: &str) -> Result<(CodewordFormat, ProjSpace), ParseError> {
    let mut it = line.split_whitespace();
    let format = match it.next() {
        Some("PGCODE") => CodewordFormat::Dense,
        Some("PGCODE-SPARSE") => CodewordFormat::Sparse,
        Some(other) => return Err(err(1, format!("expected PGCODE or PGCODE-SPARSE, found {other:?}"))),
        None => return Err(err(1, "missing header")),
    };
    let mut num = |name: &str| -> Result<u64, ParseError> {
        let tok = it.next().ok_or_else(|| err(1, format!("header is missing {name}")))?;
        tok.parse().map_err(|_| err(1, format!("{name} = {tok:?} is not an integer")))
    };
    let (n, q, p, h) = (num("n")?, num("q")?, num("p")?, num("h")?);
    if it.next().is_some() {
        return Err(err(1, "trailing tokens in header"));
    }
    match prime_power(q) {
        Ok((pp, hh)) if u64::from(pp) == p && u64::from(hh) == h => {}
        _ => return Err(err(1, format!("q = {q} is not {p}^{h}"))),
    }
    if n < 1 || n > 16 {
        return Err(err(1, format!("n = {n} out of range")));
    }
    let space = ProjSpace::of(n as usize, q as u32).map_err(|e| err(1, e.to_string()))?;
    Ok((format, space))
}

pub fn read_codeword(text: &str) -> Result<Codeword, ParseError> {
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    let (_, header) = lines.next().ok_or_else(|| err(1, "empty input"))?;
    let (format, space) = parse_header(header)?;
    let p = space.field().p() as u16;
    let np = space.num_points();
    let mut values = alloc::vec![PrimeFieldElement::ZERO; np];
    let value = |ln: usize, tok: &str| -> Result<PrimeFieldElement, ParseError> {
        let v: u16 = tok.parse().map_err(|_| err(ln, format!("{tok:?} is not a value")))?;
        if v >= p {
            return Err(err(ln, format!("value {v} is not below p = {p}")));
        }
        Ok(PrimeFieldElement(v))
    };
    match format {
        CodewordFormat::Dense => {
            let mut k = 0;
            let mut last = 1;
            for (ln, line) in lines {
                last = ln;
                for tok in line.split_whitespace() {
                    if k == np {
                        return Err(err(ln, format!("more than {np} values")));
                    }
                    values[k] = value(ln, tok)?;
                    k += 1;
                }
            }
            if k != np {
                return Err(err(last, format!("expected {np} values, found {k}")));
            }
        }
        CodewordFormat::Sparse => {
            let mut seen = alloc::vec![false; np];
            for (ln, line) in lines {
                for tok in line.split_whitespace() {
                    let (i, v) = tok.split_once(':').ok_or_else(|| err(ln, format!("{tok:?} is not index:value")))?;
                    let i: usize = i.parse().map_err(|_| err(ln, format!("{i:?} is not an index")))?;
                    if i >= np {
                        return Err(err(ln, format!("index {i} is not below {np}")));
                    }
                    if seen[i] {
                        return Err(err(ln, format!("index {i} repeated")));
                    }
                    seen[i] = true;
                    values[i] = value(ln, v)?;
                }
            }
        }
    }
    Ok(Codeword::from_values(&space, values).expect("length and range checked"))
}

pub fn write_flat(s: &Subspace) -> String {
    let mut out = String::new();
    for r in s.rows() {
        let row: Vec<String> = r.iter().map(|x| x.id().to_string()).collect();
        let _ = writeln!(out, "{}", row.join(","));
    }
    out
}

pub fn read_flat(space: &ProjSpace, text: &str) -> Result<Subspace, ParseError> {
    let q = space.q();
    let width = space.n() + 1;
    let mut rows = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        let row: Result<Vec<_>, _> = line
            .split(',')
            .map(|t| match t.trim().parse::<usize>() {
                Ok(v) if v < q => Ok(space.field().elem(v)),
                _ => Err(err(ln, format!("{:?} is not a field element id below {q}", t.trim()))),
            })
            .collect();
        let row = row?;
        if row.len() != width {
            return Err(err(ln, format!("expected {width} entries, found {}", row.len())));
        }
        rows.push(row);
    }
    let last = text.lines().count().max(1);
    let flat = space.flat_from_rows(&rows).map_err(|e| err(last, e.to_string()))?;
    if flat.rows().len() != rows.len() {
        return Err(err(last, "rows are linearly dependent"));
    }
    Ok(flat)
}

//! Plain-text fixture formats. Blank lines and `#` comments are ignored.
//!
//! * sparse vectors: `index re im` per line
//! * dimension sequences: one integer or scale expression per line; `k` is
//!   bound to the line's position in the sequence
//! * block elements: `z i j re im` per line, 1-based

use num_complex::Complex64;

use crate::error::Error;
use crate::logvalue::LogValue;
use crate::scale::ScaleContext;
use crate::socle::block::{BlockElement, DimensionSequence};
use crate::socle::matrix::CMatrix;
use crate::sparse::FinSuppVector;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let body = line.split('#').next().unwrap_or("").trim();
        (!body.is_empty()).then_some((i + 1, body))
    })
}

fn fields<const N: usize>(line: usize, body: &str) -> Result<[&str; N], Error> {
    let parts: Vec<&str> = body.split_whitespace().collect();
    parts
        .try_into()
        .map_err(|p: Vec<&str>| Error::Parse { pos: line, msg: format!("expected {N} fields, found {}", p.len()) })
}

fn num<T: std::str::FromStr>(line: usize, s: &str) -> Result<T, Error> {
    s.parse().map_err(|_| Error::Parse { pos: line, msg: format!("cannot read {s:?}") })
}

fn finite(line: usize, s: &str) -> Result<f64, Error> {
    let v: f64 = num(line, s)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Parse { pos: line, msg: format!("{s} is not finite") })
    }
}

pub fn parse_sparse_vector(text: &str) -> Result<FinSuppVector, Error> {
    let mut out = FinSuppVector::new();
    for (line, body) in content_lines(text) {
        let [x, re, im] = fields::<3>(line, body)?;
        let x: u64 = num(line, x)?;
        if x == 0 {
            return Err(Error::Parse { pos: line, msg: "indices start at 1".into() });
        }
        out.set(x, Complex64::new(finite(line, re)?, finite(line, im)?));
    }
    Ok(out)
}

pub fn parse_dimension_sequence(text: &str, ctx: &ScaleContext) -> Result<DimensionSequence, Error> {
    let mut ints: Vec<u64> = Vec::new();
    let mut logs: Vec<LogValue> = Vec::new();
    let mut all_int = true;
    for (line, body) in content_lines(text) {
        let z = logs.len() as u64 + 1;
        let value = match body.parse::<u64>() {
            Ok(v) => {
                ints.push(v);
                LogValue::from_u64(v)
            }
            Err(_) => {
                all_int = false;
                let s = ctx.scale(body).map_err(|e| Error::Parse { pos: line, msg: e.to_string() })?;
                s.eval(z).map_err(|e| Error::Parse { pos: line, msg: e.to_string() })?
            }
        };
        logs.push(value);
    }
    if logs.is_empty() {
        return Err(Error::Parse { pos: 0, msg: "empty dimension sequence".into() });
    }
    if all_int {
        DimensionSequence::from_u64(ints)
    } else {
        DimensionSequence::from_log(logs)
    }
}

pub fn parse_block_element(text: &str, dims: &DimensionSequence) -> Result<BlockElement, Error> {
    let d = dims.materializable()?;
    let mut blocks: std::collections::BTreeMap<u64, CMatrix> = std::collections::BTreeMap::new();
    for (line, body) in content_lines(text) {
        let [z, i, j, re, im] = fields::<5>(line, body)?;
        let (z, i, j): (u64, usize, usize) = (num(line, z)?, num(line, i)?, num(line, j)?);
        let p = *d
            .get((z as usize).wrapping_sub(1))
            .ok_or_else(|| Error::Parse { pos: line, msg: format!("block {z} outside 1..={}", d.len()) })?
            as usize;
        if !(1..=p).contains(&i) || !(1..=p).contains(&j) {
            return Err(Error::Parse { pos: line, msg: format!("entry ({i}, {j}) outside a {p}x{p} block") });
        }
        let m = blocks.entry(z).or_insert_with(|| CMatrix::zeros(p));
        m[(i - 1, j - 1)] = Complex64::new(finite(line, re)?, finite(line, im)?);
    }
    let mut out = BlockElement::new();
    for (z, m) in blocks {
        out.insert(z, m);
    }
    Ok(out)
}

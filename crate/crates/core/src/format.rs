//! Line-oriented text formats for codes, reductions, wiretap matrices and
//! equivalence witnesses.
//!
//! ```text
//! field p=2 m=2 modulus=1,1,1
//! code n=4 k=2
//! blocks n=2,2 k=1,1
//! row 1,0 0,1 0,0 0,0
//! row 0,0 0,0 1,0 0,1
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::sync::Arc;

use crate::codes::LinearCode;
use crate::equivalence::RankEquivalenceMap;
use crate::error::{Error, Result};
use crate::field::{FieldTower, Scalar};
use crate::linalg::Mat;
use crate::reduction::Reduction;

/// A parsed code file: the code, and its reduction if `blocks` was given.
#[derive(Clone, Debug)]
pub struct CodeFile {
    pub code: LinearCode,
    pub reduction: Option<Reduction>,
}

/// Non-empty lines with comments stripped, numbered from 1.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Parses `head key=value ...`, requiring exactly the keys in `keys`.
fn header<'a>(line: usize, text: &'a str, head: &str, keys: &[&str]) -> Result<BTreeMap<&'a str, &'a str>> {
    let mut words = text.split_whitespace();
    if words.next() != Some(head) {
        return Err(Error::parse(line, format!("expected a `{head}` line")));
    }
    let mut out = BTreeMap::new();
    for w in words {
        let (k, v) = w
            .split_once('=')
            .ok_or_else(|| Error::parse(line, format!("expected key=value, got {w:?}")))?;
        if !keys.contains(&k) {
            return Err(Error::parse(line, format!("unknown key {k:?} in `{head}` line")));
        }
        if out.insert(k, v).is_some() {
            return Err(Error::parse(line, format!("duplicate key {k:?}")));
        }
    }
    for k in keys {
        if !out.contains_key(k) {
            return Err(Error::parse(line, format!("missing key {k:?} in `{head}` line")));
        }
    }
    Ok(out)
}

fn number(line: usize, key: &str, v: &str) -> Result<usize> {
    v.parse().map_err(|_| Error::parse(line, format!("{key}={v:?} is not a non-negative integer")))
}

fn list(line: usize, key: &str, v: &str) -> Result<Vec<usize>> {
    v.split(',').map(|x| number(line, key, x)).collect()
}

fn parse_row(f: &FieldTower, line: usize, text: &str, n: usize) -> Result<Vec<Scalar>> {
    let mut words = text.split_whitespace();
    if words.next() != Some("row") {
        return Err(Error::parse(line, "expected a `row` line"));
    }
    let row = words
        .map(|w| f.parse_scalar(w).map_err(|e| Error::parse(line, e.to_string())))
        .collect::<Result<Vec<_>>>()?;
    if row.len() != n {
        return Err(Error::parse(line, format!("row has {} entries, expected {n}", row.len())));
    }
    Ok(row)
}

pub fn parse_field_line(line: usize, text: &str) -> Result<FieldTower> {
    let kv = header(line, text, "field", &["p", "m", "modulus"])?;
    let p = number(line, "p", kv["p"])? as u32;
    let m = number(line, "m", kv["m"])?;
    let modulus: Vec<u32> = list(line, "modulus", kv["modulus"])?.into_iter().map(|c| c as u32).collect();
    if modulus.len() != m + 1 {
        return Err(Error::parse(line, format!("modulus has {} coefficients, expected m+1 = {}", modulus.len(), m + 1)));
    }
    if modulus[m] != 1 {
        return Err(Error::parse(line, "modulus must be monic"));
    }
    FieldTower::with_modulus(p, &modulus).map_err(|e| Error::parse(line, e.to_string()))
}

pub fn parse_code(text: &str) -> Result<CodeFile> {
    let mut it = lines(text).peekable();
    let (l1, t1) = it.next().ok_or_else(|| Error::parse(1, "empty code file"))?;
    let field = Arc::new(parse_field_line(l1, t1)?);
    let (l2, t2) = it.next().ok_or_else(|| Error::parse(l1 + 1, "missing `code` line"))?;
    let kv = header(l2, t2, "code", &["n", "k"])?;
    let n = number(l2, "n", kv["n"])?;
    let k = number(l2, "k", kv["k"])?;
    if k > n {
        return Err(Error::parse(l2, format!("k = {k} exceeds n = {n}")));
    }
    let mut blocks = None;
    if let Some(&(l3, t3)) = it.peek() {
        if t3.starts_with("blocks") {
            it.next();
            let kv = header(l3, t3, "blocks", &["n", "k"])?;
            let nb = list(l3, "n", kv["n"])?;
            let kb = list(l3, "k", kv["k"])?;
            if nb.len() != kb.len() {
                return Err(Error::parse(l3, format!("{} column blocks but {} row blocks", nb.len(), kb.len())));
            }
            if nb.iter().sum::<usize>() != n || kb.iter().sum::<usize>() != k {
                return Err(Error::parse(l3, "block sizes do not add up to n and k"));
            }
            blocks = Some((l3, nb, kb));
        }
    }
    let mut rows = Vec::with_capacity(k);
    let mut row_lines = Vec::with_capacity(k);
    for (ln, t) in it {
        if rows.len() == k {
            return Err(Error::parse(ln, format!("more than k = {k} rows")));
        }
        rows.push(parse_row(&field, ln, t, n)?);
        row_lines.push(ln);
    }
    if rows.len() != k {
        return Err(Error::parse(l2, format!("expected {k} rows, found {}", rows.len())));
    }
    // zero pattern: a row in block i may not touch columns before block i
    if let Some((_, nb, kb)) = &blocks {
        let mut r = 0;
        let mut col0 = 0;
        for (i, &ki) in kb.iter().enumerate() {
            for _ in 0..ki {
                if let Some(c) = rows[r][..col0].iter().position(|x| !x.is_zero()) {
                    return Err(Error::parse(
                        row_lines[r],
                        format!("row in block {} is nonzero in column {} left of its diagonal block", i + 1, c + 1),
                    ));
                }
                r += 1;
            }
            col0 += nb[i];
        }
    }
    let gen = Mat::from_rows(n, &rows);
    let code = LinearCode::new(field, gen).map_err(|e| Error::parse(l2, e.to_string()))?;
    let reduction = match blocks {
        Some((l3, nb, kb)) => Some(Reduction::new(code.clone(), nb, kb).map_err(|e| Error::parse(l3, e.to_string()))?),
        None => None,
    };
    Ok(CodeFile { code, reduction })
}

pub fn write_field_line(f: &FieldTower) -> String {
    let modulus: Vec<String> = f.modulus().iter().map(|c| c.to_string()).collect();
    format!("field p={} m={} modulus={}", f.p(), f.m(), modulus.join(","))
}

fn write_rows(out: &mut String, f: &FieldTower, g: &Mat) {
    for row in g.iter_rows() {
        out.push_str("row");
        for &x in row {
            out.push(' ');
            out.push_str(&f.format_scalar(x));
        }
        out.push('\n');
    }
}

fn join(v: &[usize]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
}

pub fn write_code(code: &LinearCode) -> String {
    let f = code.field();
    let mut out = String::new();
    writeln!(out, "{}", write_field_line(f)).unwrap();
    writeln!(out, "code n={} k={}", code.n(), code.k()).unwrap();
    write_rows(&mut out, f, code.generator());
    out
}

pub fn write_reduction(r: &Reduction) -> String {
    let code = r.code();
    let f = code.field();
    let mut out = String::new();
    writeln!(out, "{}", write_field_line(f)).unwrap();
    writeln!(out, "code n={} k={}", code.n(), code.k()).unwrap();
    writeln!(out, "blocks n={} k={}", join(r.n_blocks()), join(r.k_blocks())).unwrap();
    write_rows(&mut out, f, code.generator());
    out
}

/// A wiretap file: `wiretap mu=<μ>` and `μ` rows over the base field.
pub fn parse_wiretap(f: &FieldTower, n: usize, text: &str) -> Result<Mat> {
    let mut it = lines(text);
    let (l1, t1) = it.next().ok_or_else(|| Error::parse(1, "empty wiretap file"))?;
    let kv = header(l1, t1, "wiretap", &["mu"])?;
    let mu = number(l1, "mu", kv["mu"])?;
    let mut rows = Vec::with_capacity(mu);
    for (ln, t) in it {
        if rows.len() == mu {
            return Err(Error::parse(ln, format!("more than mu = {mu} rows")));
        }
        let row = parse_row(f, ln, t, n)?;
        if let Some(c) = row.iter().position(|&x| !f.in_base_field(x)) {
            return Err(Error::parse(ln, format!("entry {} lies outside the base field", c + 1)));
        }
        rows.push(row);
    }
    if rows.len() != mu {
        return Err(Error::parse(l1, format!("expected {mu} rows, found {}", rows.len())));
    }
    Ok(Mat::from_rows(n, &rows))
}

pub fn write_wiretap(f: &FieldTower, b: &Mat) -> String {
    let mut out = format!("wiretap mu={}\n", b.rows());
    write_rows(&mut out, f, b);
    out
}

/// The two bases and `β` of a map, then `certified=<bool>`.
pub fn write_witness(f: &FieldTower, map: &RankEquivalenceMap, certified: bool) -> String {
    let mut out = String::new();
    writeln!(out, "source n={} t={}", map.source().cols(), map.dim()).unwrap();
    write_rows(&mut out, f, map.source());
    writeln!(out, "target n={} t={}", map.target().cols(), map.dim()).unwrap();
    write_rows(&mut out, f, map.target());
    writeln!(out, "beta {}", f.format_scalar(map.beta())).unwrap();
    writeln!(out, "certified={certified}").unwrap();
    out
}

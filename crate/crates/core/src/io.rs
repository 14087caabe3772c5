//! Text formats: generator matrices, transformation files, LLR vectors,
//! results and cost-trace CSVs.
//!
//! Transformation file layout (all indices 1-based):
//!
//! ```text
//! N n k
//! perm: p_1 ... p_N
//! R:
//! <N/2 lines of m digits, stage = column>
//! dropped: d_1 ... d_{N-n}
//! mdf:
//! <k lines of N digits>      (optional)
//! ```

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{BitMatrix, Permutation};
use crate::polar::PruningMatrix;
use crate::search::TracePoint;
use crate::sim::PointResult;
use crate::transform::{build_transformation, ShortenSpec, Transformation};

fn parse_err(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        column,
        message: message.into(),
    }
}

/// Non-blank lines with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim_end()))
        .filter(|(_, l)| !l.trim().is_empty())
}

/// Whitespace-separated tokens with their 1-based columns.
fn tokens(line: &str) -> impl Iterator<Item = (usize, &str)> {
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in line.char_indices() {
        match (ch.is_whitespace(), start) {
            (false, None) => start = Some(i),
            (true, Some(s)) => {
                out.push((s + 1, &line[s..i]));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        out.push((s + 1, &line[s..]));
    }
    out.into_iter()
}

fn parse_usize(lineno: usize, col: usize, tok: &str, what: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(lineno, col, format!("expected {what}, found '{tok}'")))
}

fn parse_bits(lineno: usize, line: &str, expected: usize, what: &str) -> Result<Vec<u8>> {
    let mut bits = Vec::new();
    for (col, tok) in tokens(line) {
        match tok {
            "0" => bits.push(0),
            "1" => bits.push(1),
            _ => return Err(parse_err(lineno, col, format!("expected 0 or 1 in {what}, found '{tok}'"))),
        }
    }
    if bits.len() != expected {
        return Err(parse_err(
            lineno,
            1,
            format!("{what} has {} digits, expected {expected}", bits.len()),
        ));
    }
    Ok(bits)
}

fn bits_line(bits: impl IntoIterator<Item = u8>) -> String {
    bits.into_iter()
        .map(|b| if b == 1 { "1" } else { "0" })
        .collect::<Vec<_>>()
        .join(" ")
}

fn matrix_lines(m: &BitMatrix, out: &mut String) {
    for r in m.to_rows() {
        out.push_str(&bits_line(r));
        out.push('\n');
    }
}

/// Parses `k n` followed by `k` rows of `n` digits.
pub fn parse_generator(text: &str) -> Result<BitMatrix> {
    let mut lines = content_lines(text);
    let (lineno, header) = lines.next().ok_or_else(|| parse_err(1, 1, "empty generator file"))?;
    let hdr: Vec<_> = tokens(header).collect();
    if hdr.len() != 2 {
        return Err(parse_err(lineno, 1, "header must be 'k n'"));
    }
    let k = parse_usize(lineno, hdr[0].0, hdr[0].1, "k")?;
    let n = parse_usize(lineno, hdr[1].0, hdr[1].1, "n")?;
    if k == 0 || n == 0 {
        return Err(parse_err(lineno, 1, "k and n must be positive"));
    }
    let mut rows = Vec::new();
    for i in 0..k {
        let (ln, line) = lines
            .next()
            .ok_or_else(|| parse_err(lineno + i + 1, 1, format!("missing row {} of {k}", i + 1)))?;
        rows.push(parse_bits(ln, line, n, &format!("row {}", i + 1))?);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, 1, format!("unexpected content after {k} rows")));
    }
    BitMatrix::from_rows(&rows)
}

pub fn write_generator(g: &BitMatrix) -> String {
    let mut out = format!("{} {}\n", g.rows(), g.cols());
    matrix_lines(g, &mut out);
    out
}

/// Parsed contents of a transformation file, not yet tied to a code.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformationFile {
    pub n_big: usize,
    pub n: usize,
    pub k: usize,
    pub perm: Permutation,
    pub pruning: PruningMatrix,
    /// 0-based dropped positions.
    pub dropped: Vec<usize>,
    pub mdf: Option<BitMatrix>,
}

impl TransformationFile {
    pub fn from_transformation(t: &Transformation, with_mdf: bool) -> Self {
        TransformationFile {
            n_big: t.n_big(),
            n: t.n(),
            k: t.k(),
            perm: t.perm().clone(),
            pruning: t.pruning().clone(),
            dropped: t.shorten().dropped().to_vec(),
            mdf: with_mdf.then(|| t.m_df().clone()),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("{} {} {}\n", self.n_big, self.n, self.k);
        out.push_str("perm:");
        for p in self.perm.to_one_line() {
            out.push_str(&format!(" {p}"));
        }
        out.push_str("\nR:\n");
        for row in self.pruning.to_rows() {
            out.push_str(&bits_line(row));
            out.push('\n');
        }
        out.push_str("dropped:");
        for d in &self.dropped {
            out.push_str(&format!(" {}", d + 1));
        }
        out.push('\n');
        if let Some(m) = &self.mdf {
            out.push_str("mdf:\n");
            matrix_lines(m, &mut out);
        }
        out
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = content_lines(text).peekable();
        let (hl, header) = lines.next().ok_or_else(|| parse_err(1, 1, "empty transformation file"))?;
        let hdr: Vec<_> = tokens(header).collect();
        if hdr.len() != 3 {
            return Err(parse_err(hl, 1, "header must be 'N n k'"));
        }
        let n_big = parse_usize(hl, hdr[0].0, hdr[0].1, "N")?;
        let n = parse_usize(hl, hdr[1].0, hdr[1].1, "n")?;
        let k = parse_usize(hl, hdr[2].0, hdr[2].1, "k")?;
        if n_big < 2 || !n_big.is_power_of_two() {
            return Err(parse_err(hl, hdr[0].0, format!("N = {n_big} is not a power of two ≥ 2")));
        }
        if n > n_big || k == 0 || k > n {
            return Err(parse_err(hl, 1, format!("need 0 < k ≤ n ≤ N, got N={n_big} n={n} k={k}")));
        }
        let m = n_big.trailing_zeros() as usize;

        let (pl, pline) = lines.next().ok_or_else(|| parse_err(hl + 1, 1, "missing 'perm:' line"))?;
        let rest = keyword(pl, pline, "perm:")?;
        let offset = pline.len() - rest.len();
        let mut one_line = Vec::new();
        for (col, tok) in tokens(rest) {
            one_line.push(parse_usize(pl, col + offset, tok, "permutation entry")?);
        }
        if one_line.len() != n_big {
            return Err(parse_err(pl, 1, format!("permutation has {} entries, expected {n_big}", one_line.len())));
        }
        let perm = Permutation::from_one_line(&one_line).map_err(|e| parse_err(pl, 6, e.to_string()))?;

        let (rl, rline) = lines.next().ok_or_else(|| parse_err(pl + 1, 1, "missing 'R:' block"))?;
        if !keyword(rl, rline, "R:")?.trim().is_empty() {
            return Err(parse_err(rl, 3, "'R:' must be alone on its line"));
        }
        let mut rows = Vec::new();
        for i in 0..n_big / 2 {
            let (ln, line) = lines
                .next()
                .ok_or_else(|| parse_err(rl + i + 1, 1, format!("missing R row {}", i + 1)))?;
            rows.push(parse_bits(ln, line, m, &format!("R row {}", i + 1))?);
        }
        let pruning = PruningMatrix::from_rows(&rows)?;

        let (dl, dline) = lines.next().ok_or_else(|| parse_err(rl + 1, 1, "missing 'dropped:' line"))?;
        let rest = keyword(dl, dline, "dropped:")?;
        let offset = dline.len() - rest.len();
        let mut dropped = Vec::new();
        for (col, tok) in tokens(rest) {
            let d = parse_usize(dl, col + offset, tok, "dropped position")?;
            if d == 0 || d > n_big {
                return Err(parse_err(dl, col + offset, format!("dropped position {d} outside 1..={n_big}")));
            }
            dropped.push(d - 1);
        }
        if dropped.len() != n_big - n {
            return Err(parse_err(dl, 1, format!("{} dropped positions, expected N − n = {}", dropped.len(), n_big - n)));
        }

        let mdf = match lines.next() {
            None => None,
            Some((ml, mline)) => {
                if !keyword(ml, mline, "mdf:")?.trim().is_empty() {
                    return Err(parse_err(ml, 5, "'mdf:' must be alone on its line"));
                }
                let mut rows = Vec::new();
                for i in 0..k {
                    let (ln, line) = lines
                        .next()
                        .ok_or_else(|| parse_err(ml + i + 1, 1, format!("missing mdf row {}", i + 1)))?;
                    rows.push(parse_bits(ln, line, n_big, &format!("mdf row {}", i + 1))?);
                }
                Some(BitMatrix::from_rows(&rows)?)
            }
        };
        if let Some((ln, _)) = lines.next() {
            return Err(parse_err(ln, 1, "unexpected trailing content"));
        }
        Ok(TransformationFile {
            n_big,
            n,
            k,
            perm,
            pruning,
            dropped,
            mdf,
        })
    }

    /// Rebuilds the transformation for `g`, checking dimensions and the
    /// stored `mdf` block.
    pub fn load(&self, g: &BitMatrix) -> Result<Transformation> {
        if g.rows() != self.k || g.cols() != self.n {
            return Err(Error::ConfigMismatch(format!(
                "transformation is for an ({}, {}) code, generator is ({}, {})",
                self.n,
                self.k,
                g.cols(),
                g.rows()
            )));
        }
        let shorten = ShortenSpec::from_dropped(self.n_big, &self.dropped)?;
        let t = build_transformation(g, self.n_big, self.perm.clone(), self.pruning.clone(), shorten)?;
        if let Some(stored) = &self.mdf {
            if stored != t.m_df() {
                return Err(Error::Integrity(
                    "stored mdf block differs from the recomputed one".into(),
                ));
            }
        }
        Ok(t)
    }
}

fn keyword<'a>(lineno: usize, line: &'a str, kw: &str) -> Result<&'a str> {
    line.trim_start()
        .strip_prefix(kw)
        .ok_or_else(|| parse_err(lineno, 1, format!("expected '{kw}'")))
}

/// Serializes `t` with its integrity block.
pub fn write_transformation(t: &Transformation) -> String {
    TransformationFile::from_transformation(t, true).to_text()
}

pub fn parse_transformation(text: &str, g: &BitMatrix) -> Result<Transformation> {
    TransformationFile::parse(text)?.load(g)
}

/// One finite real per line; blank lines are ignored.
pub fn parse_llr(text: &str) -> Result<Vec<f64>> {
    content_lines(text)
        .map(|(ln, line)| {
            let mut toks = tokens(line);
            let (col, tok) = toks.next().expect("non-blank line");
            if let Some((c2, _)) = toks.next() {
                return Err(parse_err(ln, c2, "one value per line"));
            }
            let v: f64 = tok
                .parse()
                .map_err(|_| parse_err(ln, col, format!("'{tok}' is not a number")))?;
            if v.is_nan() {
                return Err(parse_err(ln, col, "NaN LLR"));
            }
            Ok(v)
        })
        .collect()
}

pub fn write_llr(llr: &[f64]) -> String {
    llr.iter().map(|v| format!("{v}\n")).collect()
}

/// One row of the results CSV.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub ebno_db: f64,
    pub decoder: String,
    pub list_size: usize,
    pub frames: u64,
    pub frame_errors: u64,
    pub bit_errors: u64,
    pub fer: f64,
    pub ber: f64,
    pub candidates: u64,
    pub wall_seconds: f64,
    pub seed: u64,
}

impl From<&PointResult> for ResultRow {
    fn from(p: &PointResult) -> Self {
        ResultRow {
            ebno_db: p.ebno_db,
            decoder: p.decoder.name().to_string(),
            list_size: p.decoder.list_size(),
            frames: p.frames,
            frame_errors: p.frame_errors,
            bit_errors: p.bit_errors,
            fer: p.fer(),
            ber: p.ber(),
            candidates: p.candidates,
            wall_seconds: p.wall_seconds,
            seed: p.seed,
        }
    }
}

fn csv_err(e: csv::Error) -> Error {
    match e.position() {
        Some(pos) => parse_err(pos.line() as usize, 1, e.to_string()),
        None => Error::Io(e.to_string()),
    }
}

pub fn write_results<W: Write>(rows: &[ResultRow], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for r in rows {
        wr.serialize(r).map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

pub fn read_results<R: Read>(r: R) -> Result<Vec<ResultRow>> {
    csv::Reader::from_reader(r)
        .deserialize()
        .map(|row| row.map_err(csv_err))
        .collect()
}

#[derive(Serialize)]
struct TraceRow {
    iteration: u64,
    temperature: f64,
    current_cost: f64,
    best_cost: f64,
}

pub fn write_trace<W: Write>(trace: &[TracePoint], w: W) -> Result<()> {
    let mut wr = csv::Writer::from_writer(w);
    for p in trace {
        wr.serialize(TraceRow {
            iteration: p.iteration,
            temperature: p.temperature,
            current_cost: p.current_cost,
            best_cost: p.best_cost,
        })
        .map_err(csv_err)?;
    }
    wr.flush()?;
    Ok(())
}

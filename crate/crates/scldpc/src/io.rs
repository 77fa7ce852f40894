//! Text formats: exponent matrices, spreading matrices (full and b-vector
//! forms), spectrum and BER CSV.
//!
//! Exponent matrix: first line `m n N`, then m lines of n tokens, each a
//! decimal shift or `-` for a void position. Spreading matrix, full form:
//! first line `m n m_s`, then m rows of n digits. Spreading matrix,
//! b-vector form: first line `m m_s`, then the n column values. Parse
//! errors carry 1-based line numbers.

use num_rational::Ratio;

use crate::decoder::BerResult;
use crate::error::{Error, Result};
use crate::qc::ExponentMatrix;
use crate::spectrum::AverageSpectrum;
use crate::spreading::{BVector, SpreadingMatrix};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty, non-comment lines with their 1-based line numbers.
fn content_lines(text: &str) -> Vec<(usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .collect()
}

fn parse_number<T: std::str::FromStr>(line: usize, token: &str, what: &str) -> Result<T> {
    token
        .parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{token}`")))
}

/// Parses the exponent-matrix text format.
pub fn parse_exponent_matrix(text: &str) -> Result<ExponentMatrix> {
    let lines = content_lines(text);
    let &(ln, header) = lines
        .first()
        .ok_or_else(|| parse_err(1, "empty input"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    if head.len() != 3 {
        return Err(parse_err(ln, "expected header `m n N`"));
    }
    let m: usize = parse_number(ln, head[0], "row count")?;
    let n: usize = parse_number(ln, head[1], "column count")?;
    let lifting: u32 = parse_number(ln, head[2], "lifting degree")?;
    if lines.len() != m + 1 {
        return Err(parse_err(
            lines.last().map_or(ln, |&(l, _)| l),
            format!("expected {m} matrix rows, found {}", lines.len() - 1),
        ));
    }
    let mut entries = Vec::with_capacity(m * n);
    for &(ln, row) in &lines[1..] {
        let tokens: Vec<&str> = row.split_whitespace().collect();
        if tokens.len() != n {
            return Err(parse_err(
                ln,
                format!("expected {n} entries, found {}", tokens.len()),
            ));
        }
        for t in tokens {
            if t == "-" {
                entries.push(None);
            } else {
                entries.push(Some(parse_number(ln, t, "exponent")?));
            }
        }
    }
    ExponentMatrix::new(m, n, lifting, entries).map_err(|e| parse_err(ln_of(&lines), e.to_string()))
}

fn ln_of(lines: &[(usize, &str)]) -> usize {
    lines.first().map_or(1, |&(l, _)| l)
}

/// Serializes an exponent matrix in the text format (Display does the same).
pub fn format_exponent_matrix(p: &ExponentMatrix) -> String {
    p.to_string()
}

/// Parses a spreading matrix in either file form, detected by the header:
/// three numbers mean the full matrix, two mean the b-vector form.
pub fn parse_spreading_matrix(text: &str) -> Result<SpreadingMatrix> {
    let lines = content_lines(text);
    let &(ln, header) = lines
        .first()
        .ok_or_else(|| parse_err(1, "empty input"))?;
    let head: Vec<&str> = header.split_whitespace().collect();
    match head.len() {
        3 => {
            let m: usize = parse_number(ln, head[0], "row count")?;
            let n: usize = parse_number(ln, head[1], "column count")?;
            let memory: u32 = parse_number(ln, head[2], "memory")?;
            if lines.len() != m + 1 {
                return Err(parse_err(
                    lines.last().map_or(ln, |&(l, _)| l),
                    format!("expected {m} matrix rows, found {}", lines.len() - 1),
                ));
            }
            let mut entries = Vec::with_capacity(m * n);
            for &(ln, row) in &lines[1..] {
                let tokens: Vec<&str> = row.split_whitespace().collect();
                if tokens.len() != n {
                    return Err(parse_err(
                        ln,
                        format!("expected {n} entries, found {}", tokens.len()),
                    ));
                }
                for t in tokens {
                    let digit: u32 = parse_number(ln, t, "spreading digit")?;
                    if digit > memory {
                        return Err(parse_err(
                            ln,
                            format!("spreading digit {digit} exceeds memory {memory}"),
                        ));
                    }
                    entries.push(digit);
                }
            }
            SpreadingMatrix::new(m, n, memory, entries)
                .map_err(|e| parse_err(ln, e.to_string()))
        }
        2 => {
            let m: usize = parse_number(ln, head[0], "row count")?;
            let memory: u32 = parse_number(ln, head[1], "memory")?;
            let mut values = Vec::new();
            for &(ln, row) in &lines[1..] {
                for t in row.split_whitespace() {
                    values.push(parse_number::<u64>(ln, t, "b-vector value")?);
                }
            }
            if values.is_empty() {
                return Err(parse_err(ln, "b-vector has no values"));
            }
            let bv = BVector::new(m, memory, values).map_err(|e| parse_err(ln, e.to_string()))?;
            Ok(bv.b_decode())
        }
        _ => Err(parse_err(ln, "expected header `m n m_s` or `m m_s`")),
    }
}

/// Serializes a spreading matrix in the full file form.
pub fn format_spreading_matrix(b: &SpreadingMatrix) -> String {
    let mut out = format!("{} {} {}\n", b.rows(), b.cols(), b.memory());
    for i in 0..b.rows() {
        let row: Vec<String> = (0..b.cols()).map(|j| b.get(i, j).to_string()).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// Serializes a spreading matrix in the b-vector file form.
pub fn format_b_vector(b: &SpreadingMatrix) -> String {
    let bv = b.b_encode();
    let values: Vec<String> = bv.values().iter().map(u64::to_string).collect();
    format!("{} {}\n{}\n", b.rows(), b.memory(), values.join(" "))
}

/// Spectrum CSV: one row per cycle length, with the exact rational and its
/// decimal value.
pub fn spectrum_csv(s: &AverageSpectrum) -> String {
    let mut out = String::from("lambda,E_lambda_num,E_lambda_den,E_lambda_decimal\n");
    for (i, r) in s.values().iter().enumerate() {
        let lambda = 2 * i + 4;
        let dec = *r.numer() as f64 / *r.denom() as f64;
        out.push_str(&format!("{lambda},{},{},{dec}\n", r.numer(), r.denom()));
    }
    out
}

/// Parses the spectrum CSV back into (lambda, ratio) pairs.
pub fn parse_spectrum_csv(text: &str) -> Result<Vec<(usize, Ratio<i64>)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let ln = i + 1;
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 4 {
            return Err(parse_err(ln, "expected 4 comma-separated fields"));
        }
        let lambda: usize = parse_number(ln, fields[0], "cycle length")?;
        let num: i64 = parse_number(ln, fields[1], "numerator")?;
        let den: i64 = parse_number(ln, fields[2], "denominator")?;
        if den == 0 {
            return Err(parse_err(ln, "zero denominator"));
        }
        out.push((lambda, Ratio::new(num, den)));
    }
    Ok(out)
}

/// BER CSV: one row per SNR point.
pub fn ber_csv(results: &[BerResult]) -> String {
    let mut out = String::from("snr_db,frames,bit_errors,ber,frame_errors,fer\n");
    for r in results {
        out.push_str(&format!(
            "{},{},{},{},{},{}\n",
            r.snr_db,
            r.frames,
            r.bit_errors,
            r.ber(),
            r.frame_errors,
            r.fer()
        ));
    }
    out
}

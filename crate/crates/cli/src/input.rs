//! Vector files, inline lists and sweep ranges.

use std::fs;
use std::path::Path;

use hilbert_tensor::DenseVector;

use crate::error::{CliError, CliResult};

/// Reads a vector from one value per line or a single comma-separated line.
///
/// Blank lines and `#` comments are skipped.
pub fn parse_vector_file(path: &Path) -> CliResult<DenseVector> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    parse_vector_text(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_vector_text(text: &str) -> CliResult<DenseVector> {
    let mut coords = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        for token in line.split(',') {
            coords.push(parse_real(token.trim(), lineno + 1)?);
        }
    }
    if coords.is_empty() {
        return Err(CliError::Input("vector input is empty".into()));
    }
    DenseVector::new(coords).map_err(|e| CliError::Input(e.to_string()))
}

/// Parses an inline list such as `1,-0.5,2`.
pub fn parse_inline_vector(text: &str) -> CliResult<DenseVector> {
    let coords = text
        .split(',')
        .enumerate()
        .map(|(i, t)| {
            t.trim().parse::<f64>().map_err(|_| {
                CliError::Input(format!(
                    "non-numeric entry {:?} at position {}",
                    t.trim(),
                    i + 1
                ))
            })
        })
        .collect::<CliResult<Vec<f64>>>()?;
    DenseVector::new(coords).map_err(|e| CliError::Input(e.to_string()))
}

fn parse_real(token: &str, line: usize) -> CliResult<f64> {
    match token.parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(CliError::Input(format!(
            "line {line}: non-numeric token {token:?}"
        ))),
    }
}

/// Integer set: `3`, `2,4`, or the inclusive range `2..8`.
pub fn parse_usize_set(text: &str, name: &str) -> CliResult<Vec<usize>> {
    let bad = || CliError::Validation(format!("--{name}: cannot parse {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((lo, hi)) = part.split_once("..") {
            let lo: usize = lo.trim().parse().map_err(|_| bad())?;
            let hi: usize = hi
                .trim()
                .trim_start_matches('=')
                .parse()
                .map_err(|_| bad())?;
            if lo > hi {
                return Err(CliError::Validation(format!(
                    "--{name}: empty range {part}"
                )));
            }
            out.extend(lo..=hi);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    Ok(out)
}

/// Real set: `0.5`, `0.5,1,2`, or `lo..hi:step` (inclusive of `hi` up to rounding).
pub fn parse_f64_set(text: &str, name: &str) -> CliResult<Vec<f64>> {
    let bad = || CliError::Validation(format!("--{name}: cannot parse {text:?}"));
    let mut out = Vec::new();
    for part in text.split(',').map(str::trim) {
        if let Some((range, step)) = part.split_once(':') {
            let (lo, hi) = range.split_once("..").ok_or_else(bad)?;
            let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
            let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
            let step: f64 = step.trim().parse().map_err(|_| bad())?;
            if !(lo.is_finite() && hi.is_finite() && step.is_finite() && step > 0.0 && lo <= hi) {
                return Err(CliError::Validation(format!(
                    "--{name}: invalid range {part}"
                )));
            }
            let count = ((hi - lo) / step + 1e-9).floor() as usize;
            out.extend((0..=count).map(|k| lo + k as f64 * step));
        } else {
            let v: f64 = part.parse().map_err(|_| bad())?;
            if !v.is_finite() {
                return Err(CliError::Validation(format!(
                    "--{name}: non-finite value {part}"
                )));
            }
            out.push(v);
        }
    }
    Ok(out)
}

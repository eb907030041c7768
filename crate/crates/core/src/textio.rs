//! Shared CSV plumbing: header checks, row-numbered field parsing and the
//! fixed 9-significant-digit float format used by every writer.

use std::path::Path;

use crate::error::{Error, Result};

/// Formats `v` with 9 significant digits, `%g` style: fixed notation for
/// decimal exponents in `[-5, 9)`, scientific otherwise, trailing zeros
/// trimmed. The output is a pure function of the bit pattern.
pub fn format_sig9(v: f64) -> String {
    if v == 0.0 {
        return "0".to_string();
    }
    if v.is_nan() {
        return "nan".to_string();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf" } else { "-inf" }.to_string();
    }
    let sci = format!("{:.8e}", v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, v))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

pub(crate) fn read_to_string(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

pub(crate) fn write_string(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// One data row of a headed CSV document.
#[derive(Debug)]
pub(crate) struct Row {
    pub line: u64,
    pub fields: Vec<String>,
}

/// Parses a headed CSV document. The header must start with `required`
/// (in order); any of `optional` may follow. Returns the number of columns
/// actually present and the data rows.
pub(crate) fn read_rows(
    text: &str,
    source_name: &str,
    required: &[&str],
    optional: &[&str],
) -> Result<(usize, Vec<Row>)> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());

    let header = reader.headers().map_err(|e| csv_error(source_name, e))?.clone();
    let names: Vec<&str> = header.iter().collect();
    let expected = required.len()..=required.len() + optional.len();
    let all: Vec<&str> = required.iter().chain(optional).copied().collect();
    if !expected.contains(&names.len()) || names[..] != all[..names.len()] {
        return Err(Error::Format {
            source_name: source_name.to_string(),
            message: format!("expected header `{}`, found `{}`", required.join(","), names.join(",")),
        });
    }

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(source_name, e))?;
        let line = record.position().map_or(0, |p| p.line());
        rows.push(Row {
            line,
            fields: record.iter().map(str::to_string).collect(),
        });
    }
    Ok((names.len(), rows))
}

fn csv_error(source_name: &str, e: csv::Error) -> Error {
    let line = e.position().map_or(0, |p| p.line());
    Error::Parse {
        source_name: source_name.to_string(),
        line,
        message: e.to_string(),
    }
}

impl Row {
    pub fn parse_error(&self, source_name: &str, message: impl Into<String>) -> Error {
        Error::Parse {
            source_name: source_name.to_string(),
            line: self.line,
            message: message.into(),
        }
    }

    /// Parses column `idx` as a finite float.
    pub fn number(&self, source_name: &str, idx: usize, column: &str) -> Result<f64> {
        let raw = self.fields[idx].as_str();
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            Ok(_) => Err(self.parse_error(source_name, format!("{column} must be finite, got `{raw}`"))),
            Err(_) => Err(self.parse_error(source_name, format!("{column} is not a number: `{raw}`"))),
        }
    }
}

/// Checks that degree angles are strictly increasing within `[0, 360)`.
pub(crate) fn check_angle_column(source_name: &str, rows: &[Row], angles_deg: &[f64]) -> Result<()> {
    for (i, (&a, row)) in angles_deg.iter().zip(rows).enumerate() {
        if !(0.0..360.0).contains(&a) {
            return Err(row.parse_error(source_name, format!("angle {a}° outside [0, 360)")));
        }
        if i > 0 {
            let prev = angles_deg[i - 1];
            if a == prev {
                return Err(row.parse_error(source_name, format!("duplicate angle {a}°")));
            }
            if a < prev {
                return Err(row.parse_error(
                    source_name,
                    format!("angles must be strictly increasing ({a}° after {prev}°)"),
                ));
            }
        }
    }
    Ok(())
}

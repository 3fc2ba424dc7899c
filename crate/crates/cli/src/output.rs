//! Deterministic text output: every number carries 10 significant digits.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::Value;

use crate::error::CliError;

const SIGNIFICANT: usize = 10;

/// `v` with 10 significant digits: plain decimal for moderate magnitudes,
/// scientific otherwise. Trailing zeros are kept so columns line up.
pub fn sig(v: f64) -> String {
    if !v.is_finite() {
        return v.to_string();
    }
    if v == 0.0 {
        return "0".into();
    }
    // exponent after rounding, so 9.9999999999 counts as 10
    let sci = format!("{:.*e}", SIGNIFICANT - 1, v);
    let exp: i32 = sci.split_once('e').and_then(|(_, e)| e.parse().ok()).unwrap_or(0);
    if (-5..15).contains(&exp) {
        let decimals = (SIGNIFICANT as i32 - 1 - exp).max(0) as usize;
        format!("{v:.decimals$}")
    } else {
        sci
    }
}

/// `v` rounded to 10 significant digits, for JSON.
pub fn round(v: f64) -> f64 {
    if v.is_finite() {
        format!("{:.*e}", SIGNIFICANT - 1, v).parse().unwrap_or(v)
    } else {
        v
    }
}

pub fn num(v: f64) -> Value {
    serde_json::Number::from_f64(round(v)).map_or(Value::Null, Value::Number)
}

pub fn nums(vs: &[f64]) -> Value {
    Value::Array(vs.iter().map(|&v| num(v)).collect())
}

/// CSV text from a header and rows of preformatted cells.
pub fn csv_text(header: &[String], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::WriterBuilder::new().flexible(false).from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Numerical(format!("csv output: {e}"));
    w.write_record(header).map_err(fail)?;
    for row in rows {
        w.write_record(row).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Numerical(format!("csv output: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

pub fn json_text(value: &Value) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("json values serialize");
    s.push('\n');
    s
}

/// Writes to `path`, or standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| CliError::config(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(text.as_bytes()).and_then(|_| out.flush()).map_err(|e| CliError::Numerical(e.to_string()))
        }
    }
}

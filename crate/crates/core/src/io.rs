//! JSON text formats for domains and boundary data.
//!
//! Complex numbers are `[re, im]` pairs; polynomials are arrays of pairs in
//! ascending degree. Errors name the offending field and index.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde_json::{json, Value};

pub(crate) fn parse_complex(v: &Value, field: &str, index: Option<usize>) -> Result<Complex64> {
    let pair = v
        .as_array()
        .ok_or_else(|| Error::parse(field, index, "expected a [re, im] pair"))?;
    if pair.len() != 2 {
        return Err(Error::parse(field, index, format!("expected 2 numbers, found {}", pair.len())));
    }
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| Error::parse(field, index, "real part is not a number"))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| Error::parse(field, index, "imaginary part is not a number"))?;
    Ok(Complex64::new(re, im))
}

pub(crate) fn parse_coeffs(obj: &Value, field: &str) -> Result<Option<Vec<Complex64>>> {
    let Some(v) = obj.get(field) else {
        return Ok(None);
    };
    let arr = v
        .as_array()
        .ok_or_else(|| Error::parse(field, None, "expected an array of [re, im] pairs"))?;
    arr.iter()
        .enumerate()
        .map(|(i, c)| parse_complex(c, field, Some(i)))
        .collect::<Result<Vec<_>>>()
        .map(Some)
}

/// Nested `c[i][j]` arrays of pairs.
pub(crate) fn parse_matrix(obj: &Value, field: &str) -> Result<Option<Vec<Vec<Complex64>>>> {
    let Some(v) = obj.get(field) else {
        return Ok(None);
    };
    let rows = v
        .as_array()
        .ok_or_else(|| Error::parse(field, None, "expected nested arrays c[i][j] of [re, im] pairs"))?;
    let mut out = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| Error::parse(field, Some(i), "row is not an array"))?;
        let mut parsed = Vec::with_capacity(cells.len());
        for (j, cell) in cells.iter().enumerate() {
            parsed.push(parse_complex(cell, &format!("{field}[{i}]"), Some(j))?);
        }
        out.push(parsed);
    }
    Ok(Some(out))
}

pub(crate) fn parse_object(text: &str) -> Result<Value> {
    let v: Value = serde_json::from_str(text).map_err(|e| {
        Error::parse(
            "<document>",
            None,
            format!("invalid JSON at line {} column {}: {e}", e.line(), e.column()),
        )
    })?;
    if !v.is_object() {
        return Err(Error::parse("<document>", None, "expected a JSON object"));
    }
    Ok(v)
}

pub(crate) fn complex_json(c: Complex64) -> Value {
    json!([c.re, c.im])
}

pub(crate) fn coeffs_json(c: &[Complex64]) -> Value {
    Value::Array(c.iter().map(|&x| complex_json(x)).collect())
}

pub(crate) fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

//! Matrix and vector file formats.
//!
//! A matrix file is a UTF-8 JSON object with an integer field `n` and a
//! field `entries`: an n-length array of n-length arrays, each entry a
//! 2-array `[re, im]` of decimal numbers:
//!
//! ```json
//! {"n":2,"entries":[[[0,0],[1,0]],[[0,0],[0,0]]]}
//! ```
//!
//! A vector file uses the same shape with `entries` a flat n-length array
//! of `[re, im]` pairs.

use num_complex::Complex64;
use serde_json::Value;

use transradii::{ComplexMatrix, UnitVector};

pub fn parse_complex_pair(value: &Value, what: &str) -> Result<Complex64, String> {
    let pair = value
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| format!("{what}: expected a [re, im] pair"))?;
    let re = pair[0]
        .as_f64()
        .ok_or_else(|| format!("{what}: re is not a number"))?;
    let im = pair[1]
        .as_f64()
        .ok_or_else(|| format!("{what}: im is not a number"))?;
    Ok(Complex64::new(re, im))
}

pub fn parse_matrix(bytes: &[u8]) -> Result<ComplexMatrix, String> {
    let root: Value =
        serde_json::from_slice(bytes).map_err(|e| format!("invalid JSON: {e}"))?;
    let n = root
        .get("n")
        .and_then(Value::as_u64)
        .ok_or("missing integer field \"n\"")? as usize;
    if n == 0 {
        return Err("n must be positive".into());
    }
    let rows = root
        .get("entries")
        .and_then(Value::as_array)
        .ok_or("missing array field \"entries\"")?;
    if rows.len() != n {
        return Err(format!("expected {n} rows, found {}", rows.len()));
    }
    let mut parsed = Vec::with_capacity(n);
    for (i, row) in rows.iter().enumerate() {
        let cells = row
            .as_array()
            .ok_or_else(|| format!("row {i} is not an array"))?;
        if cells.len() != n {
            return Err(format!("row {i}: expected {n} entries, found {}", cells.len()));
        }
        let mut out = Vec::with_capacity(n);
        for (j, cell) in cells.iter().enumerate() {
            out.push(parse_complex_pair(cell, &format!("entry ({i},{j})"))?);
        }
        parsed.push(out);
    }
    ComplexMatrix::from_rows(&parsed).map_err(|e| e.to_string())
}

pub fn parse_vector(bytes: &[u8]) -> Result<UnitVector, String> {
    let root: Value =
        serde_json::from_slice(bytes).map_err(|e| format!("invalid JSON: {e}"))?;
    let n = root
        .get("n")
        .and_then(Value::as_u64)
        .ok_or("missing integer field \"n\"")? as usize;
    let cells = root
        .get("entries")
        .and_then(Value::as_array)
        .ok_or("missing array field \"entries\"")?;
    if cells.len() != n {
        return Err(format!("expected {n} entries, found {}", cells.len()));
    }
    let mut comps = Vec::with_capacity(n);
    for (i, cell) in cells.iter().enumerate() {
        comps.push(parse_complex_pair(cell, &format!("entry {i}"))?);
    }
    UnitVector::new(&comps).map_err(|e| e.to_string())
}

pub fn complex_json(z: Complex64) -> Value {
    serde_json::json!([z.re, z.im])
}

pub fn vector_json(components: &[Complex64]) -> Value {
    Value::Array(components.iter().map(|&z| complex_json(z)).collect())
}

pub fn matrix_json(m: &ComplexMatrix) -> Value {
    let n = m.nrows();
    let rows: Vec<Value> = (0..n)
        .map(|i| Value::Array((0..m.ncols()).map(|j| complex_json(m.entry(i, j))).collect()))
        .collect();
    serde_json::json!({ "n": n, "entries": rows })
}

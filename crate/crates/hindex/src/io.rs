//! Strict JSON formats for matrices and vectors.
//!
//! Matrix: `{"n": 2, "entries": [[2, -1], [-1, 1]]}` with each entry either
//! a plain number or a `[re, im]` pair. Vectors use the same entry encoding
//! with a flat `entries` array. NaN and infinite values are rejected, as is
//! anything non-square.

use nalgebra::{Complex, DMatrix, DVector};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::matrix::{C64, HermitianMatrix, VectorC};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum EntryRepr {
    Real(f64),
    Pair([f64; 2]),
}

impl EntryRepr {
    fn to_complex(&self) -> C64 {
        match self {
            EntryRepr::Real(re) => Complex::new(*re, 0.0),
            EntryRepr::Pair([re, im]) => Complex::new(*re, *im),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixRepr {
    n: usize,
    entries: Vec<Vec<EntryRepr>>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorRepr {
    n: usize,
    entries: Vec<EntryRepr>,
}

fn parse_error(field: &str, message: impl ToString) -> Error {
    Error::Parse {
        field: field.into(),
        message: message.to_string(),
    }
}

fn check_finite(z: &C64, field: &str, i: usize, j: Option<usize>) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        let place = match j {
            Some(j) => format!("{field}[{i}][{j}]"),
            None => format!("{field}[{i}]"),
        };
        Err(parse_error(&place, "NaN or infinite value"))
    }
}

pub fn parse_matrix(text: &str) -> Result<HermitianMatrix> {
    let repr: MatrixRepr =
        serde_json::from_str(text).map_err(|e| parse_error("matrix", e))?;
    if repr.n == 0 {
        return Err(parse_error("n", "dimension must be positive"));
    }
    if repr.entries.len() != repr.n {
        return Err(parse_error(
            "entries",
            format!("expected {} rows, found {}", repr.n, repr.entries.len()),
        ));
    }
    let mut m = DMatrix::from_element(repr.n, repr.n, Complex::new(0.0, 0.0));
    for (i, row) in repr.entries.iter().enumerate() {
        if row.len() != repr.n {
            return Err(parse_error(
                &format!("entries[{i}]"),
                format!("expected {} columns, found {} (matrix not square)", repr.n, row.len()),
            ));
        }
        for (j, e) in row.iter().enumerate() {
            let z = e.to_complex();
            check_finite(&z, "entries", i, Some(j))?;
            m[(i, j)] = z;
        }
    }
    HermitianMatrix::new(m)
}

pub fn parse_vector(text: &str) -> Result<VectorC> {
    let repr: VectorRepr =
        serde_json::from_str(text).map_err(|e| parse_error("vector", e))?;
    if repr.n == 0 {
        return Err(parse_error("n", "length must be positive"));
    }
    if repr.entries.len() != repr.n {
        return Err(parse_error(
            "entries",
            format!("expected {} entries, found {}", repr.n, repr.entries.len()),
        ));
    }
    let mut v = DVector::from_element(repr.n, Complex::new(0.0, 0.0));
    for (i, e) in repr.entries.iter().enumerate() {
        let z = e.to_complex();
        check_finite(&z, "entries", i, None)?;
        v[i] = z;
    }
    Ok(v)
}

/// Round to 12 significant digits; every number the CLI prints goes
/// through this.
pub fn sig12(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return v;
    }
    format!("{v:.11e}").parse().unwrap_or(v)
}

pub fn json_num(v: f64) -> serde_json::Value {
    serde_json::Number::from_f64(sig12(v))
        .map(serde_json::Value::Number)
        .unwrap_or(serde_json::Value::Null)
}

pub fn matrix_to_json(a: &HermitianMatrix) -> serde_json::Value {
    let n = a.dim();
    let real = a.is_real();
    let rows: Vec<serde_json::Value> = (0..n)
        .map(|i| {
            let row: Vec<serde_json::Value> = (0..n)
                .map(|j| {
                    let z = a.entry(i, j);
                    if real {
                        json_num(z.re)
                    } else {
                        serde_json::Value::Array(vec![json_num(z.re), json_num(z.im)])
                    }
                })
                .collect();
            serde_json::Value::Array(row)
        })
        .collect();
    serde_json::json!({ "n": n, "entries": rows })
}

pub fn vector_to_json(v: &VectorC) -> serde_json::Value {
    let real = v.iter().all(|z| z.im.abs() <= 1e-14 * z.re.abs().max(1.0));
    let entries: Vec<serde_json::Value> = v
        .iter()
        .map(|z| {
            if real {
                json_num(z.re)
            } else {
                serde_json::Value::Array(vec![json_num(z.re), json_num(z.im)])
            }
        })
        .collect();
    serde_json::json!({ "n": v.len(), "entries": entries })
}

/// Content digest quoted in reports.
pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    let out = hasher.finalize();
    out.iter().map(|b| format!("{b:02x}")).collect()
}

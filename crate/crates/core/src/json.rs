//! JSON encodings and the canonical writer.
//!
//! A complex scalar is `[re, im]`; a matrix is
//! `{"rows": n, "cols": m, "data": [[re, im], ...]}` in row-major order; a
//! subspace is `{"ambient": n, "basis": <matrix>}`.
//!
//! Canonical output sorts object keys and prints every float with 17
//! significant digits in exponent form, so equal values always serialize to
//! equal bytes.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::Value;

use crate::matrix::{ComplexMatrix, Subspace, TolerancePolicy};

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows(),
            cols: self.cols(),
            data: self.row_major_entries().iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        let entries = repr.data.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        ComplexMatrix::from_row_major(repr.rows, repr.cols, entries).map_err(D::Error::custom)
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient: usize,
    basis: ComplexMatrix,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr { ambient: self.ambient(), basis: self.basis().clone() }.serialize(s)
    }
}

/// Any spanning set is accepted; it is re-orthonormalized on load with the
/// default tolerance policy.
impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(d)?;
        if repr.basis.rows() != repr.ambient {
            return Err(D::Error::custom(format!(
                "basis has {} rows but ambient dimension is {}",
                repr.basis.rows(),
                repr.ambient
            )));
        }
        if repr.basis.cols() == 0 {
            return Ok(Subspace::zero(repr.ambient));
        }
        Subspace::from_spanning(&repr.basis, &TolerancePolicy::default()).map_err(D::Error::custom)
    }
}

/// Serializes `value` canonically (sorted keys, 17 significant digits).
pub fn to_canonical_string<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let v = serde_json::to_value(value)?;
    let mut out = String::new();
    write_canonical(&v, &mut out);
    Ok(out)
}

pub fn write_canonical(v: &Value, out: &mut String) {
    match v {
        Value::Null => out.push_str("null"),
        Value::Bool(b) => out.push_str(if *b { "true" } else { "false" }),
        Value::Number(n) => {
            if n.is_f64() {
                out.push_str(&format_float(n.as_f64().unwrap_or(f64::NAN)));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::String(s) => out.push_str(&Value::String(s.clone()).to_string()),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_canonical(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            let mut keys: Vec<&String> = map.keys().collect();
            keys.sort();
            out.push('{');
            for (i, k) in keys.into_iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_canonical(&map[k], out);
            }
            out.push('}');
        }
    }
}

/// 17 significant digits, exponent form: `-1.2345678901234567e-3`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        // JSON has no representation for these; encoders never produce them.
        "null".to_string()
    }
}

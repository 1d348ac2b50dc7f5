//! JSON matrix file format:
//! `{"n": 2, "field": "real", "entries": [[re, im], ...]}`, row-major, `n²` entries.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;

use super::{CMatrix, HermitianMatrix};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn as_str(self) -> &'static str {
        match self {
            Field::Real => "real",
            Field::Complex => "complex",
        }
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawEntry {
    Pair([f64; 2]),
    Real(f64),
}

#[derive(Deserialize)]
struct RawMatrix {
    n: usize,
    field: String,
    entries: Vec<RawEntry>,
}

/// Shortest field that represents every entry exactly.
pub fn field_of(m: &CMatrix) -> Field {
    if m.iter().all(|z| z.im == 0.0) {
        Field::Real
    } else {
        Field::Complex
    }
}

fn fmt_f64(out: &mut String, x: f64) {
    // 17 significant digits
    write!(out, "{x:.16e}").unwrap();
}

/// Serializes a square matrix with 17 significant digits per component.
pub fn to_json(m: &CMatrix) -> String {
    let n = m.nrows();
    let mut out = String::with_capacity(48 * n * n + 48);
    write!(
        out,
        "{{\"n\":{n},\"field\":\"{}\",\"entries\":[",
        field_of(m).as_str()
    )
    .unwrap();
    for i in 0..n {
        for j in 0..n {
            if i + j > 0 {
                out.push(',');
            }
            let z = m[(i, j)];
            out.push('[');
            fmt_f64(&mut out, z.re);
            out.push(',');
            fmt_f64(&mut out, z.im);
            out.push(']');
        }
    }
    out.push_str("]}");
    out
}

pub fn from_json(text: &str) -> Result<CMatrix> {
    let raw: RawMatrix = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let field = match raw.field.as_str() {
        "real" => Field::Real,
        "complex" => Field::Complex,
        other => return Err(Error::Parse(format!("unknown field {other:?}"))),
    };
    if raw.n == 0 {
        return Err(Error::Empty);
    }
    if raw.entries.len() != raw.n * raw.n {
        return Err(Error::Parse(format!(
            "expected {} entries for n={}, found {}",
            raw.n * raw.n,
            raw.n,
            raw.entries.len()
        )));
    }
    let mut values = Vec::with_capacity(raw.entries.len());
    for e in raw.entries {
        let z = match e {
            RawEntry::Pair([re, im]) => Complex64::new(re, im),
            RawEntry::Real(re) => Complex64::new(re, 0.0),
        };
        if field == Field::Real && z.im != 0.0 {
            return Err(Error::Parse(
                "real field with non-zero imaginary part".into(),
            ));
        }
        values.push(z);
    }
    Ok(CMatrix::from_row_slice(raw.n, raw.n, &values))
}

pub fn hermitian_from_json(text: &str) -> Result<HermitianMatrix> {
    HermitianMatrix::new(from_json(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn writes_expected_layout() {
        let m = HermitianMatrix::diagonal(&[1.0, 0.5]);
        let s = to_json(m.as_matrix());
        assert!(s.starts_with(
            "{\"n\":2,\"field\":\"real\",\"entries\":[[1.0000000000000000e0,0.0000000000000000e0]"
        ));
    }

    #[test]
    fn accepts_plain_real_entries() {
        let m = from_json(r#"{"n":2,"field":"real","entries":[1,2,2,3]}"#).unwrap();
        assert_eq!(m[(0, 1)], Complex64::new(2.0, 0.0));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(from_json(r#"{"n":2,"field":"real","entries":[1,2,3]}"#).is_err());
        assert!(from_json(r#"{"n":1,"field":"quaternion","entries":[1]}"#).is_err());
        assert!(from_json(r#"{"n":1,"field":"real","entries":[[1,1]]}"#).is_err());
    }

    proptest! {
        #[test]
        fn round_trip_is_bit_exact(
            n in 1usize..5,
            seed in proptest::collection::vec(-1e6f64..1e6, 32..=32),
        ) {
            let m = CMatrix::from_fn(n, n, |i, j| Complex64::new(seed[i * n + j] * 1.000_000_1, seed[(i * n + j + 7) % 32] / 3.0));
            let back = from_json(&to_json(&m)).unwrap();
            prop_assert_eq!(back, m);
        }
    }
}

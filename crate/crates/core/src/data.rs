//! Reference witnesses and gates shipped with the crate, plus the JSON form
//! used for unitaries.
//!
//! Unitary files hold either a dense matrix of `[re, im]` pairs or a sparse
//! list of unit-modulus entries given as fractions of a full turn:
//!
//! ```json
//! {"d": 3, "matrix": [[[1, 0], [0, 0], [0, 0]], ...]}
//! {"d": 3, "monomial": [{"row": 1, "col": 2, "turns": [1, 9]}, ...]}
//! ```

use std::f64::consts::PI;
use std::fs;
use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C64};
use crate::stabilizer::CodeId;
use crate::wigner::PhasePointIndex;
use crate::witness::{derive_witness, parse_witness, Witness};

/// Qutrit witnesses, `(name, file contents)`.
pub const QUTRIT_WITNESS_FILES: [(&str, &str); 7] = [
    ("A1", include_str!("../data/qutrit_wa1.tuples")),
    ("A2", include_str!("../data/qutrit_wa2.tuples")),
    ("AT1", include_str!("../data/qutrit_wat1.tuples")),
    ("AT2", include_str!("../data/qutrit_wat2.tuples")),
    ("B1", include_str!("../data/qutrit_wb1.tuples")),
    ("B2", include_str!("../data/qutrit_wb2.tuples")),
    ("B3", include_str!("../data/qutrit_wb3.tuples")),
];

/// The 58-line `d = 5` facet.
pub const D5_FACET_FILE: &str = include_str!("../data/wb5.tuples");

/// Qubit witnesses as unnormalized matrices.
pub const QUBIT_WITNESS_FILES: [(&str, &str); 3] = [
    ("A", include_str!("../data/qubit_wa.json")),
    ("AT", include_str!("../data/qubit_wat.json")),
    ("B", include_str!("../data/qubit_wb.json")),
];

/// Best known non-Clifford gates for `d = 2, 3, 5, 7`.
pub const OPTIMAL_GATE_FILES: [(u32, &str); 4] = [
    (2, include_str!("../data/uopt2.json")),
    (3, include_str!("../data/uopt3.json")),
    (5, include_str!("../data/uopt5.json")),
    (7, include_str!("../data/uopt7.json")),
];

/// Phase-point index whose parity-code witness is the `d = 7` facet.
pub const D7_PHASE_POINT: [i64; 8] = [0, 0, 0, 3, 2, 4, 2, 3];

pub fn qutrit_witnesses() -> Result<Vec<(&'static str, Witness)>> {
    QUTRIT_WITNESS_FILES
        .iter()
        .map(|(name, text)| Ok((*name, parse_witness(text)?)))
        .collect()
}

pub fn qubit_witnesses() -> Result<Vec<(&'static str, Witness)>> {
    QUBIT_WITNESS_FILES
        .iter()
        .map(|(name, text)| Ok((*name, Witness::from_matrix(2, parse_matrix_json(text)?)?)))
        .collect()
}

pub fn d5_facet() -> Result<Witness> {
    parse_witness(D5_FACET_FILE)
}

pub fn d7_witness() -> Result<Witness> {
    derive_witness(CodeId::B, &PhasePointIndex::new(7, &D7_PHASE_POINT)?)
}

/// The facet each best-known gate was optimized against.
pub fn designated_facet(d: u32) -> Result<Witness> {
    match d {
        2 => derive_witness(CodeId::B, &PhasePointIndex::zero(2)?),
        3 => qutrit_witnesses()?
            .into_iter()
            .find(|(n, _)| *n == "B3")
            .map(|(_, w)| w)
            .ok_or_else(|| Error::Verification("missing qutrit B3 witness".into())),
        5 => d5_facet(),
        7 => d7_witness(),
        _ => Err(Error::UnsupportedDimension {
            d,
            reason: "reference data covers d = 2, 3, 5, 7",
        }),
    }
}

pub fn optimal_gate(d: u32) -> Result<CMatrix> {
    let (_, text) =
        OPTIMAL_GATE_FILES
            .iter()
            .find(|(dd, _)| *dd == d)
            .ok_or(Error::UnsupportedDimension {
                d,
                reason: "reference gates cover d = 2, 3, 5, 7",
            })?;
    parse_matrix_json(text)
}

#[derive(Deserialize)]
struct MonomialEntry {
    row: usize,
    col: usize,
    turns: [i64; 2],
}

#[derive(Deserialize)]
struct MatrixFile {
    d: Option<usize>,
    matrix: Option<Vec<Vec<Value>>>,
    monomial: Option<Vec<MonomialEntry>>,
}

fn parse_entry(v: &Value) -> Result<C64> {
    match v {
        Value::Number(n) => Ok(C64::new(n.as_f64().unwrap_or(f64::NAN), 0.0)),
        Value::Array(pair) if pair.len() == 2 => {
            let re = pair[0].as_f64();
            let im = pair[1].as_f64();
            match (re, im) {
                (Some(re), Some(im)) => Ok(C64::new(re, im)),
                _ => Err(Error::contract(format!(
                    "matrix entry {v} is not a pair of numbers"
                ))),
            }
        }
        _ => Err(Error::contract(format!(
            "matrix entry {v} must be a number or [re, im]"
        ))),
    }
}

/// Parses the unitary/matrix JSON form described in the module docs.
pub fn parse_matrix_json(text: &str) -> Result<CMatrix> {
    let file: MatrixFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    let m = match (file.matrix, file.monomial) {
        (Some(rows), None) => {
            let rows = rows
                .iter()
                .map(|r| r.iter().map(parse_entry).collect::<Result<Vec<_>>>())
                .collect::<Result<Vec<_>>>()?;
            CMatrix::from_rows(&rows)?
        }
        (None, Some(entries)) => {
            let d = file
                .d
                .ok_or_else(|| Error::contract("a monomial matrix needs \"d\""))?;
            let mut m = CMatrix::zeros(d, d);
            for e in entries {
                if e.row >= d || e.col >= d || e.turns[1] == 0 {
                    return Err(Error::contract(format!(
                        "bad monomial entry ({}, {})",
                        e.row, e.col
                    )));
                }
                m[(e.row, e.col)] =
                    C64::from_polar(1.0, 2.0 * PI * e.turns[0] as f64 / e.turns[1] as f64);
            }
            m
        }
        _ => {
            return Err(Error::contract(
                "expected exactly one of \"matrix\" or \"monomial\"",
            ))
        }
    };
    if let Some(d) = file.d {
        if m.rows() != d && m.rows() != d * d {
            return Err(Error::shape(format!(
                "matrix is {}x{} but d={d}",
                m.rows(),
                m.cols()
            )));
        }
    }
    Ok(m)
}

pub fn load_matrix_file(path: impl AsRef<Path>) -> Result<CMatrix> {
    parse_matrix_json(&fs::read_to_string(path)?)
}

/// Row-major `[re, im]` pairs.
pub fn matrix_to_json(m: &CMatrix) -> Value {
    let rows: Vec<Value> = (0..m.rows())
        .map(|r| Value::Array(m.row(r).iter().map(|z| json!([z.re, z.im])).collect()))
        .collect();
    Value::Array(rows)
}

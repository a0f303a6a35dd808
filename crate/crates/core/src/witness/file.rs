//! Plain-text witness files.
//!
//! ```text
//! # d=5 offset=unit-trace provenance=tuples
//! 0 0 1 1 0
//! 0 0 1 2 0
//! ...
//! ```
//!
//! A `provenance=<code>:<u>` header (for example `provenance=B:0,2,2,0`) has
//! no body; the witness is re-derived on load.

use std::fs;
use std::path::Path;

use super::{derive_witness, witness_from_tuples, ProjectorTuple, Provenance, Witness};
use crate::error::{Error, Result};
use crate::stabilizer::CodeId;
use crate::wigner::PhasePointIndex;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

/// Serializes a tuple- or code-built witness.
pub fn witness_to_string(w: &Witness) -> Result<String> {
    let mut out = format!(
        "# d={} offset=unit-trace provenance={}\n",
        w.d, w.provenance
    );
    match (&w.provenance, &w.tuples) {
        (Provenance::Tuples, Some(tuples)) => {
            for t in tuples {
                out.push_str(&t.to_string());
                out.push('\n');
            }
        }
        (Provenance::Code { .. }, _) => {}
        _ => {
            return Err(Error::contract(
                "only witnesses built from tuples or from a code have a file form",
            ))
        }
    }
    Ok(out)
}

enum Header {
    Tuples,
    Code(CodeId, String),
}

fn parse_header(line: &str, lineno: usize) -> Result<(u32, Header)> {
    let body = line.strip_prefix('#').ok_or_else(|| {
        parse_err(
            lineno,
            "expected a '# d=... offset=... provenance=...' header",
        )
    })?;
    let (mut d, mut offset, mut prov) = (None, None, None);
    for field in body.split_whitespace() {
        let (key, value) = field
            .split_once('=')
            .ok_or_else(|| parse_err(lineno, format!("header field {field:?} is not key=value")))?;
        match key {
            "d" => {
                d = Some(
                    value
                        .parse::<u32>()
                        .map_err(|e| parse_err(lineno, format!("bad d: {e}")))?,
                )
            }
            "offset" => offset = Some(value.to_string()),
            "provenance" => prov = Some(value.to_string()),
            _ => return Err(parse_err(lineno, format!("unknown header field {key:?}"))),
        }
    }
    let d = d.ok_or_else(|| parse_err(lineno, "header is missing d="))?;
    match offset.as_deref() {
        Some("unit-trace") => {}
        Some(other) => {
            return Err(parse_err(
                lineno,
                format!("unsupported offset convention {other:?}"),
            ))
        }
        None => return Err(parse_err(lineno, "header is missing offset=")),
    }
    let prov = prov.ok_or_else(|| parse_err(lineno, "header is missing provenance="))?;
    let header = if prov == "tuples" {
        Header::Tuples
    } else {
        let rest = prov.strip_prefix("code:").unwrap_or(&prov);
        let (code, u) = rest.split_once(':').ok_or_else(|| {
            parse_err(
                lineno,
                format!("provenance {prov:?} is neither 'tuples' nor '<code>:<u>'"),
            )
        })?;
        let code = code
            .parse::<CodeId>()
            .map_err(|e| parse_err(lineno, e.to_string()))?;
        Header::Code(code, u.to_string())
    };
    Ok((d, header))
}

fn parse_tuple(line: &str, lineno: usize, d: u32) -> Result<ProjectorTuple> {
    let vals = line
        .split_whitespace()
        .map(|t| {
            t.parse::<u32>()
                .map_err(|_| parse_err(lineno, format!("{t:?} is not a non-negative integer")))
        })
        .collect::<Result<Vec<_>>>()?;
    if vals.len() != 5 {
        return Err(parse_err(
            lineno,
            format!("expected 5 integers 'x1 x2 z1 z2 k', found {}", vals.len()),
        ));
    }
    let t = ProjectorTuple::new(vals[0], vals[1], vals[2], vals[3], vals[4]);
    t.validate(d).map_err(|msg| parse_err(lineno, msg))?;
    Ok(t)
}

/// Parses the witness file format.
pub fn parse_witness(text: &str) -> Result<Witness> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());
    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "empty witness file"))?;
    let (d, header) = parse_header(header, hline)?;
    crate::error::ensure_prime(d).map_err(|e| parse_err(hline, e.to_string()))?;
    let mut tuples = Vec::new();
    for (n, line) in lines {
        if line.starts_with('#') {
            continue;
        }
        if matches!(header, Header::Code(..)) {
            return Err(parse_err(
                n,
                "a code-derived witness file has no tuple lines",
            ));
        }
        tuples.push(parse_tuple(line, n, d)?);
    }
    match header {
        Header::Tuples => {
            if tuples.is_empty() {
                return Err(parse_err(hline, "no projector tuples after the header"));
            }
            witness_from_tuples(&tuples, d)
        }
        Header::Code(code, u) => {
            let u = PhasePointIndex::parse(d, &u).map_err(|e| parse_err(hline, e.to_string()))?;
            derive_witness(code, &u)
        }
    }
}

pub fn load_witness_file(path: impl AsRef<Path>) -> Result<Witness> {
    parse_witness(&fs::read_to_string(path)?)
}

pub fn save_witness_file(w: &Witness, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, witness_to_string(w)?)?;
    Ok(())
}

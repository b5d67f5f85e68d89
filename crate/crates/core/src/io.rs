//! Patch file reading and writing.
//!
//! A patch file is a JSON document with fields `degree` (integer), `points`
//! (array of `|Theta_n|` d-vectors, d = 1 or 3, lexicographic index order)
//! and optional `weights` (array of positive reals, same order; omitted
//! means all ones, i.e. a polynomial patch). Numbers are written with 17
//! significant digits so that a write-read round trip reproduces every
//! value exactly.

use std::fmt::Write as _;
use std::path::Path;

use serde_json::Value;

use crate::error::{Error, Result};
use crate::index::theta_len;
use crate::patch::{PolynomialPatch, RationalPatch};

/// A parsed patch file: scalar or spatial control points, with unit weights
/// when the file carried none.
#[derive(Debug, Clone)]
pub enum PatchData {
    Scalar(RationalPatch<1>),
    Spatial(RationalPatch<3>),
}

impl PatchData {
    pub fn degree(&self) -> usize {
        match self {
            PatchData::Scalar(p) => p.degree(),
            PatchData::Spatial(p) => p.degree(),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            PatchData::Scalar(_) => 1,
            PatchData::Spatial(_) => 3,
        }
    }
}

fn number(v: &Value, what: &str) -> Result<f64> {
    v.as_f64()
        .ok_or_else(|| Error::Parse(format!("{what}: expected a number, got {v}")))
}

/// Parses a patch document from JSON text.
pub fn parse_patch(text: &str) -> Result<PatchData> {
    let root: Value =
        serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid JSON: {e}")))?;
    let obj = root
        .as_object()
        .ok_or_else(|| Error::Parse("top level must be an object".into()))?;
    for key in obj.keys() {
        if key != "degree" && key != "points" && key != "weights" {
            return Err(Error::Parse(format!("unknown field `{key}`")));
        }
    }
    let degree = obj
        .get("degree")
        .ok_or_else(|| Error::Parse("missing field `degree`".into()))?
        .as_u64()
        .ok_or_else(|| Error::Parse("degree: expected a nonnegative integer".into()))?
        as usize;
    let points_v = obj
        .get("points")
        .and_then(Value::as_array)
        .ok_or_else(|| Error::Parse("points: expected an array".into()))?;
    let expected = theta_len(degree);
    if points_v.len() != expected {
        return Err(Error::Parse(format!(
            "points: expected {expected} entries for degree {degree}, got {}",
            points_v.len()
        )));
    }

    // Entry dimension from the first point: a bare number or 1-array is
    // scalar, a 3-array is spatial.
    let entry_dim = |v: &Value| -> Result<usize> {
        match v {
            Value::Number(_) => Ok(1),
            Value::Array(a) if a.len() == 1 || a.len() == 3 => Ok(a.len()),
            Value::Array(a) => Err(Error::Parse(format!(
                "points: entries must have 1 or 3 components, got {}",
                a.len()
            ))),
            other => Err(Error::Parse(format!(
                "points: expected a number or an array, got {other}"
            ))),
        }
    };
    let dim = entry_dim(&points_v[0])?;

    let component = |v: &Value, i: usize, d: usize| -> Result<f64> {
        match v {
            Value::Number(_) => number(v, &format!("points[{i}]")),
            Value::Array(a) => number(&a[d], &format!("points[{i}][{d}]")),
            _ => unreachable!("checked by entry_dim"),
        }
    };

    let weights = match obj.get("weights") {
        None => vec![1.0; expected],
        Some(Value::Array(ws)) => {
            if ws.len() != expected {
                return Err(Error::Parse(format!(
                    "weights: expected {expected} entries for degree {degree}, got {}",
                    ws.len()
                )));
            }
            ws.iter()
                .enumerate()
                .map(|(i, w)| number(w, &format!("weights[{i}]")))
                .collect::<Result<Vec<f64>>>()?
        }
        Some(other) => {
            return Err(Error::Parse(format!(
                "weights: expected an array, got {other}"
            )))
        }
    };

    let build = |d_target: usize| -> Result<Vec<Vec<f64>>> {
        points_v
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let d_here = entry_dim(v)?;
                if d_here != d_target {
                    return Err(Error::Parse(format!(
                        "points[{i}]: expected {d_target} components, got {d_here}"
                    )));
                }
                (0..d_target).map(|d| component(v, i, d)).collect()
            })
            .collect()
    };

    let wrap = |e: Error| match e {
        // Patch constructor messages already name the field.
        Error::InvalidInput(msg) => Error::Parse(msg),
        other => other,
    };
    match dim {
        1 => {
            let pts: Vec<[f64; 1]> = build(1)?.into_iter().map(|p| [p[0]]).collect();
            Ok(PatchData::Scalar(
                RationalPatch::new(degree, pts, weights).map_err(wrap)?,
            ))
        }
        _ => {
            let pts: Vec<[f64; 3]> = build(3)?
                .into_iter()
                .map(|p| [p[0], p[1], p[2]])
                .collect();
            Ok(PatchData::Spatial(
                RationalPatch::new(degree, pts, weights).map_err(wrap)?,
            ))
        }
    }
}

/// Reads and parses a patch file.
pub fn read_patch(path: &Path) -> Result<PatchData> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_patch(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

/// 17-significant-digit serialization; round trips exactly.
fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Formats a patch document. `weights = None` writes a polynomial patch.
pub fn format_patch<const D: usize>(
    degree: usize,
    points: &[[f64; D]],
    weights: Option<&[f64]>,
) -> String {
    let mut out = String::new();
    out.push_str("{\n");
    let _ = writeln!(out, "  \"degree\": {degree},");
    out.push_str("  \"points\": [\n");
    for (i, p) in points.iter().enumerate() {
        let comps: Vec<String> = p.iter().map(|&v| fmt_f64(v)).collect();
        let comma = if i + 1 < points.len() { "," } else { "" };
        let _ = writeln!(out, "    [{}]{comma}", comps.join(", "));
    }
    out.push_str("  ]");
    if let Some(ws) = weights {
        out.push_str(",\n  \"weights\": [\n");
        for (i, &w) in ws.iter().enumerate() {
            let comma = if i + 1 < ws.len() { "," } else { "" };
            let _ = writeln!(out, "    {}{comma}", fmt_f64(w));
        }
        out.push_str("  ]");
    }
    out.push_str("\n}\n");
    out
}

pub fn format_rational<const D: usize>(patch: &RationalPatch<D>) -> String {
    format_patch(patch.degree(), patch.points(), Some(patch.weights()))
}

pub fn format_polynomial<const D: usize>(patch: &PolynomialPatch<D>) -> String {
    format_patch(patch.degree(), patch.points(), None)
}

/// Writes a patch document to a file.
pub fn write_patch_file(path: &Path, contents: &str) -> Result<()> {
    std::fs::write(path, contents)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_minimal_documents() {
        let scalar = r#"{"degree": 1, "points": [0.5, -1.25, 3.0]}"#;
        match parse_patch(scalar).unwrap() {
            PatchData::Scalar(p) => {
                assert_eq!(p.degree(), 1);
                assert_eq!(p.points()[1], [-1.25]);
                assert_eq!(p.weights(), &[1.0, 1.0, 1.0]);
            }
            _ => panic!("expected scalar"),
        }
        let spatial = r#"{
            "degree": 1,
            "points": [[0,0,0],[1,0,0],[0,1,0]],
            "weights": [1, 2, 0.5]
        }"#;
        match parse_patch(spatial).unwrap() {
            PatchData::Spatial(p) => assert_eq!(p.weights()[1], 2.0),
            _ => panic!("expected spatial"),
        }
    }

    #[test]
    fn errors_name_the_offending_field() {
        let cases = [
            (r#"{"points": [0.0]}"#, "degree"),
            (r#"{"degree": 1, "points": [0.0, 1.0]}"#, "points"),
            (
                r#"{"degree": 1, "points": [0.0, 1.0, 2.0], "weights": [1.0, 0.0, 1.0]}"#,
                "weights[1]",
            ),
            (
                r#"{"degree": 1, "points": [0.0, [1.0, 0.0, 0.0], 2.0]}"#,
                "points[1]",
            ),
            (r#"{"degree": 1, "points": [0.0, 1.0, 2.0], "extra": 1}"#, "extra"),
        ];
        for (text, field) in cases {
            let err = parse_patch(text).unwrap_err().to_string();
            assert!(err.contains(field), "expected `{field}` in `{err}`");
        }
    }

    proptest! {
        #[test]
        fn round_trip_is_exact(
            degree in 0usize..5,
            seed in any::<u64>(),
            with_weights in any::<bool>(),
        ) {
            use rand::{Rng, SeedableRng};
            let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
            let len = theta_len(degree);
            let points: Vec<[f64; 3]> = (0..len)
                .map(|_| std::array::from_fn(|_| rng.random_range(-1e3..1e3)))
                .collect();
            let weights: Vec<f64> = (0..len).map(|_| rng.random_range(1e-3..1e3)).collect();
            let text = format_patch(degree, &points, with_weights.then_some(weights.as_slice()));
            let reparsed = parse_patch(&text).unwrap();
            match reparsed {
                PatchData::Spatial(p) => {
                    prop_assert_eq!(p.degree(), degree);
                    for (a, b) in p.points().iter().zip(&points) {
                        for d in 0..3 {
                            prop_assert_eq!(a[d].to_bits(), b[d].to_bits());
                        }
                    }
                    if with_weights {
                        for (a, b) in p.weights().iter().zip(&weights) {
                            prop_assert_eq!(a.to_bits(), b.to_bits());
                        }
                    }
                }
                _ => prop_assert!(false, "dimension changed in round trip"),
            }
        }
    }
}

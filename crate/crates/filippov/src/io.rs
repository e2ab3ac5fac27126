//! The algebra file format.
//!
//! A single JSON object:
//!
//! ```json
//! {
//!   "arity": 3,
//!   "dim": 4,
//!   "brackets": [
//!     { "on": [1, 2, 3], "result": [ { "basis": 4, "coeff": "1" } ] }
//!   ],
//!   "metric": [["1", "0", ...], ...]
//! }
//! ```
//!
//! Indices are 1-based and every `on` tuple must be strictly increasing;
//! rationals are strings `p` or `p/q` with `q > 0`. The `metric` field is
//! optional and must be a symmetric `dim x dim` array. Emission is
//! deterministic and byte-stable: tuples sorted, coefficients in lowest
//! terms, `/q` omitted when the denominator is one.

use serde::{Deserialize, Serialize};

use crate::algebra::{MetricNAlgebra, NAlgebra};
use crate::error::{Error, Result};
use crate::linalg::{BilinearForm, Matrix, Rational};

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub(crate) struct FileAlgebra {
    arity: usize,
    dim: usize,
    brackets: Vec<FileBracket>,
    #[serde(skip_serializing_if = "Option::is_none")]
    metric: Option<Vec<Vec<String>>>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileBracket {
    on: Vec<usize>,
    result: Vec<FileTerm>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct FileTerm {
    basis: usize,
    coeff: String,
}

/// A parsed algebra file: the structure table plus the optional metric.
#[derive(Clone, Debug)]
pub enum ParsedAlgebra {
    Bare(NAlgebra),
    Metric(MetricNAlgebra),
}

impl ParsedAlgebra {
    pub fn algebra(&self) -> &NAlgebra {
        match self {
            ParsedAlgebra::Bare(a) => a,
            ParsedAlgebra::Metric(m) => &m.algebra,
        }
    }

    pub fn metric(&self) -> Option<&MetricNAlgebra> {
        match self {
            ParsedAlgebra::Bare(_) => None,
            ParsedAlgebra::Metric(m) => Some(m),
        }
    }

    pub fn into_metric(self) -> Result<MetricNAlgebra> {
        match self {
            ParsedAlgebra::Bare(_) => Err(Error::Parse(
                "the file has no \"metric\" field, but this operation needs one".to_string(),
            )),
            ParsedAlgebra::Metric(m) => Ok(m),
        }
    }
}

fn parse_rational(text: &str, at: &str) -> Result<Rational> {
    text.parse()
        .map_err(|_| Error::Parse(format!("{at}: invalid rational literal {text:?}")))
}

/// Parses and validates an algebra file.
pub fn parse_algebra_str(text: &str) -> Result<ParsedAlgebra> {
    let file: FileAlgebra = serde_json::from_str(text)
        .map_err(|e| Error::Parse(format!("invalid algebra file: {e}")))?;
    if file.arity < 2 {
        return Err(Error::Parse(format!(
            "arity: must be at least 2, got {}",
            file.arity
        )));
    }
    let dim = file.dim;
    let mut seen: std::collections::BTreeSet<Vec<usize>> = std::collections::BTreeSet::new();
    let mut entries: Vec<(Vec<usize>, Vec<Rational>)> = Vec::new();
    for (i, bracket) in file.brackets.iter().enumerate() {
        let at = format!("brackets[{i}]");
        if bracket.on.len() != file.arity {
            return Err(Error::Parse(format!(
                "{at}.on: expected {} indices, got {}",
                file.arity,
                bracket.on.len()
            )));
        }
        for w in bracket.on.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::Parse(format!(
                    "{at}.on: indices must be strictly increasing, got {:?}",
                    bracket.on
                )));
            }
        }
        for &idx in &bracket.on {
            if idx == 0 || idx > dim {
                return Err(Error::Parse(format!(
                    "{at}.on: index {idx} out of range 1..={dim}"
                )));
            }
        }
        if !seen.insert(bracket.on.clone()) {
            return Err(Error::Parse(format!(
                "{at}.on: duplicate tuple {:?}",
                bracket.on
            )));
        }
        let mut value = vec![Rational::zero(); dim];
        for (j, term) in bracket.result.iter().enumerate() {
            let term_at = format!("{at}.result[{j}]");
            if term.basis == 0 || term.basis > dim {
                return Err(Error::Parse(format!(
                    "{term_at}.basis: index {} out of range 1..={dim}",
                    term.basis
                )));
            }
            let coeff = parse_rational(&term.coeff, &format!("{term_at}.coeff"))?;
            value[term.basis - 1] += coeff;
        }
        let on0: Vec<usize> = bracket.on.iter().map(|&i| i - 1).collect();
        entries.push((on0, value));
    }
    let algebra = NAlgebra::from_entries(file.arity, dim, entries)?;

    match file.metric {
        None => Ok(ParsedAlgebra::Bare(algebra)),
        Some(rows) => {
            if rows.len() != dim {
                return Err(Error::Parse(format!(
                    "metric: expected {dim} rows, got {}",
                    rows.len()
                )));
            }
            let mut gram = Matrix::zeros(dim, dim);
            for (i, row) in rows.iter().enumerate() {
                if row.len() != dim {
                    return Err(Error::Parse(format!(
                        "metric[{i}]: expected {dim} entries, got {}",
                        row.len()
                    )));
                }
                for (j, cell) in row.iter().enumerate() {
                    gram[(i, j)] = parse_rational(cell, &format!("metric[{i}][{j}]"))?;
                }
            }
            if !gram.is_symmetric() {
                return Err(Error::Parse("metric: matrix is not symmetric".to_string()));
            }
            let form = BilinearForm::new(gram)?;
            Ok(ParsedAlgebra::Metric(MetricNAlgebra::new(algebra, form)?))
        }
    }
}

fn file_of(algebra: &NAlgebra, form: Option<&BilinearForm>) -> FileAlgebra {
    let brackets = algebra
        .table()
        .iter()
        .map(|(key, value)| FileBracket {
            on: key.indices().iter().map(|&i| i + 1).collect(),
            result: value
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| FileTerm {
                    basis: i + 1,
                    coeff: c.to_string(),
                })
                .collect(),
        })
        .collect();
    let metric = form.map(|f| {
        (0..f.dim())
            .map(|i| f.gram().row(i).iter().map(Rational::to_string).collect())
            .collect()
    });
    FileAlgebra {
        arity: algebra.arity(),
        dim: algebra.dim(),
        brackets,
        metric,
    }
}

/// Serializes a bare algebra; deterministic bytes for equal inputs.
pub fn emit_algebra(algebra: &NAlgebra) -> String {
    let mut out = serde_json::to_string_pretty(&file_of(algebra, None)).expect("serializable");
    out.push('\n');
    out
}

/// Serializes a metric algebra; deterministic bytes for equal inputs.
pub fn emit_metric_algebra(malg: &MetricNAlgebra) -> String {
    let mut out = serde_json::to_string_pretty(&file_of(&malg.algebra, Some(&malg.form)))
        .expect("serializable");
    out.push('\n');
    out
}

/// Serializable view of a metric algebra with the stable field order, for
/// embedding into larger JSON payloads.
pub(crate) fn file_struct_for_metric(malg: &MetricNAlgebra) -> FileAlgebra {
    file_of(&malg.algebra, Some(&malg.form))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{simple, SignVector};

    #[test]
    fn minimal_file_parses_to_the_empty_algebra() {
        let parsed = parse_algebra_str(r#"{"arity":3,"dim":0,"brackets":[]}"#).unwrap();
        assert_eq!(parsed.algebra().dim(), 0);
        assert!(parsed.algebra().is_abelian());
        assert!(parsed.metric().is_none());
    }

    #[test]
    fn constructor_round_trip() {
        let s3 = simple(3, &SignVector::all_plus(3), &Rational::one()).unwrap();
        let text = emit_metric_algebra(&s3);
        let parsed = parse_algebra_str(&text).unwrap().into_metric().unwrap();
        assert_eq!(parsed.algebra, s3.algebra);
        assert_eq!(parsed.form, s3.form);
        // Emission is idempotent byte-for-byte.
        assert_eq!(emit_metric_algebra(&parsed), text);
    }

    #[test]
    fn non_canonical_tuples_are_rejected() {
        let text = r#"{"arity":3,"dim":4,"brackets":[
            {"on":[2,1,3],"result":[{"basis":4,"coeff":"1"}]}
        ]}"#;
        let err = parse_algebra_str(text).unwrap_err();
        assert!(err.to_string().contains("strictly increasing"), "{err}");
    }

    #[test]
    fn duplicate_tuples_are_rejected() {
        let text = r#"{"arity":2,"dim":2,"brackets":[
            {"on":[1,2],"result":[{"basis":1,"coeff":"1"}]},
            {"on":[1,2],"result":[{"basis":2,"coeff":"1"}]}
        ]}"#;
        let err = parse_algebra_str(text).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn malformed_rationals_and_asymmetric_metrics_are_rejected() {
        let bad_rational = r#"{"arity":2,"dim":2,"brackets":[
            {"on":[1,2],"result":[{"basis":1,"coeff":"1/-2"}]}
        ]}"#;
        assert!(parse_algebra_str(bad_rational).is_err());
        let asymmetric = r#"{"arity":2,"dim":2,"brackets":[],
            "metric":[["0","1"],["2","0"]]}"#;
        let err = parse_algebra_str(asymmetric).unwrap_err();
        assert!(err.to_string().contains("symmetric"), "{err}");
    }

    #[test]
    fn out_of_range_indices_are_rejected() {
        let text = r#"{"arity":2,"dim":2,"brackets":[
            {"on":[1,3],"result":[{"basis":1,"coeff":"1"}]}
        ]}"#;
        assert!(parse_algebra_str(text).is_err());
        let bad_basis = r#"{"arity":2,"dim":2,"brackets":[
            {"on":[1,2],"result":[{"basis":5,"coeff":"1"}]}
        ]}"#;
        assert!(parse_algebra_str(bad_basis).is_err());
    }

    #[test]
    fn rationals_are_normalized_on_parse() {
        let text = r#"{"arity":2,"dim":2,"brackets":[
            {"on":[1,2],"result":[{"basis":1,"coeff":"2/4"},{"basis":1,"coeff":"1/2"}]}
        ]}"#;
        let parsed = parse_algebra_str(text).unwrap();
        let (_, c) = parsed.algebra().basis_bracket(&[0, 1]).unwrap();
        assert_eq!(c[0], Rational::one());
    }
}

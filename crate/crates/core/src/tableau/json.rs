//! Tableau file format.
//!
//! ```json
//! {"name": "rk2", "stages": 2, "scalar": "rational",
//!  "A": [["0", "0"], ["1", "0"]], "b": ["1/2", "1/2"], "c": ["0", "1"]}
//! ```
//!
//! Exact kinds store each scalar as a string in the `p/q+r/t*sqrt5` format;
//! the float kind stores JSON numbers. Unknown fields are rejected.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::{ExactTableau, FloatTableau, Tableau, TableauError};
use crate::exactnum::{ExactError, QSqrt5};
use crate::scalar::ScalarKind;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TableauDoc {
    name: String,
    stages: usize,
    scalar: ScalarKind,
    #[serde(rename = "A")]
    a: Vec<Vec<Value>>,
    b: Vec<Value>,
    c: Vec<Value>,
}

#[derive(Serialize)]
struct TableauOut<'a, T: Serialize> {
    name: &'a str,
    stages: usize,
    scalar: ScalarKind,
    #[serde(rename = "A")]
    a: Vec<Vec<T>>,
    b: Vec<T>,
    c: Vec<T>,
}

/// A parsed tableau of either exact or float kind.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyTableau {
    Exact(ExactTableau),
    Float(FloatTableau),
}

impl AnyTableau {
    pub fn name(&self) -> &str {
        match self {
            AnyTableau::Exact(t) => t.name(),
            AnyTableau::Float(t) => t.name(),
        }
    }

    pub fn kind(&self) -> ScalarKind {
        match self {
            AnyTableau::Exact(t) => t.kind(),
            AnyTableau::Float(t) => t.kind(),
        }
    }

    pub fn stages(&self) -> usize {
        match self {
            AnyTableau::Exact(t) => t.stages(),
            AnyTableau::Float(t) => t.stages(),
        }
    }

    pub fn to_float(&self) -> Result<FloatTableau, ExactError> {
        match self {
            AnyTableau::Exact(t) => t.to_float(),
            AnyTableau::Float(t) => Ok(t.clone()),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            AnyTableau::Exact(t) => t.to_json(),
            AnyTableau::Float(t) => t.to_json(),
        }
    }
}

impl From<ExactTableau> for AnyTableau {
    fn from(t: ExactTableau) -> Self {
        AnyTableau::Exact(t)
    }
}

impl From<FloatTableau> for AnyTableau {
    fn from(t: FloatTableau) -> Self {
        AnyTableau::Float(t)
    }
}

fn exact_scalar(v: &Value, field: &str, kind: ScalarKind) -> Result<QSqrt5, TableauError> {
    let text = v
        .as_str()
        .ok_or_else(|| TableauError::Schema(format!("{field}: exact scalars must be strings")))?;
    let x: QSqrt5 = text.parse().map_err(|source| TableauError::ScalarParse {
        field: field.to_string(),
        source,
    })?;
    if kind == ScalarKind::Rational && !x.is_rational() {
        return Err(TableauError::ScalarParse {
            field: field.to_string(),
            source: ExactError::Parse {
                input: text.to_string(),
                reason: "sqrt5 component in a rational tableau".into(),
            },
        });
    }
    Ok(x)
}

fn float_scalar(v: &Value, field: &str) -> Result<f64, TableauError> {
    v.as_f64()
        .ok_or_else(|| TableauError::Schema(format!("{field}: float scalars must be JSON numbers")))
}

type Parts<S> = (Vec<Vec<S>>, Vec<S>, Vec<S>);

fn convert<S>(doc: &TableauDoc, f: impl Fn(&Value, &str) -> Result<S, TableauError>) -> Result<Parts<S>, TableauError> {
    let a = doc
        .a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, v)| f(v, &format!("A[{i}][{j}]")))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    let vec = |name: &str, vals: &[Value]| {
        vals.iter()
            .enumerate()
            .map(|(i, v)| f(v, &format!("{name}[{i}]")))
            .collect::<Result<Vec<_>, _>>()
    };
    Ok((a, vec("b", &doc.b)?, vec("c", &doc.c)?))
}

/// Parses a tableau document, checking the declared stage count against
/// every dimension.
pub fn parse_tableau(text: &str) -> Result<AnyTableau, TableauError> {
    let doc: TableauDoc = serde_json::from_str(text).map_err(|e| TableauError::Schema(e.to_string()))?;
    let s = doc.stages;
    if doc.b.len() != s || doc.c.len() != s || doc.a.len() != s || doc.a.iter().any(|r| r.len() != s) {
        return Err(TableauError::Schema(format!(
            "stages = {s} but |A| = {}x{}, |b| = {}, |c| = {}",
            doc.a.len(),
            doc.a.first().map_or(0, Vec::len),
            doc.b.len(),
            doc.c.len()
        )));
    }
    match doc.scalar {
        ScalarKind::Float => {
            let (a, b, c) = convert(&doc, float_scalar)?;
            Ok(AnyTableau::Float(Tableau::new(
                doc.name.clone(),
                ScalarKind::Float,
                a,
                b,
                c,
            )?))
        }
        kind => {
            let (a, b, c) = convert(&doc, |v, f| exact_scalar(v, f, kind))?;
            Ok(AnyTableau::Exact(Tableau::new(doc.name.clone(), kind, a, b, c)?))
        }
    }
}

impl ExactTableau {
    pub fn to_json(&self) -> String {
        let s = |x: &QSqrt5| x.to_string();
        let out = TableauOut {
            name: self.name(),
            stages: self.stages(),
            scalar: self.kind(),
            a: self.a().to_rows().iter().map(|r| r.iter().map(s).collect()).collect(),
            b: self.b().iter().map(s).collect(),
            c: self.c().iter().map(s).collect(),
        };
        serde_json::to_string_pretty(&out).expect("tableau serialization") + "\n"
    }
}

impl FloatTableau {
    pub fn to_json(&self) -> String {
        let out = TableauOut {
            name: self.name(),
            stages: self.stages(),
            scalar: ScalarKind::Float,
            a: self.a().to_rows(),
            b: self.b().to_vec(),
            c: self.c().to_vec(),
        };
        serde_json::to_string_pretty(&out).expect("tableau serialization") + "\n"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explicit_euler_document() {
        let doc = r#"{"name": "euler", "stages": 1, "scalar": "rational",
                      "A": [["0"]], "b": ["1"], "c": ["0"]}"#;
        let t = parse_tableau(doc).unwrap();
        assert_eq!(t.stages(), 1);
        assert_eq!(t.kind(), ScalarKind::Rational);
    }

    #[test]
    fn stage_mismatch_is_schema_error() {
        let doc = r#"{"name": "x", "stages": 3, "scalar": "rational",
                      "A": [["0","0","0"],["0","0","0"],["0","0","0"]], "b": ["1/2","1/2"], "c": ["0","0","0"]}"#;
        assert!(matches!(parse_tableau(doc), Err(TableauError::Schema(_))));
    }

    #[test]
    fn quadext_entry() {
        let doc = r#"{"name": "q", "stages": 1, "scalar": "quadext5",
                      "A": [["1/4+-1/12*sqrt5"]], "b": ["1"], "c": ["1/4+-1/12*sqrt5"]}"#;
        let AnyTableau::Exact(t) = parse_tableau(doc).unwrap() else {
            panic!("expected exact tableau")
        };
        assert_eq!(t.a_ij(0, 0), &QSqrt5::with_sqrt5(1, 4, -1, 12));
    }

    #[test]
    fn rejects_bad_input() {
        let unknown =
            r#"{"name": "x", "stages": 1, "scalar": "rational", "A": [["0"]], "b": ["1"], "c": ["0"], "order": 1}"#;
        assert!(matches!(parse_tableau(unknown), Err(TableauError::Schema(_))));
        let missing = r#"{"name": "x", "stages": 1, "scalar": "rational", "A": [["0"]], "b": ["1"]}"#;
        assert!(matches!(parse_tableau(missing), Err(TableauError::Schema(_))));
        let malformed =
            r#"{"name": "x", "stages": 1, "scalar": "quadext5", "A": [["1/2+*sqrt5"]], "b": ["1"], "c": ["0"]}"#;
        assert!(matches!(
            parse_tableau(malformed),
            Err(TableauError::ScalarParse { .. })
        ));
        let surd_in_rational =
            r#"{"name": "x", "stages": 1, "scalar": "rational", "A": [["1*sqrt5"]], "b": ["1"], "c": ["0"]}"#;
        assert!(matches!(
            parse_tableau(surd_in_rational),
            Err(TableauError::ScalarParse { .. })
        ));
        let number_in_exact = r#"{"name": "x", "stages": 1, "scalar": "rational", "A": [[0]], "b": ["1"], "c": ["0"]}"#;
        assert!(matches!(parse_tableau(number_in_exact), Err(TableauError::Schema(_))));
    }

    #[test]
    fn float_document() {
        let doc = r#"{"name": "f", "stages": 2, "scalar": "float",
                      "A": [[0, 0], [1.0, 0]], "b": [0.5, 0.5], "c": [0, 1]}"#;
        let t = parse_tableau(doc).unwrap();
        assert_eq!(t.kind(), ScalarKind::Float);
        assert_eq!(parse_tableau(&t.to_json()).unwrap(), t);
    }

    #[test]
    fn catalog_round_trips() {
        for entry in super::super::catalog() {
            let any = AnyTableau::Exact(entry.tableau.clone());
            assert_eq!(parse_tableau(&any.to_json()).unwrap(), any, "{}", entry.key);
        }
    }
}

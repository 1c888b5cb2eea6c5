//! Group specifications: the JSON input format and its conversion to
//! generator matrices.

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::cyclotomic::{Cyclotomic, CyclotomicError};
use crate::filtration::ProfileSpec;
use crate::io::builtin::{builtin, BuiltinError};
use crate::io::expr::{parse_expr, ParseError};
use crate::matrix::CycMatrix;

/// How a group is given: explicit generators, a lens-space weight vector or
/// the name of a built-in.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum GroupSpec {
    Explicit {
        n: usize,
        cyclotomic_order: u64,
        /// One matrix per generator, row-major, entries in the entry grammar.
        generators: Vec<Vec<Vec<String>>>,
    },
    /// `ℤ/m` acting by `diag(ζ_m^{w_1}, …, ζ_m^{w_n})`.
    Lens { m: u64, weights: Vec<i64> },
    Builtin { name: String },
}

/// A parsed input file: a group spec plus an optional filtration profile.
#[derive(Debug, Clone, PartialEq)]
pub struct InputFile {
    pub spec: GroupSpec,
    pub profile: Option<ProfileSpec>,
}

#[derive(Debug, Error)]
pub enum SpecError {
    #[error("line {line}, column {column}: {message}")]
    Json {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("generator {generator}, entry ({row}, {col}): {source}")]
    Entry {
        generator: usize,
        row: usize,
        col: usize,
        source: ParseError,
    },
    #[error("generator {generator} is not {n}x{n}")]
    Shape { generator: usize, n: usize },
    #[error("invalid spec: {0}")]
    Invalid(String),
    #[error(transparent)]
    Builtin(#[from] BuiltinError),
    #[error(transparent)]
    Cyclotomic(#[from] CyclotomicError),
}

impl From<serde_json::Error> for SpecError {
    fn from(e: serde_json::Error) -> Self {
        SpecError::Json {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        }
    }
}

/// Parses the JSON text of an input file.
pub fn parse_spec(text: &str) -> Result<InputFile, SpecError> {
    let mut value: Value = serde_json::from_str(text)?;
    let profile = match value.as_object_mut().and_then(|o| o.remove("profile")) {
        Some(p) => Some(serde_json::from_value(p).map_err(|e| SpecError::Invalid(format!("profile: {e}")))?),
        None => None,
    };
    let spec: GroupSpec =
        serde_json::from_value(value).map_err(|e| SpecError::Invalid(e.to_string()))?;
    // Surface entry errors at parse time rather than at closure time.
    spec.generators()?;
    Ok(InputFile { spec, profile })
}

impl GroupSpec {
    /// Resolves built-ins into their explicit form.
    pub fn resolve(&self) -> Result<GroupSpec, SpecError> {
        match self {
            GroupSpec::Builtin { name } => Ok(builtin(name)?),
            other => Ok(other.clone()),
        }
    }

    /// The generator matrices this spec describes.
    pub fn generators(&self) -> Result<Vec<CycMatrix>, SpecError> {
        match self {
            GroupSpec::Explicit {
                n,
                cyclotomic_order,
                generators,
            } => {
                if *cyclotomic_order == 0 {
                    return Err(SpecError::Invalid("cyclotomic_order must be positive".into()));
                }
                if generators.is_empty() {
                    return Err(SpecError::Invalid("no generators".into()));
                }
                generators
                    .iter()
                    .enumerate()
                    .map(|(gi, rows)| {
                        if rows.len() != *n || rows.iter().any(|r| r.len() != *n) {
                            return Err(SpecError::Shape { generator: gi, n: *n });
                        }
                        let parsed = rows
                            .iter()
                            .enumerate()
                            .map(|(ri, row)| {
                                row.iter()
                                    .enumerate()
                                    .map(|(ci, text)| {
                                        parse_expr(text, *cyclotomic_order).map_err(|source| {
                                            SpecError::Entry {
                                                generator: gi,
                                                row: ri,
                                                col: ci,
                                                source,
                                            }
                                        })
                                    })
                                    .collect::<Result<Vec<_>, _>>()
                            })
                            .collect::<Result<Vec<_>, _>>()?;
                        Ok(CycMatrix::from_rows(*cyclotomic_order, parsed)?)
                    })
                    .collect()
            }
            GroupSpec::Lens { m, weights } => {
                if *m == 0 || weights.is_empty() {
                    return Err(SpecError::Invalid(
                        "lens spec needs m >= 1 and at least one weight".into(),
                    ));
                }
                let diag: Vec<Cyclotomic> =
                    weights.iter().map(|&w| Cyclotomic::root(*m, w)).collect();
                Ok(vec![CycMatrix::diagonal(*m, &diag)?])
            }
            GroupSpec::Builtin { .. } => self.resolve()?.generators(),
        }
    }

    /// Non-fatal remarks about the spec, e.g. lens weights that break the
    /// standing hypotheses.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if let GroupSpec::Lens { m, weights } = self {
            let m = *m as i64;
            for &w in weights {
                if w.gcd(&m) != 1 {
                    out.push(format!(
                        "weight {w} is not coprime to m = {m}; the action is not free off the origin"
                    ));
                }
            }
            let s: i64 = weights.iter().sum();
            if s.rem_euclid(m) != 0 {
                out.push(format!(
                    "weights sum to {s}, which is not divisible by m = {m}; the group is not in SL"
                ));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lens_spec_gives_diagonal_generator() {
        let f = parse_spec(r#"{"type":"lens","m":7,"weights":[1,2,4]}"#).unwrap();
        let g = f.spec.generators().unwrap();
        let expected = CycMatrix::diagonal(
            7,
            &[Cyclotomic::root(7, 1), Cyclotomic::root(7, 2), Cyclotomic::root(7, 4)],
        )
        .unwrap();
        assert_eq!(g, vec![expected]);
        assert!(f.spec.warnings().is_empty());
    }

    #[test]
    fn lens_warnings() {
        let s = GroupSpec::Lens { m: 6, weights: vec![2, 1] };
        assert_eq!(s.warnings().len(), 2);
    }

    #[test]
    fn explicit_entry_errors_carry_location() {
        let text = r#"{"type":"explicit","n":1,"cyclotomic_order":4,"generators":[[["z^^2"]]]}"#;
        match parse_spec(text) {
            Err(SpecError::Entry { generator: 0, row: 0, col: 0, source }) => {
                assert_eq!(source.position, 2)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn json_errors_carry_line_and_column() {
        match parse_spec("{\n  \"type\": \"lens\",\n  \"m\": }") {
            Err(SpecError::Json { line: 3, .. }) => {}
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            parse_spec(r#"{"type":"lens","m":3,"weights":[1,2],"extra":1}"#),
            Err(SpecError::Invalid(_))
        ));
    }

    #[test]
    fn shape_is_checked() {
        let text = r#"{"type":"explicit","n":2,"cyclotomic_order":2,"generators":[[["z","0"]]]}"#;
        assert!(matches!(parse_spec(text), Err(SpecError::Shape { .. })));
    }
}

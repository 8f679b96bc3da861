//! JSON serialization: canonical on emit, liberal on accept. Indices in the
//! file are 1-based to match the e_1..e_n naming.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{Error, Result};
use crate::scalar::{parse_scalar, Scalar};

#[derive(Serialize, Deserialize)]
struct ProductRecord {
    left: usize,
    right: usize,
    coeffs: BTreeMap<String, String>,
}

#[derive(Serialize, Deserialize)]
struct AlgebraFile {
    dim: usize,
    labels: Vec<String>,
    products: Vec<ProductRecord>,
    params: BTreeMap<String, Option<String>>,
}

/// Canonical emit: products sorted by (left, right), scalars in lowest
/// terms, zero coefficients omitted.
pub fn serialize(a: &Algebra) -> String {
    let products: Vec<ProductRecord> = a
        .products()
        .iter()
        .map(|((i, j), v)| ProductRecord {
            left: i + 1,
            right: j + 1,
            coeffs: v
                .iter()
                .enumerate()
                .filter(|(_, s)| !s.is_zero())
                .map(|(k, s)| ((k + 1).to_string(), s.to_string()))
                .collect(),
        })
        .collect();
    let file = AlgebraFile {
        dim: a.dim(),
        labels: a.labels().to_vec(),
        products,
        params: a
            .params()
            .iter()
            .map(|(k, v)| (k.clone(), v.as_ref().map(|r| Scalar::Rat(r.clone()).to_string())))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&file).expect("serialization cannot fail");
    text.push('\n');
    text
}

pub fn parse(text: &str) -> Result<Algebra> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        col: e.column(),
        msg: e.to_string(),
    })?;
    if file.labels.len() != file.dim {
        return Err(Error::DimensionMismatch {
            expected: file.dim,
            got: file.labels.len(),
        });
    }
    let mut a = Algebra::with_labels(file.dim, file.labels);
    for p in &file.products {
        if p.left == 0 || p.left > file.dim || p.right == 0 || p.right > file.dim {
            return Err(Error::DimensionMismatch {
                expected: file.dim,
                got: p.left.max(p.right),
            });
        }
        let mut terms: Vec<(usize, Scalar)> = Vec::new();
        for (k, s) in &p.coeffs {
            let k: usize = k.parse().map_err(|_| Error::Parse {
                line: 1,
                col: 1,
                msg: format!("non-numeric coefficient index {k:?}"),
            })?;
            if k == 0 || k > file.dim {
                return Err(Error::DimensionMismatch {
                    expected: file.dim,
                    got: k,
                });
            }
            terms.push((k, parse_scalar(s)?));
        }
        a.put(p.left, p.right, &terms);
    }
    for (name, v) in &file.params {
        let bound = match v {
            None => None,
            Some(text) => {
                let s = parse_scalar(text)?;
                match s.as_rational() {
                    Some(r) => Some(r.clone()),
                    None => {
                        return Err(Error::Parse {
                            line: 1,
                            col: 1,
                            msg: format!("parameter {name:?} must be rational, got {text:?}"),
                        })
                    }
                }
            }
        };
        a.set_param(name, bound);
    }
    Ok(a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, FamilyId};
    use crate::scalar::Rational;

    #[test]
    fn round_trip_is_entry_exact() {
        let a = catalog::make(
            FamilyId::M2,
            7,
            &BTreeMap::from([("lam".to_string(), Rational::new(1.into(), 2.into()))]),
        )
        .unwrap();
        let text = serialize(&a);
        let b = parse(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(serialize(&b), text);
    }

    #[test]
    fn m4_file_has_exactly_four_product_records() {
        let a = catalog::make(FamilyId::M4, 6, &BTreeMap::new()).unwrap();
        let text = serialize(&a);
        assert_eq!(text.matches("\"left\"").count(), 4);
    }

    #[test]
    fn out_of_range_index_is_a_dimension_mismatch() {
        let text = r#"{"dim":6,"labels":["e1","e2","e3","e4","e5","e6"],
            "products":[{"left":1,"right":1,"coeffs":{"7":"1"}}],"params":{}}"#;
        assert!(matches!(
            parse(text),
            Err(Error::DimensionMismatch { expected: 6, got: 7 })
        ));
    }

    #[test]
    fn malformed_json_reports_position() {
        match parse("{\"dim\": 3,\n  broken") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn liberal_accept_normalizes() {
        let text = r#"{"dim":2,"labels":["e1","e2"],
            "products":[{"left":1,"right":1,"coeffs":{"2":"2/4"}}],"params":{}}"#;
        let a = parse(text).unwrap();
        assert_eq!(
            a.basis_product(0, 0).unwrap()[1],
            Scalar::from_frac(1, 2)
        );
        assert!(serialize(&a).contains("1/2"));
    }

    #[test]
    fn symbolic_entries_survive() {
        let a = catalog::make(FamilyId::M2, 7, &BTreeMap::new()).unwrap();
        let b = parse(&serialize(&a)).unwrap();
        assert_eq!(a, b);
    }
}

//! Basis-invariant profiles and one-sided non-isomorphism certificates.

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::derivations::derivation_space;
use crate::error::Result;
use crate::series::{
    derived_series, generator_count, lower_central_series, right_annihilator, series_dims,
};

/// Field order is fixed so the first differing field is stable.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InvariantProfile {
    pub dim: usize,
    pub lcs_dims: Vec<usize>,
    pub derived_dims: Vec<usize>,
    pub ann_r_dim: usize,
    pub der_dim: usize,
    pub generators: usize,
    pub lie_flag: bool,
}

pub fn profile(a: &Algebra) -> Result<InvariantProfile> {
    a.require_rational()?;
    Ok(InvariantProfile {
        dim: a.dim(),
        lcs_dims: series_dims(&lower_central_series(a)?),
        derived_dims: series_dims(&derived_series(a)?),
        ann_r_dim: right_annihilator(a)?.dim(),
        der_dim: derivation_space(a)?.dim,
        generators: generator_count(a)?,
        lie_flag: a.is_lie(),
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Distinction {
    /// Name of the first differing profile field, with both values printed.
    NonIsomorphic(String),
    Inconclusive,
}

/// Profiles are isomorphism invariants, so a difference certifies
/// non-isomorphism; agreement certifies nothing.
pub fn distinguish(a: &Algebra, b: &Algebra) -> Result<Distinction> {
    let pa = profile(a)?;
    let pb = profile(b)?;
    let fields: [(&str, String, String); 7] = [
        ("dim", format!("{}", pa.dim), format!("{}", pb.dim)),
        ("lcs_dims", format!("{:?}", pa.lcs_dims), format!("{:?}", pb.lcs_dims)),
        (
            "derived_dims",
            format!("{:?}", pa.derived_dims),
            format!("{:?}", pb.derived_dims),
        ),
        ("ann_r_dim", format!("{}", pa.ann_r_dim), format!("{}", pb.ann_r_dim)),
        ("der_dim", format!("{}", pa.der_dim), format!("{}", pb.der_dim)),
        ("generators", format!("{}", pa.generators), format!("{}", pb.generators)),
        ("lie_flag", format!("{}", pa.lie_flag), format!("{}", pb.lie_flag)),
    ];
    for (name, va, vb) in fields {
        if va != vb {
            return Ok(Distinction::NonIsomorphic(format!("{name}: {va} vs {vb}")));
        }
    }
    Ok(Distinction::Inconclusive)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, FamilyId};
    use crate::scalar::Rational;
    use std::collections::BTreeMap;

    fn fam(id: FamilyId, n: usize, pairs: &[(&str, i64)]) -> Algebra {
        let params: BTreeMap<String, Rational> = pairs
            .iter()
            .map(|(k, v)| (k.to_string(), Rational::from_integer((*v).into())))
            .collect();
        catalog::make(id, n, &params).unwrap()
    }

    #[test]
    fn m10_profile() {
        let p = profile(&fam(FamilyId::M1, 7, &[("delta", 0)])).unwrap();
        assert_eq!(p.dim, 7);
        assert_eq!(p.lcs_dims, vec![7, 5, 3, 2, 1, 0]);
        assert_eq!(p.ann_r_dim, 6);
        assert_eq!(p.der_dim, 10);
        assert_eq!(p.generators, 2);
        assert!(!p.lie_flag);
    }

    #[test]
    fn abelian_profile() {
        let p = profile(&Algebra::new(3)).unwrap();
        assert_eq!(p.lcs_dims, vec![3, 0]);
        assert_eq!(p.der_dim, 9);
        assert_eq!(p.ann_r_dim, 3);
        assert_eq!(p.generators, 3);
        assert!(p.lie_flag);
    }

    #[test]
    fn der_dim_separates_m10_and_m20() {
        let a = fam(FamilyId::M1, 7, &[("delta", 0)]);
        let b = fam(FamilyId::M2, 7, &[("lam", 0)]);
        match distinguish(&a, &b).unwrap() {
            Distinction::NonIsomorphic(f) => assert!(f.starts_with("der_dim"), "{f}"),
            d => panic!("{d:?}"),
        }
    }

    #[test]
    fn ann_r_separates_m31_and_m4() {
        let a = fam(FamilyId::M31, 6, &[]);
        let b = fam(FamilyId::M4, 6, &[]);
        match distinguish(&a, &b).unwrap() {
            Distinction::NonIsomorphic(f) => {
                assert!(f.starts_with("ann_r_dim"), "{f}");
                assert!(f.contains("2 vs 4"), "{f}");
            }
            d => panic!("{d:?}"),
        }
    }

    #[test]
    fn self_comparison_is_inconclusive() {
        let a = fam(FamilyId::M31, 6, &[]);
        assert_eq!(distinguish(&a, &a).unwrap(), Distinction::Inconclusive);
    }
}

//! Randomized invariants: scalar ring axioms, row-reduction idempotence,
//! bracket bilinearity, basis-change invariance of the structural
//! predicates, and serialization round trips.

use std::collections::BTreeMap;

use proptest::prelude::*;

use leibniz_core::algebra::LinearMap;
use leibniz_core::catalog::{self, FamilyId};
use leibniz_core::invariants::profile;
use leibniz_core::io;
use leibniz_core::matrix::{rref_nullspace, ExactMatrix};
use leibniz_core::scalar::{Rational, Scalar};

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n.into(), d.into()))
}

fn scalar() -> impl Strategy<Value = Scalar> {
    let rat = rational().prop_map(Scalar::Rat);
    let term = (rational(), 0usize..3, 1u32..=2).prop_map(|(c, v, e)| {
        let var = ["a", "b", "c"][v];
        let mut s = Scalar::Rat(c);
        for _ in 0..e {
            s = s.mul(&Scalar::var(var));
        }
        s
    });
    let poly = proptest::collection::vec(term, 1..4)
        .prop_map(|ts| ts.iter().fold(Scalar::zero(), |acc, t| acc.add(t)));
    prop_oneof![rat, poly]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scalar_ring_axioms(x in scalar(), y in scalar(), z in scalar()) {
        prop_assert_eq!(x.add(&y), y.add(&x));
        prop_assert_eq!(x.add(&y).add(&z), x.add(&y.add(&z)));
        prop_assert_eq!(x.mul(&y), y.mul(&x));
        prop_assert_eq!(x.mul(&y.add(&z)), x.mul(&y).add(&x.mul(&z)));
        prop_assert_eq!(x.add(&x.neg()), Scalar::zero());
        prop_assert_eq!(x.mul(&Scalar::one()), x.clone());
        prop_assert_eq!(x.sub(&y), x.add(&y.neg()));
    }

    #[test]
    fn rref_is_idempotent(
        rows in proptest::collection::vec(
            proptest::collection::vec(rational(), 4), 1..5)
    ) {
        let m = ExactMatrix::from_rational_rows(rows);
        let once = rref_nullspace(&m).unwrap();
        let twice = rref_nullspace(&once.rref).unwrap();
        prop_assert_eq!(&once.rref, &twice.rref);
        prop_assert_eq!(once.rank, twice.rank);
        prop_assert_eq!(once.pivot_cols, twice.pivot_cols);
    }

    #[test]
    fn bracket_is_bilinear(
        u in proptest::collection::vec(rational(), 6),
        v in proptest::collection::vec(rational(), 6),
        w in proptest::collection::vec(rational(), 6),
        c in rational(),
    ) {
        let a = catalog::make(
            FamilyId::M1,
            6,
            &BTreeMap::from([("delta".to_string(), Rational::from_integer(1.into()))]),
        ).unwrap();
        let s = |v: &[Rational]| -> Vec<Scalar> {
            v.iter().map(|r| Scalar::Rat(r.clone())).collect()
        };
        let comb: Vec<Scalar> = u.iter().zip(&v)
            .map(|(x, y)| Scalar::Rat(x + &(&c * y)))
            .collect();
        let lhs = a.bracket(&comb, &s(&w)).unwrap();
        let bu = a.bracket(&s(&u), &s(&w)).unwrap();
        let bv = a.bracket(&s(&v), &s(&w)).unwrap();
        for k in 0..6 {
            let rhs = bu[k].add(&bv[k].scale(&c));
            prop_assert_eq!(&lhs[k], &rhs);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(6))]

    #[test]
    fn profile_is_basis_change_invariant(
        entries in proptest::collection::vec(rational(), 36),
    ) {
        let mut rows: Vec<Vec<Rational>> = entries.chunks(6).map(|c| c.to_vec()).collect();
        // force invertibility: unit diagonal over a strictly lower triangle
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, e) in row.iter_mut().enumerate() {
                if j == i {
                    *e = Rational::from_integer(1.into());
                } else if j > i {
                    *e = Rational::from_integer(0.into());
                }
            }
        }
        let p = LinearMap::new(ExactMatrix::from_rational_rows(rows));
        let a = catalog::make(
            FamilyId::M2,
            6,
            &BTreeMap::from([("lam".to_string(), Rational::new(1.into(), 2.into()))]),
        ).unwrap();
        let b = a.apply_basis_change(&p).unwrap();
        prop_assert_eq!(a.verify_leibniz().passed(), b.verify_leibniz().passed());
        prop_assert_eq!(a.is_lie(), b.is_lie());
        prop_assert_eq!(profile(&a).unwrap(), profile(&b).unwrap());
    }

    #[test]
    fn serialization_round_trips(
        fam_ix in 0usize..6,
        seeds in proptest::collection::vec(rational(), 8),
    ) {
        let (id, n) = [
            (FamilyId::M1, 7),
            (FamilyId::M2, 6),
            (FamilyId::M4, 8),
            (FamilyId::R101_1, 7),
            (FamilyId::R2L1_6, 7),
            (FamilyId::R202, 6),
        ][fam_ix];
        let mut params = id.sample_params(n);
        // randomize the continuum parameters (these six families place no
        // domain constraints on them)
        for (i, name) in id.continuum_params(n).into_iter().enumerate() {
            params.insert(name, seeds[i % seeds.len()].clone());
        }
        let a = catalog::make(id, n, &params).unwrap();
        let b = io::parse(&io::serialize(&a)).unwrap();
        prop_assert_eq!(&a, &b);
        prop_assert_eq!(io::serialize(&a), io::serialize(&b));
    }
}

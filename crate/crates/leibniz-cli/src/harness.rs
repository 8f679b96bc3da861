//! The verification harness: named suites of exact checks over the catalog,
//! each reported as one deterministic PASS/FAIL line.

use std::collections::BTreeMap;

use leibniz_core::algebra::{Algebra, LeibnizCheck, LinearMap, Subspace};
use leibniz_core::catalog::{self, FamilyId, ALL_FAMILIES};
use leibniz_core::derivations::{
    derivation_space, diagonal_span_dim, match_derivation_pattern, nil_independent_pair,
    pattern_generators, pattern_parameter_names, verify_nilradical_candidate, CandidateCheck,
    DerivationPattern, PatternMatch,
};
use leibniz_core::extension::{build_generic_extension, ExtensionPattern};
use leibniz_core::gradation::{search_max_length_gradation, verify_gradation, GradationCheck};
use leibniz_core::invariants::{distinguish, profile, Distinction};
use leibniz_core::matrix::ExactMatrix;
use leibniz_core::scalar::{Rational, Scalar};
use leibniz_core::series::{is_nilpotent, is_quasi_filiform, lower_central_series, series_dims};
use leibniz_core::Error;

pub struct Claim {
    pub pass: bool,
    pub text: String,
}

fn claim(list: &mut Vec<Claim>, pass: bool, text: String) {
    list.push(Claim { pass, text });
}

fn check(list: &mut Vec<Claim>, text: &str, result: Result<bool, Error>) {
    match result {
        Ok(true) => claim(list, true, text.to_string()),
        Ok(false) => claim(list, false, text.to_string()),
        Err(e) => claim(list, false, format!("{text} [error: {e}]")),
    }
}

fn q(v: i64) -> Rational {
    Rational::from_integer(v.into())
}

fn sample_dims(id: FamilyId) -> Vec<usize> {
    let (lo, hi) = id.dim_range();
    [6usize, 7, 8]
        .into_iter()
        .filter(|&n| n >= lo && hi.is_none_or(|h| n <= h))
        .collect()
}

fn make_sampled(id: FamilyId, n: usize) -> Result<Algebra, Error> {
    catalog::make(id, n, &id.sample_params(n))
}

pub fn suite_names() -> &'static [&'static str] {
    &[
        "tables",
        "series",
        "derivations",
        "gradations",
        "extensions",
        "profiles",
    ]
}

pub fn run_suite(name: &str) -> Option<Vec<Claim>> {
    match name {
        "tables" => Some(tables()),
        "series" => Some(series()),
        "derivations" => Some(derivations()),
        "gradations" => Some(gradations()),
        "extensions" => Some(extensions()),
        "profiles" => Some(profiles()),
        "all" => {
            let mut out = Vec::new();
            for s in suite_names() {
                out.extend(run_suite(s).unwrap());
            }
            Some(out)
        }
        _ => None,
    }
}

fn tables() -> Vec<Claim> {
    let mut out = Vec::new();
    for id in ALL_FAMILIES {
        for n in sample_dims(id) {
            for branch in id.discrete_branches() {
                let label: String = if branch.is_empty() {
                    format!("{id} at n={n}")
                } else {
                    let b: Vec<String> =
                        branch.iter().map(|(k, v)| format!("{k}={v}")).collect();
                    format!("{id} at n={n} ({})", b.join(","))
                };
                if id == FamilyId::R311 {
                    // the printed table is inconsistent; the harness freezes
                    // the exact failure instead of claiming it passes
                    let r = catalog::make(id, n, &branch);
                    let pass = match r.map(|a| a.verify_leibniz()) {
                        Ok(LeibnizCheck::Witness { i, j, k, .. }) => (i, j, k) == (7, 1, 4),
                        _ => false,
                    };
                    claim(
                        &mut out,
                        pass,
                        format!(
                            "{label}: printed table fails the Leibniz identity exactly at \
                             (x,e1,e4); no completion exists (see extensions suite)"
                        ),
                    );
                    continue;
                }
                let pass = match catalog::make(id, n, &branch) {
                    Ok(a) => a.verify_leibniz().passed(),
                    // branch not applicable at this dimension (e.g. the
                    // M3-orig alpha=1 table exists only at n=6)
                    Err(Error::BadParam { .. }) => continue,
                    Err(_) => false,
                };
                claim(
                    &mut out,
                    pass,
                    format!("{label}: Leibniz identity holds symbolically in all free parameters"),
                );
            }
        }
    }
    // rebase links
    for (id, branches) in [
        (FamilyId::M1, vec![0i64, 1]),
        (FamilyId::M31, vec![-1]),
        (FamilyId::M4, vec![-1]),
    ] {
        for n in sample_dims(id) {
            for d in &branches {
                let mut params = BTreeMap::new();
                if *d >= 0 {
                    params.insert("delta".to_string(), q(*d));
                }
                let pass = catalog::rebase_link(id, n, &params)
                    .and_then(|(orig, map, rebased)| {
                        Ok(orig.apply_basis_change(&map)?.products() == rebased.products())
                    })
                    .unwrap_or(false);
                claim(
                    &mut out,
                    pass,
                    format!("{id} at n={n}: basis change maps the original table onto the working table entry-exactly"),
                );
            }
        }
    }
    out.push(scaling_orbit_claim());
    out
}

/// R101-1 at n=7: rescaling e_1 by 2 lands back in the family with
/// parameters alpha_t/2^(t-2) (3<=t<=6), alpha2/2, alpha7/4.
fn scaling_orbit_claim() -> Claim {
    let run = || -> Result<bool, Error> {
        let id = FamilyId::R101_1;
        let params = id.sample_params(7);
        let a = catalog::make(id, 7, &params)?;
        // e_1 -> 2e_1, e_2 -> e_2, e_i -> 2^(i-2) e_i (3<=i<=6),
        // e_7 -> 4e_7, x -> x
        let scale: [i64; 8] = [2, 1, 2, 4, 8, 16, 4, 1];
        let mut rows = vec![vec![q(0); 8]; 8];
        for (i, s) in scale.iter().enumerate() {
            rows[i][i] = q(*s);
        }
        let p = LinearMap::new(ExactMatrix::from_rational_rows(rows));
        let b = a.apply_basis_change(&p)?;
        let mut scaled = BTreeMap::new();
        for (name, v) in &params {
            let t: u32 = name.trim_start_matches("alpha").parse().unwrap();
            let denom = match t {
                2 => q(2),
                7 => q(4),
                _ => q(1 << (t - 2)),
            };
            scaled.insert(name.clone(), v / denom);
        }
        let c = catalog::make(id, 7, &scaled)?;
        Ok(b.products() == c.products())
    };
    Claim {
        pass: run().unwrap_or(false),
        text: "R101-1 at n=7: the diagonal rescaling e1 -> 2e1 stays in the family with \
               parameters alpha_t/2^(t-2), alpha2/2, alpha7/4"
            .to_string(),
    }
}

fn series() -> Vec<Claim> {
    let mut out = Vec::new();
    let lcs_cases: Vec<(FamilyId, usize, Vec<usize>)> = vec![
        (FamilyId::M1, 7, vec![7, 5, 3, 2, 1, 0]),
        (FamilyId::M31, 6, vec![6, 4, 2, 1, 0]),
        (FamilyId::M4, 7, vec![7, 5, 3, 2, 1, 0]),
    ];
    for (id, n, expect) in lcs_cases {
        let pass = make_sampled(id, n)
            .and_then(|a| Ok(series_dims(&lower_central_series(&a)?)))
            .map(|d| d == expect)
            .unwrap_or(false);
        claim(
            &mut out,
            pass,
            format!("{id} at n={n}: lower central series dimensions are {expect:?}"),
        );
    }
    for id in ALL_FAMILIES.into_iter().filter(|f| f.is_nilradical_family()) {
        for n in sample_dims(id) {
            check(
                &mut out,
                &format!("{id} at n={n}: nilpotent and quasi-filiform"),
                make_sampled(id, n).and_then(|a| Ok(is_nilpotent(&a)? && is_quasi_filiform(&a)?)),
            );
            check(
                &mut out,
                &format!("{id} at n={n}: bracket is not antisymmetric (not a Lie algebra)"),
                make_sampled(id, n).map(|a| !a.is_lie()),
            );
        }
    }
    out
}

fn derivations() -> Vec<Claim> {
    let mut out = Vec::new();
    let dim_cases: Vec<(FamilyId, usize, &[(&str, i64)], usize, DerivationPattern)> = vec![
        (FamilyId::M1, 7, &[("delta", 0)], 10, DerivationPattern::M1Delta),
        (FamilyId::M1, 7, &[("delta", 1)], 9, DerivationPattern::M1Delta),
        (FamilyId::M2, 7, &[("lam", 0)], 11, DerivationPattern::M2Lambda),
        (FamilyId::M2, 7, &[("lam", 1)], 10, DerivationPattern::M2Lambda),
        (FamilyId::M31, 6, &[], 9, DerivationPattern::M31),
    ];
    for (id, n, pairs, expect, pat) in dim_cases {
        let params: BTreeMap<String, Rational> =
            pairs.iter().map(|(k, v)| (k.to_string(), q(*v))).collect();
        let text = format!(
            "{id} at n={n} ({:?}): derivation space has dimension {expect} and equals the \
             closed-form pattern span",
            pairs
        );
        let result = catalog::make(id, n, &params).and_then(|a| {
            let d = derivation_space(&a)?;
            let m = match_derivation_pattern(&a, pat)?;
            Ok(d.dim == expect && matches!(m, PatternMatch::Pass { .. }))
        });
        check(&mut out, &text, result);
    }
    // nil-independence of the two diagonal parameter directions
    for (id, n, pairs, v1, v2) in [
        (FamilyId::M1, 7, vec![("delta", 0)], "a1", "b2"),
        (FamilyId::M2, 7, vec![("lam", 0)], "a1", "b6"),
        (FamilyId::M2, 7, vec![("lam", 1)], "a1", "b6"),
    ] {
        let params: BTreeMap<String, Rational> =
            pairs.iter().map(|(k, v)| (k.to_string(), q(*v))).collect();
        let pat = if id == FamilyId::M1 {
            DerivationPattern::M1Delta
        } else {
            DerivationPattern::M2Lambda
        };
        let text = format!(
            "{id} at n={n} ({pairs:?}): the {v1} and {v2} derivation directions are \
             nil-independent (a 2-dimensional complement is possible)"
        );
        let result = catalog::make(id, n, &params).and_then(|a| {
            let gens = pattern_generators(&a, pat)?;
            let names = pattern_parameter_names(&a, pat)?;
            let i1 = names.iter().position(|x| x == v1).unwrap();
            let i2 = names.iter().position(|x| x == v2).unwrap();
            nil_independent_pair(&gens[i1], &gens[i2])
        });
        check(&mut out, &text, result);
    }
    for (id, n, pairs) in [
        (FamilyId::M1, 7, vec![("delta", 1)]),
        (FamilyId::M31, 6, vec![]),
    ] {
        let params: BTreeMap<String, Rational> =
            pairs.iter().map(|(k, v)| (k.to_string(), q(*v))).collect();
        let text = format!(
            "{id} at n={n}: diagonal part of the derivation space is 1-dimensional and no \
             pair of derivations is nil-independent (complement capped at 1)"
        );
        let result = catalog::make(id, n, &params).and_then(|a| {
            let ds = derivation_space(&a)?;
            if diagonal_span_dim(&ds) != 1 {
                return Ok(false);
            }
            for i in 0..ds.dim {
                for j in i + 1..ds.dim {
                    if nil_independent_pair(&ds.basis[i], &ds.basis[j])? {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        });
        check(&mut out, &text, result);
    }
    // nilradical-candidate certificates for every solvable family
    for id in ALL_FAMILIES.into_iter().filter(|f| !f.is_nilradical_family()) {
        if id == FamilyId::R311 {
            claim(
                &mut out,
                true,
                "R311: excluded from the candidate certificate (its printed table is not a \
                 Leibniz algebra; see tables suite)"
                    .to_string(),
            );
            continue;
        }
        let n = sample_dims(id)[1 % sample_dims(id).len()];
        let s = id.complement_size();
        let text = format!(
            "{id} at n={n}: the e-span is an ideal, nilpotent, acted on by non-nilpotent \
             nil-independent right multiplications, and has at least half the dimension"
        );
        let result = make_sampled(id, n).and_then(|r| {
            let axes: Vec<usize> = (1..=n).collect();
            let nsub = Subspace::from_axes(n + s, &axes);
            let complement: Vec<Vec<Scalar>> =
                (n..n + s).map(|i| r.basis_vector(i)).collect();
            Ok(verify_nilradical_candidate(&r, &nsub, &complement)? == CandidateCheck::Pass)
        });
        check(&mut out, &text, result);
    }
    out
}

fn gradations() -> Vec<Claim> {
    let cases: Vec<(FamilyId, usize, &[(&str, i64)], Vec<i64>)> = vec![
        (FamilyId::M1, 7, &[("delta", 0)], vec![1, 3, 4, 5, 6, 7, 2]),
        (FamilyId::M2, 7, &[("lam", 0)], vec![1, 2, 3, 4, 5, 6, 7]),
        (FamilyId::M2, 7, &[("lam", 1)], vec![1, 2, 3, 4, 5, 6, 7]),
        (FamilyId::M31, 6, &[], vec![1, 3, 4, 5, 6, 2]),
        (FamilyId::M4, 7, &[], vec![1, 2, 3, 4, 5, 6, 7]),
    ];
    let mut out = Vec::new();
    for (id, n, pairs, expect) in cases {
        let params: BTreeMap<String, Rational> =
            pairs.iter().map(|(k, v)| (k.to_string(), q(*v))).collect();
        let text = format!(
            "{id} at n={n} ({pairs:?}): a connected gradation of length {n} exists with \
             weights {expect:?}"
        );
        let result = catalog::make(id, n, &params).and_then(|a| {
            match search_max_length_gradation(&a, None)? {
                Some(g) => Ok(g.weights == expect
                    && verify_gradation(&a, &g.weights)? == GradationCheck::Valid(n)),
                None => Ok(false),
            }
        });
        check(&mut out, &text, result);
    }
    out
}

fn extensions() -> Vec<Claim> {
    let mut out = Vec::new();
    // complement caps
    for (id, n, pairs, pat, cap) in [
        (FamilyId::M1, 7, vec![("delta", 0)], ExtensionPattern::M1Delta, 2usize),
        (FamilyId::M1, 7, vec![("delta", 1)], ExtensionPattern::M1Delta, 1),
        (FamilyId::M2, 7, vec![("lam", 0)], ExtensionPattern::M2Lambda, 2),
        (FamilyId::M31, 6, vec![], ExtensionPattern::M31, 1),
    ] {
        let params: BTreeMap<String, Rational> =
            pairs.iter().map(|(k, v)| (k.to_string(), q(*v))).collect();
        let text = format!("{id} ({pairs:?}): complement size capped at {cap}");
        let result = catalog::make(id, n, &params).map(|a| {
            let ok = build_generic_extension(&a, pat, cap).is_ok();
            let over = matches!(
                build_generic_extension(&a, pat, cap + 1),
                Err(Error::CapExceeded { .. })
            );
            ok && over
        });
        check(&mut out, &text, result);
    }
    // M^{1,1} has no solvable extension: three identities force a1 = 0
    let text = "M1 (delta=1) at n=7: the residuals of (e1,x,e1), (e2,x,e2), (x,e1,e2) force \
                a1 = 0, contradicting the non-nilpotency pin a1 != 0";
    let result = (|| -> Result<bool, Error> {
        let a = catalog::make(
            FamilyId::M1,
            7,
            &BTreeMap::from([("delta".to_string(), q(1))]),
        )?;
        let mut ext = build_generic_extension(&a, ExtensionPattern::M1Delta, 1)?;
        ext.pin_nonzero("a1");
        for t in [("e1", "x", "e1"), ("e2", "x", "e2")] {
            let sys = ext.residual_system(&[t])?;
            let subs = ext.auto_solve_linear(&sys);
            ext = ext.substitute(&subs)?;
        }
        let sys = ext.residual_system(&[("x", "e1", "e2")])?;
        Ok(ext.contradiction(&sys).is_some_and(|c| c.contains("a1")))
    })();
    check(&mut out, text, result);
    // M^{3,1} likewise: its printed extension cannot exist
    let text = "M31 at n=6: closing the residual system over (e1,x,e_i) and (x,e_i,e_j) \
                forces a1 = 0; no solvable extension with this nilradical exists";
    let result = (|| -> Result<bool, Error> {
        let a = catalog::make(FamilyId::M31, 6, &BTreeMap::new())?;
        let mut ext = build_generic_extension(&a, ExtensionPattern::M31, 1)?;
        ext.pin_nonzero("a1");
        let triples = [
            ("e1", "x", "e1"),
            ("e1", "x", "e2"),
            ("e1", "x", "e3"),
            ("e1", "x", "e4"),
            ("x", "e2", "e2"),
            ("x", "e2", "e1"),
            ("x", "e3", "e1"),
            ("x", "e4", "e1"),
            ("x", "e1", "e2"),
        ];
        for _ in 0..6 {
            let sys = ext.residual_system(&triples)?;
            if let Some(c) = ext.contradiction(&sys) {
                return Ok(c.contains("a1"));
            }
            let subs = ext.auto_solve_linear(&sys);
            if subs.is_empty() {
                return Ok(false);
            }
            ext = ext.substitute(&subs)?;
        }
        Ok(false)
    })();
    check(&mut out, text, result);
    out
}

fn profiles() -> Vec<Claim> {
    let mut out = Vec::new();
    let nilrads: Vec<(FamilyId, BTreeMap<String, Rational>)> = vec![
        (FamilyId::M1, BTreeMap::from([("delta".to_string(), q(0))])),
        (FamilyId::M2, BTreeMap::from([("lam".to_string(), q(0))])),
        (FamilyId::M31, BTreeMap::new()),
        (FamilyId::M4, BTreeMap::new()),
    ];
    for i in 0..nilrads.len() {
        for j in i + 1..nilrads.len() {
            let (ida, pa) = &nilrads[i];
            let (idb, pb) = &nilrads[j];
            let text = format!("{ida} vs {idb} at n=6: invariant profiles differ");
            let result = (|| -> Result<bool, Error> {
                let a = catalog::make(*ida, 6, pa)?;
                let b = catalog::make(*idb, 6, pb)?;
                Ok(matches!(distinguish(&a, &b)?, Distinction::NonIsomorphic(_)))
            })();
            check(&mut out, &text, result);
        }
    }
    // solvable families: profiles computed for all, Inconclusive pairs listed
    let solvables: Vec<FamilyId> = ALL_FAMILIES
        .into_iter()
        .filter(|f| !f.is_nilradical_family() && *f != FamilyId::R311)
        .collect();
    let result = (|| -> Result<(usize, Vec<String>), Error> {
        let mut profs = Vec::new();
        for id in &solvables {
            let n = sample_dims(*id)[1 % sample_dims(*id).len()];
            let a = make_sampled(*id, n)?;
            profs.push((format!("{id}(n={n})"), profile(&a)?));
        }
        let mut inconclusive = Vec::new();
        for i in 0..profs.len() {
            for j in i + 1..profs.len() {
                if profs[i].1 == profs[j].1 {
                    inconclusive.push(format!("{} ~ {}", profs[i].0, profs[j].0));
                }
            }
        }
        Ok((profs.len(), inconclusive))
    })();
    match result {
        Ok((count, inconclusive)) => {
            claim(
                &mut out,
                true,
                format!("profiles computed for all {count} solvable families without error"),
            );
            for pair in inconclusive {
                claim(
                    &mut out,
                    true,
                    format!("inconclusive pair (profiles agree, no isomorphism claimed): {pair}"),
                );
            }
        }
        Err(e) => claim(&mut out, false, format!("solvable-family profiles [error: {e}]")),
    }
    out
}

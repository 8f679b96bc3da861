//! Constructors for the multiplication tables of the quasi-filiform non-Lie
//! nilradicals of maximum length and their solvable extensions, with
//! parameter slots, dimension validity ranges, and the rebasing links
//! between the two basis conventions of `M^{1,delta}` and `M^{3,1}`.
//!
//! Solvable families are built on `n` nilradical basis vectors `e_1..e_n`
//! plus `s` complement vectors (`x` at index `n+1`, `x_2` at `n+2`).
//! Any product term whose target index falls outside `1..=dim` is dropped;
//! omitted products are zero.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::algebra::{Algebra, LinearMap};
use crate::error::{Error, Result};
use crate::matrix::ExactMatrix;
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FamilyId {
    /// `M^{1,delta}` in its original basis convention.
    M1Orig,
    /// `M^{1,delta}` in the rebased convention used by the solvable families.
    M1,
    /// `M^{2,lam}`.
    M2,
    /// `M^{3,alpha}` in its original basis convention.
    M3Orig,
    /// `M^{3,1}` rebased, defined at n = 6 only.
    M31,
    /// `M^4`.
    M4,
    /// `R(M^4,1)(a_2..a_{n-1})`.
    R41,
    R301_1,
    R301_2,
    R301_3,
    R301_4,
    R302,
    R101_1,
    R101_2,
    R101_3,
    R101_4,
    R101_5,
    R101_6,
    R101_7,
    R2L1_1,
    R2L1_2,
    R2L1_3,
    R2L1_4,
    R2L1_5,
    R2L1_6,
    R2L1_7,
    R2L1_8,
    R2L1_9,
    R2L1_10,
    R2L1_11,
    R2L1_12,
    R311,
    R102,
    R202,
    R2M12,
}

use FamilyId::*;

pub const ALL_FAMILIES: [FamilyId; 35] = [
    M1Orig, M1, M2, M3Orig, M31, M4, R41, R301_1, R301_2, R301_3, R301_4, R302, R101_1, R101_2,
    R101_3, R101_4, R101_5, R101_6, R101_7, R2L1_1, R2L1_2, R2L1_3, R2L1_4, R2L1_5, R2L1_6,
    R2L1_7, R2L1_8, R2L1_9, R2L1_10, R2L1_11, R2L1_12, R311, R102, R202, R2M12,
];

impl FamilyId {
    /// Complement size `s` (0 for the nilpotent families).
    pub fn complement_size(self) -> usize {
        match self {
            M1Orig | M1 | M2 | M3Orig | M31 | M4 => 0,
            R302 | R102 | R202 | R2M12 => 2,
            _ => 1,
        }
    }

    pub fn is_nilradical_family(self) -> bool {
        self.complement_size() == 0
    }

    /// Valid nilradical dimensions `n` (inclusive bounds; `None` = unbounded).
    pub fn dim_range(self) -> (usize, Option<usize>) {
        match self {
            M31 | R311 => (6, Some(6)),
            _ => (6, None),
        }
    }

    /// The nilradical family underlying a solvable family, together with the
    /// parameter bindings it fixes (e.g. `lam = -1`).
    pub fn nilradical(self) -> Option<(FamilyId, BTreeMap<String, Rational>)> {
        let fixed = |pairs: &[(&str, i64)]| {
            pairs
                .iter()
                .map(|(k, v)| (k.to_string(), Rational::from_integer((*v).into())))
                .collect::<BTreeMap<_, _>>()
        };
        match self {
            M1Orig | M1 | M2 | M3Orig | M31 | M4 => None,
            R41 => Some((M4, fixed(&[]))),
            R301_1 | R301_2 | R301_3 | R301_4 | R302 => Some((M3Orig, fixed(&[("alpha", 0)]))),
            R101_1 | R101_2 | R101_3 | R101_4 | R101_5 | R101_6 | R101_7 | R102 => {
                Some((M1, fixed(&[("delta", 0)])))
            }
            R2L1_1 | R2L1_5 => Some((M2, fixed(&[]))),
            R2L1_2 | R2L1_3 | R2L1_4 | R2L1_6 | R2M12 => Some((M2, fixed(&[("lam", -1)]))),
            R2L1_7 | R2L1_8 | R2L1_9 | R2L1_10 | R2L1_11 | R2L1_12 | R202 => {
                Some((M2, fixed(&[("lam", 0)])))
            }
            R311 => Some((M31, fixed(&[]))),
        }
    }

    /// Parameters that select a discrete branch of the family; each returned
    /// map is one branch. Continuum parameters stay symbolic.
    pub fn discrete_branches(self) -> Vec<BTreeMap<String, Rational>> {
        let one_of = |name: &str, values: &[i64]| {
            values
                .iter()
                .map(|&v| {
                    BTreeMap::from([(name.to_string(), Rational::from_integer(v.into()))])
                })
                .collect::<Vec<_>>()
        };
        match self {
            M1Orig | M1 => one_of("delta", &[0, 1]),
            M3Orig => one_of("alpha", &[0, 1]),
            R2L1_1 => one_of("lam", &[-1, 1]),
            R301_2 => one_of("alpha2", &[-1, 0, 1]),
            _ => vec![BTreeMap::new()],
        }
    }

    /// Names of the continuum parameters at nilradical dimension `n`.
    pub fn continuum_params(self, n: usize) -> Vec<String> {
        let range = |prefix: &str, lo: usize, hi: usize| {
            (lo..=hi).map(|i| format!("{prefix}{i}")).collect::<Vec<_>>()
        };
        match self {
            M2 | R2L1_5 => vec!["lam".to_string()],
            R41 => range("a", 2, n - 1),
            R301_2 => {
                let mut v = vec![
                    "alpha1".to_string(),
                    "alpha3".to_string(),
                    "alpha4".to_string(),
                ];
                v.extend(range("beta", 1, n - 5));
                v
            }
            R301_3 => vec!["alpha".to_string()],
            R101_1 => range("alpha", 2, n),
            R101_2 | R101_3 | R101_4 | R101_5 | R101_6 | R101_7 => vec!["alpha".to_string()],
            R2L1_4 | R2L1_11 => vec!["alpha".to_string()],
            R2L1_6 | R2L1_12 => range("alpha", 2, n),
            _ => Vec::new(),
        }
    }

    /// A rational instantiation of every continuum parameter, drawn from the
    /// default sample set {0, 1, -1, 2, 1/2} and respecting the family's
    /// domain constraints.
    pub fn sample_params(self, n: usize) -> BTreeMap<String, Rational> {
        let cycle = [
            Rational::one(),
            -Rational::one(),
            Rational::from_integer(2.into()),
            Rational::new(1.into(), 2.into()),
            Rational::zero(),
        ];
        let mut out = BTreeMap::new();
        for (i, p) in self.continuum_params(n).into_iter().enumerate() {
            let v = match (self, p.as_str()) {
                // R101_7 excludes alpha in {1, 2, 3-n, 4-n, 5-n}.
                (R101_7, "alpha") => Rational::new(1.into(), 2.into()),
                // R2L1_5 excludes lam in {-1, 0, 1}.
                (R2L1_5, "lam") => Rational::from_integer(2.into()),
                (M2, "lam") => Rational::one(),
                _ => cycle[i % cycle.len()].clone(),
            };
            out.insert(p, v);
        }
        for b in self.discrete_branches().into_iter().next().unwrap_or_default() {
            out.insert(b.0, b.1);
        }
        out
    }

    pub fn doc(self) -> &'static str {
        match self {
            M1Orig => "M^{1,delta}: quasi-filiform non-Lie nilradical, original basis (delta in {0,1})",
            M1 => "M^{1,delta}: rebased convention used by the solvable families (delta in {0,1})",
            M2 => "M^{2,lam}: quasi-filiform non-Lie nilradical (lam exact rational)",
            M3Orig => "M^{3,alpha}: original basis (alpha = 0 for n > 6; alpha in {0,1} at n = 6)",
            M31 => "M^{3,1}: rebased convention, n = 6 only",
            M4 => "M^4: quasi-filiform non-Lie nilradical",
            R41 => "R(M^4,1)(a_2..a_{n-1}); first non-vanishing a_i can be scaled to 1",
            R301_1 => "R_1(M^{3,0},1)",
            R301_2 => "R_2(M^{3,0},1)(alpha_i, beta_j), alpha2 in {0,1,-1}",
            R301_3 => "R_3(M^{3,0},1)(alpha)",
            R301_4 => "R_4(M^{3,0},1)",
            R302 => "R(M^{3,0},2)",
            R101_1 => "R_1(M^{1,0},1)(alpha_2..alpha_n); first non-vanishing alpha_i can be scaled to 1",
            R101_2 => "R_2(M^{1,0},1)(alpha)",
            R101_3 => "R_3(M^{1,0},1)(alpha)",
            R101_4 => "R_4(M^{1,0},1)(alpha)",
            R101_5 => "R_5(M^{1,0},1)(alpha)",
            R101_6 => "R_6(M^{1,0},1)(alpha)",
            R101_7 => "R_7(M^{1,0},1)(alpha), alpha not in {1, 2, 3-n, 4-n, 5-n}",
            R2L1_1 => "R_1(M^{2,lam},1), stated for lam in {-1,1}; domain enforced as stated",
            R2L1_2 => "R_2(M^{2,-1},1)",
            R2L1_3 => "R_3(M^{2,-1},1)",
            R2L1_4 => "R_4(M^{2,-1},1)(alpha)",
            R2L1_5 => "R_5(M^{2,lam},1), lam not in {-1,0,1}",
            R2L1_6 => "R_6(M^{2,-1},1)(alpha_2..alpha_n); first non-vanishing alpha_i can be scaled to 1",
            R2L1_7 => "R_7(M^{2,0},1)",
            R2L1_8 => "R_8(M^{2,0},1)",
            R2L1_9 => "R_9(M^{2,0},1)",
            R2L1_10 => "R_10(M^{2,0},1)",
            R2L1_11 => "R_11(M^{2,0},1)(alpha)",
            R2L1_12 => {
                // The closing scaling remark for the lam = 0 list names a family
                // "R_6(M^{2,0},1)" although the listed family of that shape is
                // R_12; the remark is applied to R_12 here rather than renaming.
                "R_12(M^{2,0},1)(alpha_2..alpha_n); first non-vanishing alpha_i can be scaled to 1 \
                 (scaling remark stated for the R_6-shaped family applies here)"
            }
            R311 => {
                // The table as printed fails the Leibniz identity on the
                // triple (x, e_1, e_4) with residual -6*e_5, and no choice of
                // left products repairs it: e_5 = [e_2,e_2] = [e_4,e_1]
                // forces [x,e_5] to be both 0 and -6*e_5 unless the diagonal
                // derivation parameter vanishes. See the extension-replay
                // tests for the machine-checked argument.
                "R(M^{3,1},1) as printed, total dimension 7; known inconsistency: \
                 fails the identity at (x,e_1,e_4), and weight analysis rules out \
                 any repair (no solvable extension of M^{3,1} exists)"
            }
            R102 => "R(M^{1,0},2)",
            R202 => "R(M^{2,0},2)",
            R2M12 => "R(M^{2,-1},2)",
        }
    }
}

impl fmt::Display for FamilyId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            M1Orig => "M1-orig",
            M1 => "M1",
            M2 => "M2",
            M3Orig => "M3-orig",
            M31 => "M31",
            M4 => "M4",
            R41 => "R41",
            R301_1 => "R301-1",
            R301_2 => "R301-2",
            R301_3 => "R301-3",
            R301_4 => "R301-4",
            R302 => "R302",
            R101_1 => "R101-1",
            R101_2 => "R101-2",
            R101_3 => "R101-3",
            R101_4 => "R101-4",
            R101_5 => "R101-5",
            R101_6 => "R101-6",
            R101_7 => "R101-7",
            R2L1_1 => "R2L1-1",
            R2L1_2 => "R2L1-2",
            R2L1_3 => "R2L1-3",
            R2L1_4 => "R2L1-4",
            R2L1_5 => "R2L1-5",
            R2L1_6 => "R2L1-6",
            R2L1_7 => "R2L1-7",
            R2L1_8 => "R2L1-8",
            R2L1_9 => "R2L1-9",
            R2L1_10 => "R2L1-10",
            R2L1_11 => "R2L1-11",
            R2L1_12 => "R2L1-12",
            R311 => "R311",
            R102 => "R102",
            R202 => "R202",
            R2M12 => "R2M12",
        };
        f.write_str(s)
    }
}

impl FromStr for FamilyId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_FAMILIES
            .into_iter()
            .find(|f| f.to_string().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownFamily(s.to_string()))
    }
}

/// Catalog metadata for one family.
#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub id: FamilyId,
    pub complement_size: usize,
    pub dim_range: (usize, Option<usize>),
    pub doc: &'static str,
}

/// Complete, stably ordered family list.
pub fn list_families() -> Vec<CatalogEntry> {
    ALL_FAMILIES
        .into_iter()
        .map(|id| CatalogEntry {
            id,
            complement_size: id.complement_size(),
            dim_range: id.dim_range(),
            doc: id.doc(),
        })
        .collect()
}

fn check_dim(id: FamilyId, n: usize) -> Result<()> {
    let (lo, hi) = id.dim_range();
    if n < lo || hi.is_some_and(|h| n > h) {
        return Err(Error::BadDim {
            family: id.to_string(),
            n,
            constraint: match hi {
                Some(h) if h == lo => format!("n = {lo}"),
                Some(h) => format!("{lo} <= n <= {h}"),
                None => format!("n >= {lo}"),
            },
        });
    }
    Ok(())
}

fn get_int(params: &BTreeMap<String, Rational>, name: &str) -> Option<i64> {
    params.get(name).and_then(|r| {
        if r.denom().is_one() {
            i64::try_from(r.numer().clone()).ok()
        } else {
            None
        }
    })
}

fn require_choice(
    id: FamilyId,
    params: &BTreeMap<String, Rational>,
    name: &str,
    allowed: &[i64],
) -> Result<i64> {
    match get_int(params, name) {
        Some(v) if allowed.contains(&v) => Ok(v),
        _ => Err(Error::BadParam {
            param: format!("{id}.{name}"),
            constraint: format!("must be one of {allowed:?}"),
        }),
    }
}

/// Build the multiplication table of a catalog family at nilradical
/// dimension `n`. Unbound continuum parameters become symbolic variables;
/// discrete branch parameters must be bound.
pub fn make(id: FamilyId, n: usize, params: &BTreeMap<String, Rational>) -> Result<Algebra> {
    check_dim(id, n)?;
    let s = id.complement_size();
    let total = n + s;
    let mut labels: Vec<String> = (1..=n).map(|i| format!("e{i}")).collect();
    if s == 1 {
        labels.push("x".to_string());
    } else if s == 2 {
        labels.push("x1".to_string());
        labels.push("x2".to_string());
    }
    let mut a = Algebra::with_labels(total, labels);

    // Parameter lookup: bound -> rational, unbound continuum -> variable.
    let p = |name: &str| -> Scalar {
        match params.get(name) {
            Some(r) => Scalar::from_rat(r.clone()),
            None => Scalar::var(name),
        }
    };
    let c = Scalar::from_int;
    let ci = |k: usize| Scalar::from_int(k as i64);
    let x = n + 1;
    let x2 = n + 2;

    // Nilradical part for the solvable families.
    if let Some((nil_id, fixed)) = id.nilradical() {
        let mut nil_params = fixed;
        for (k, v) in params {
            nil_params.entry(k.clone()).or_insert_with(|| v.clone());
        }
        let nil = make(nil_id, n, &nil_params)?;
        for ((i, j), v) in nil.products() {
            let mut w = v.clone();
            w.resize(total, Scalar::zero());
            a.set_product(*i, *j, w);
        }
    }

    match id {
        M1Orig => {
            let delta = require_choice(id, params, "delta", &[0, 1])?;
            a.put(1, 1, &[(n, Scalar::one())]);
            a.put(n - 1, 1, &[(2, Scalar::one())]);
            for i in 2..=n - 3 {
                a.put(i, 1, &[(i + 1, Scalar::one())]);
            }
            if delta == 1 {
                a.put(n - 1, n - 1, &[(4, Scalar::one())]);
                for i in 2..=n - 5 {
                    a.put(i, n - 1, &[(i + 3, Scalar::one())]);
                }
            }
            a.set_param("delta", params.get("delta").cloned());
        }
        M1 => {
            let delta = require_choice(id, params, "delta", &[0, 1])?;
            a.put(1, 1, &[(n, Scalar::one())]);
            for i in 2..=n - 2 {
                a.put(i, 1, &[(i + 1, Scalar::one())]);
            }
            if delta == 1 {
                for i in 2..=n - 4 {
                    a.put(i, 2, &[(i + 3, Scalar::one())]);
                }
            }
            a.set_param("delta", params.get("delta").cloned());
        }
        M2 => {
            for i in 1..=n - 3 {
                a.put(i, 1, &[(i + 1, Scalar::one())]);
            }
            a.put(n - 1, 1, &[(n, Scalar::one())]);
            a.put(1, n - 1, &[(n, p("lam"))]);
            a.set_param("lam", params.get("lam").cloned());
        }
        M3Orig => {
            let allowed: &[i64] = if n == 6 { &[0, 1] } else { &[0] };
            let alpha = require_choice(id, params, "alpha", allowed)?;
            a.put(1, 1, &[(2, Scalar::one())]);
            for i in 3..=n - 1 {
                a.put(i, 1, &[(i + 1, Scalar::one())]);
                a.put(1, i, &[(i + 1, c(-1))]);
            }
            if alpha == 1 {
                a.put(3, 3, &[(6, Scalar::one())]);
            }
            a.set_param("alpha", params.get("alpha").cloned());
        }
        M31 => {
            a.put(1, 1, &[(6, Scalar::one())]);
            for i in 2..=4 {
                a.put(i, 1, &[(i + 1, Scalar::one())]);
                a.put(1, i, &[(i + 1, c(-1))]);
            }
            a.put(2, 2, &[(5, Scalar::one())]);
        }
        M4 => {
            for i in 1..=n - 3 {
                a.put(i, 1, &[(i + 1, Scalar::one())]);
            }
            a.put(1, n - 1, &[(n, Scalar::one())]);
        }
        R41 => {
            for i in 1..=n - 2 {
                for j in i + 1..=n - 2 {
                    a.put(i, x, &[(j, p(&format!("a{}", j - i + 1)))]);
                }
            }
            a.put(n - 1, x, &[(n - 1, Scalar::one())]);
            a.put(n, x, &[(n, Scalar::one())]);
            a.put(x, n - 1, &[(n - 1, c(-1))]);
            a.put(x, x, &[(n - 2, p(&format!("a{}", n - 1)))]);
            for name in id.continuum_params(n) {
                a.set_param(&name, params.get(&name).cloned());
            }
        }
        R301_1 => {
            a.put(1, x, &[(1, Scalar::one())]);
            a.put(2, x, &[(2, c(2))]);
            a.put(x, x, &[(n, Scalar::one())]);
            a.put(x, 1, &[(1, c(-1))]);
            for i in 3..=n - 1 {
                a.put(i, x, &[(i, c(i as i64 - n as i64))]);
                a.put(x, i, &[(i, c(n as i64 - i as i64))]);
            }
        }
        R301_2 => {
            require_choice(id, params, "alpha2", &[-1, 0, 1])?;
            a.put(1, x, &[(2, p("alpha1"))]);
            a.put(x, 1, &[(2, p("alpha3"))]);
            a.put(x, x, &[(2, p("alpha4"))]);
            for i in 3..=n {
                a.put(i, x, &[(i, Scalar::one())]);
                a.put(x, i, &[(i, c(-1))]);
                if i + 2 <= n {
                    // target e_{i+2} exists only inside the nilradical
                    a.put(i, x, &[(i + 2, p("alpha2"))]);
                    a.put(x, i, &[(i + 2, p("alpha2").neg())]);
                }
                for k in i + 3..=n {
                    a.put(i, x, &[(k, p(&format!("beta{}", k - i - 2)))]);
                    a.put(x, i, &[(k, p(&format!("beta{}", k - i - 2)).neg())]);
                }
            }
            for name in id
                .continuum_params(n)
                .into_iter()
                .chain(["alpha2".to_string()])
            {
                a.set_param(&name, params.get(&name).cloned());
            }
        }
        R301_3 => {
            a.put(1, x, &[(1, Scalar::one())]);
            a.put(2, x, &[(2, c(2))]);
            a.put(x, 1, &[(1, c(-1))]);
            for i in 3..=n {
                a.put(i, x, &[(i, c(i as i64 - 3).add(&p("alpha")))]);
                a.put(x, i, &[(i, c(3 - i as i64).sub(&p("alpha")))]);
            }
            a.set_param("alpha", params.get("alpha").cloned());
        }
        R301_4 => {
            a.put(1, x, &[(1, Scalar::one()), (3, Scalar::one())]);
            a.put(2, x, &[(2, c(2))]);
            a.put(x, 1, &[(1, c(-1)), (3, c(-1))]);
            for i in 3..=n {
                a.put(i, x, &[(i, c(i as i64 - 2))]);
                a.put(x, i, &[(i, c(2 - i as i64))]);
            }
        }
        R302 => {
            a.put(1, x, &[(1, Scalar::one())]);
            a.put(2, x, &[(2, c(2))]);
            a.put(x, 1, &[(1, c(-1))]);
            a.put(1, x2, &[(1, Scalar::one())]);
            a.put(2, x2, &[(2, c(2))]);
            a.put(x2, 1, &[(1, c(-1))]);
            for i in 3..=n {
                a.put(i, x, &[(i, c(i as i64 - 3))]);
                a.put(x, i, &[(i, c(3 - i as i64))]);
                a.put(i, x2, &[(i, c(i as i64 - 2))]);
                a.put(x2, i, &[(i, c(2 - i as i64))]);
            }
        }
        R101_1 => {
            a.put(1, x, &[(n, p("alpha2"))]);
            a.put(x, x, &[(n, p(&format!("alpha{n}")))]);
            for i in 2..=n - 1 {
                a.put(i, x, &[(i, Scalar::one())]);
                for t in i + 1..=n - 1 {
                    a.put(i, x, &[(t, p(&format!("alpha{}", t - i + 2)))]);
                }
            }
            for name in id.continuum_params(n) {
                a.set_param(&name, params.get(&name).cloned());
            }
        }
        R101_2 => {
            a.put(1, x, &[(1, Scalar::one())]);
            for i in 2..=n - 1 {
                a.put(i, x, &[(i, ci(i - 1))]);
            }
            a.put(n, x, &[(n, c(2))]);
            a.put(x, 1, &[(1, c(-1)), (2, p("alpha"))]);
            a.set_param("alpha", params.get("alpha").cloned());
        }
        R101_3 => {
            a.put(1, x, &[(1, Scalar::one())]);
            a.put(2, x, &[(2, c(2)), (n, p("alpha"))]);
            for i in 3..=n - 1 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(n, x, &[(n, c(2))]);
            a.put(x, 1, &[(1, c(-1))]);
            a.set_param("alpha", params.get("alpha").cloned());
        }
        R101_4 => {
            a.put(1, x, &[(1, Scalar::one()), (n - 2, p("alpha"))]);
            a.put(x, x, &[(n - 3, p("alpha").neg())]);
            for i in 2..=n - 1 {
                a.put(i, x, &[(i, c(i as i64 + 3 - n as i64))]);
            }
            a.put(n, x, &[(n - 1, p("alpha")), (n, c(2))]);
            a.put(x, 1, &[(1, c(-1))]);
            a.set_param("alpha", params.get("alpha").cloned());
        }
        R101_5 => {
            a.put(1, x, &[(1, Scalar::one()), (n - 1, p("alpha"))]);
            for i in 2..=n {
                a.put(i, x, &[(i, c(i as i64 + 2 - n as i64))]);
            }
            a.put(x, 1, &[(1, c(-1))]);
            a.put(x, x, &[(n - 2, p("alpha").neg())]);
            a.set_param("alpha", params.get("alpha").cloned());
        }
        R101_6 => {
            a.put(1, x, &[(1, Scalar::one())]);
            a.put(x, 1, &[(1, c(-1))]);
            for i in 2..=n - 1 {
                a.put(i, x, &[(i, c(i as i64 + 1 - n as i64))]);
            }
            a.put(n, x, &[(n, c(2))]);
            a.put(x, x, &[(n - 1, p("alpha"))]);
            a.set_param("alpha", params.get("alpha").cloned());
        }
        R101_7 => {
            if let Some(alpha) = params.get("alpha") {
                let excluded = [
                    Rational::one(),
                    Rational::from_integer(2.into()),
                    Rational::from_integer((3 - n as i64).into()),
                    Rational::from_integer((4 - n as i64).into()),
                    Rational::from_integer((5 - n as i64).into()),
                ];
                if excluded.contains(alpha) {
                    return Err(Error::BadParam {
                        param: format!("{id}.alpha"),
                        constraint: format!("alpha not in {{1, 2, {}, {}, {}}}", 3 - n as i64, 4 - n as i64, 5 - n as i64),
                    });
                }
            }
            a.put(1, x, &[(1, Scalar::one())]);
            a.put(x, 1, &[(1, c(-1))]);
            for i in 2..=n - 1 {
                a.put(i, x, &[(i, c(i as i64 - 2).add(&p("alpha")))]);
            }
            a.put(n, x, &[(n, c(2))]);
            a.set_param("alpha", params.get("alpha").cloned());
        }
        R2L1_1 => {
            let lam = require_choice(id, params, "lam", &[-1, 1])?;
            a.put(1, x, &[(1, Scalar::one()), (n - 1, Scalar::one())]);
            a.put(2, x, &[(2, c(2)), (n, c(1 + lam))]);
            for i in 3..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(n - 1, x, &[(n - 1, Scalar::one())]);
            a.put(n, x, &[(n, c(2))]);
            a.put(x, 1, &[(1, c(-1)), (n - 1, c(-1))]);
            a.put(x, n - 1, &[(n - 1, c(-1))]);
            a.put(x, n, &[(n, c(lam - 1))]);
        }
        R2L1_2 => {
            a.put(1, x, &[(1, Scalar::one()), (n, Scalar::one())]);
            a.put(n, x, &[(n, Scalar::one())]);
            for i in 2..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            // [x,e_1] must mirror [e_1,x] in full: the identity fails on
            // the triple (x,x,e_1) without the -e_n term.
            a.put(x, 1, &[(1, c(-1)), (n, c(-1))]);
            a.put(x, n, &[(n, c(-1))]);
        }
        R2L1_3 => {
            for i in 1..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(n - 1, x, &[(n - 1, c(-1))]);
            a.put(x, 1, &[(1, c(-1))]);
            a.put(x, n - 1, &[(n - 1, Scalar::one())]);
            a.put(x, x, &[(n, Scalar::one())]);
        }
        R2L1_4 => {
            for i in 1..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(n - 1, x, &[(n - 1, p("alpha"))]);
            a.put(n, x, &[(n, Scalar::one().add(&p("alpha")))]);
            a.put(x, 1, &[(1, c(-1))]);
            a.put(x, n - 1, &[(n - 1, p("alpha").neg())]);
            a.put(x, n, &[(n, Scalar::one().add(&p("alpha")).neg())]);
            a.set_param("alpha", params.get("alpha").cloned());
        }
        R2L1_5 => {
            if let Some(lam) = params.get("lam") {
                let excluded = [
                    -Rational::one(),
                    Rational::zero(),
                    Rational::one(),
                ];
                if excluded.contains(lam) {
                    return Err(Error::BadParam {
                        param: format!("{id}.lam"),
                        constraint: "lam not in {-1, 0, 1}".to_string(),
                    });
                }
            }
            for i in 1..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(n - 1, x, &[(n - 1, p("lam"))]);
            a.put(n, x, &[(n, Scalar::one().add(&p("lam")))]);
            a.put(x, 1, &[(1, c(-1))]);
            a.put(x, n - 1, &[(n - 1, p("lam").neg())]);
            a.set_param("lam", params.get("lam").cloned());
        }
        R2L1_6 | R2L1_12 => {
            for i in 1..=n - 3 {
                for t in i + 1..=n - 2 {
                    a.put(i, x, &[(t, p(&format!("alpha{}", t - i + 1)))]);
                }
            }
            a.put(n - 1, x, &[(n - 1, Scalar::one()), (n, p(&format!("alpha{}", n - 1)))]);
            a.put(n, x, &[(n, Scalar::one())]);
            a.put(x, x, &[(n - 2, p(&format!("alpha{n}")))]);
            if id == R2L1_6 {
                a.put(x, n - 1, &[(n - 1, c(-1)), (n, p(&format!("alpha{}", n - 1)).neg())]);
                a.put(x, n, &[(n, c(-1))]);
            }
            for name in id.continuum_params(n) {
                a.set_param(&name, params.get(&name).cloned());
            }
        }
        R2L1_7 => {
            for i in 1..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(n - 1, x, &[(n - 1, c(-1))]);
            a.put(x, 1, &[(1, c(-1))]);
            a.put(x, x, &[(n, Scalar::one())]);
        }
        R2L1_8 => {
            for i in 1..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(n - 1, x, &[(n - 3, Scalar::one()), (n - 1, ci(n - 3))]);
            a.put(n, x, &[(n - 2, Scalar::one()), (n, ci(n - 2))]);
            a.put(x, 1, &[(1, c(-1))]);
        }
        R2L1_9 => {
            for i in 1..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(n - 1, x, &[(n - 2, Scalar::one()), (n - 1, ci(n - 2))]);
            a.put(n, x, &[(n, ci(n - 1))]);
            a.put(x, 1, &[(1, c(-1))]);
        }
        R2L1_10 => {
            a.put(1, x, &[(1, Scalar::one()), (n, Scalar::one())]);
            a.put(x, 1, &[(1, c(-1))]);
            for i in 2..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(n, x, &[(n, Scalar::one())]);
            a.put(x, x, &[(n - 1, c(-1))]);
        }
        R2L1_11 => {
            for i in 1..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(n - 1, x, &[(n - 1, p("alpha"))]);
            a.put(n, x, &[(n, Scalar::one().add(&p("alpha")))]);
            a.put(x, 1, &[(1, c(-1))]);
            a.set_param("alpha", params.get("alpha").cloned());
        }
        R311 => {
            a.put(1, x, &[(1, Scalar::one())]);
            a.put(x, 1, &[(1, c(-1))]);
            for i in 2..=4 {
                a.put(i, x, &[(i, ci(i + 1))]);
                a.put(x, i, &[(i, c(-(i as i64 + 1)))]);
            }
            a.put(5, x, &[(5, c(6))]);
            a.put(6, x, &[(6, c(2))]);
        }
        R102 => {
            a.put(1, x, &[(1, Scalar::one())]);
            for i in 3..=n - 1 {
                a.put(i, x, &[(i, ci(i - 2))]);
            }
            a.put(n, x, &[(n, c(2))]);
            a.put(x, 1, &[(1, c(-1))]);
            for i in 2..=n - 1 {
                a.put(i, x2, &[(i, Scalar::one())]);
            }
        }
        R202 => {
            for i in 1..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(n, x, &[(n, Scalar::one())]);
            a.put(x, 1, &[(1, c(-1))]);
            a.put(n - 1, x2, &[(n - 1, Scalar::one())]);
            a.put(n, x2, &[(n, Scalar::one())]);
        }
        R2M12 => {
            for i in 1..=n - 2 {
                a.put(i, x, &[(i, ci(i))]);
            }
            a.put(x, 1, &[(1, c(-1))]);
            a.put(n, x, &[(n, Scalar::one())]);
            a.put(x, n, &[(n, c(-1))]);
            a.put(n - 1, x2, &[(n - 1, Scalar::one())]);
            a.put(x2, n - 1, &[(n - 1, c(-1))]);
            a.put(n, x2, &[(n, Scalar::one())]);
            a.put(x2, n, &[(n, c(-1))]);
        }
    }
    Ok(a)
}

/// The change of basis linking the original tables of `M^{1,delta}` and
/// `M^{3,1}` to the rebased conventions. Returns (original, map, rebased)
/// with `apply_basis_change(original, map) == rebased` entry-exactly.
pub fn rebase_link(
    family: FamilyId,
    n: usize,
    params: &BTreeMap<String, Rational>,
) -> Result<(Algebra, LinearMap, Algebra)> {
    match family {
        M1 | M1Orig => {
            let original = make(M1Orig, n, params)?;
            let rebased = make(M1, n, params)?;
            // e_1' = e_1, e_2' = e_{n-1}, e_i' = e_{i-1} (3 <= i <= n-1), e_n' = e_n.
            let mut m = ExactMatrix::zeros(n, n);
            m.set(0, 0, Scalar::one());
            m.set(1, n - 2, Scalar::one());
            for i in 3..=n - 1 {
                m.set(i - 1, i - 2, Scalar::one());
            }
            m.set(n - 1, n - 1, Scalar::one());
            Ok((original, LinearMap::new(m), rebased))
        }
        M31 | M3Orig => {
            check_dim(M31, n)?;
            let mut orig_params = params.clone();
            orig_params.insert("alpha".to_string(), Rational::one());
            let original = make(M3Orig, n, &orig_params)?;
            let rebased = make(M31, n, params)?;
            // e_1' = e_1, e_6' = e_2, e_i' = e_{i+1} (2 <= i <= 5).
            let mut m = ExactMatrix::zeros(6, 6);
            m.set(0, 0, Scalar::one());
            m.set(5, 1, Scalar::one());
            for i in 2..=5 {
                m.set(i - 1, i, Scalar::one());
            }
            Ok((original, LinearMap::new(m), rebased))
        }
        M4 => {
            let a = make(M4, n, params)?;
            Ok((a.clone(), LinearMap::identity(n), a))
        }
        other => Err(Error::UnknownFamily(format!(
            "{other} has a single basis convention"
        ))),
    }
}

//! Derivation spaces as nullspace problems, right-multiplication operators,
//! nilpotency of maps, nil-independence of pairs via trace polynomials, the
//! closed-form derivation patterns of the three relevant nilradicals, and
//! the nilradical-candidate certificate.

use num_traits::{One, Zero};

use crate::algebra::{product_subspace, Algebra, LinearMap, Subspace};
use crate::error::{Error, Result};
use crate::matrix::{rref_nullspace, ExactMatrix};
use crate::scalar::{Rational, Scalar};
use crate::series::is_nilpotent_subalgebra;

#[derive(Clone, Debug)]
pub struct DerivationSpace {
    pub basis: Vec<LinearMap>,
    pub dim: usize,
}

/// Nullspace of the n^3-equation linear system in the n^2 matrix unknowns.
/// Unknown (r, c) is the coefficient of `e_c` in `d(e_r)` (row convention).
pub fn derivation_space(a: &Algebra) -> Result<DerivationSpace> {
    a.require_rational()?;
    let n = a.dim();
    let c = |i: usize, j: usize, k: usize| -> Rational {
        a.basis_product(i, j)
            .map(|v| v[k].as_rational().unwrap().clone())
            .unwrap_or_else(Rational::zero)
    };
    // Equation (i, j, m): coefficient of e_m in
    // d([e_i,e_j]) - [d(e_i),e_j] - [e_i,d(e_j)] = 0.
    let mut rows: Vec<Vec<Rational>> = Vec::with_capacity(n * n * n);
    for i in 0..n {
        for j in 0..n {
            for m in 0..n {
                let mut row = vec![Rational::zero(); n * n];
                for k in 0..n {
                    let v = c(i, j, k);
                    if !v.is_zero() {
                        row[k * n + m] += v;
                    }
                }
                for t in 0..n {
                    let v = c(t, j, m);
                    if !v.is_zero() {
                        row[i * n + t] -= v;
                    }
                    let v = c(i, t, m);
                    if !v.is_zero() {
                        row[j * n + t] -= v;
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    if rows.is_empty() {
        rows.push(vec![Rational::zero(); n * n]);
    }
    let r = rref_nullspace(&ExactMatrix::from_rational_rows(rows))?;
    let basis: Vec<LinearMap> = r
        .nullspace
        .into_iter()
        .map(|flat| {
            let mut m = ExactMatrix::zeros(n, n);
            for r in 0..n {
                for c in 0..n {
                    m.set(r, c, Scalar::Rat(flat[r * n + c].clone()));
                }
            }
            LinearMap::new(m)
        })
        .collect();
    Ok(DerivationSpace {
        dim: basis.len(),
        basis,
    })
}

/// Exact check of the derivation property on all basis pairs.
pub fn is_derivation(a: &Algebra, d: &LinearMap) -> Result<bool> {
    let n = a.dim();
    if d.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: d.dim(),
        });
    }
    for i in 0..n {
        for j in 0..n {
            let ei = a.basis_vector(i);
            let ej = a.basis_vector(j);
            let lhs = d.apply(&a.bracket(&ei, &ej)?);
            let r1 = a.bracket(&d.apply(&ei), &ej)?;
            let r2 = a.bracket(&ei, &d.apply(&ej))?;
            for k in 0..n {
                if !lhs[k].sub(&r1[k].add(&r2[k])).is_zero() {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// The operator `y -> [y, x]` on the whole algebra (row i = image of e_i).
pub fn right_mult(a: &Algebra, x: &[Scalar]) -> Result<LinearMap> {
    let n = a.dim();
    let mut m = ExactMatrix::zeros(n, n);
    for i in 0..n {
        let w = a.bracket(&a.basis_vector(i), x)?;
        for (j, s) in w.into_iter().enumerate() {
            m.set(i, j, s);
        }
    }
    Ok(LinearMap::new(m))
}

/// The matrix of `y -> [y, x]` restricted to the subspace `nsub`, expressed
/// in the subspace's canonical basis.
pub fn right_mult_restriction(
    a: &Algebra,
    x: &[Scalar],
    nsub: &Subspace,
) -> Result<LinearMap> {
    let d = nsub.dim();
    let mut m = ExactMatrix::zeros(d, d);
    for (i, v) in nsub.basis().iter().enumerate() {
        let vs: Vec<Scalar> = v.iter().map(|r| Scalar::Rat(r.clone())).collect();
        let w = a.bracket(&vs, x)?;
        let wr: Option<Vec<Rational>> = w.iter().map(|s| s.as_rational().cloned()).collect();
        let wr = wr.ok_or(Error::PolynomialEntries)?;
        let coords = nsub.coords(&wr).ok_or(Error::NotInvariant)?;
        for (j, r) in coords.into_iter().enumerate() {
            m.set(i, j, Scalar::Rat(r));
        }
    }
    Ok(LinearMap::new(m))
}

/// `D^n = 0` with n the ambient dimension.
pub fn is_nilpotent_map(d: &LinearMap) -> Result<bool> {
    if !d.matrix().is_rational() {
        return Err(Error::PolynomialEntries);
    }
    Ok(d.pow(d.dim()).is_zero())
}

/// Polynomial coefficients (ascending) of a scalar viewed as univariate in
/// `var`; errors if any other variable occurs.
fn univariate_coeffs(s: &Scalar, var: &str) -> Result<Vec<Rational>> {
    match s {
        Scalar::Rat(r) => Ok(vec![r.clone()]),
        Scalar::Poly(p) => {
            let mut out: Vec<Rational> = Vec::new();
            for (mono, coef) in p.terms() {
                let mut deg = 0u32;
                for (v, e) in mono.exponents() {
                    if v == var {
                        deg = e;
                    } else {
                        return Err(Error::UnknownSymbol(v.to_string()));
                    }
                }
                let deg = deg as usize;
                if out.len() <= deg {
                    out.resize(deg + 1, Rational::zero());
                }
                out[deg] = coef.clone();
            }
            Ok(out)
        }
    }
}

fn poly_trim(v: &mut Vec<Rational>) {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
}

/// Monic gcd over Q[t] of dense coefficient vectors (ascending powers).
fn poly_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut f = a.to_vec();
    let mut g = b.to_vec();
    poly_trim(&mut f);
    poly_trim(&mut g);
    while !g.is_empty() {
        // f mod g
        while f.len() >= g.len() && !f.is_empty() {
            let lead = &f[f.len() - 1] / &g[g.len() - 1];
            let shift = f.len() - g.len();
            for (i, gc) in g.iter().enumerate() {
                let v = &f[shift + i] - &lead * gc;
                f[shift + i] = v;
            }
            poly_trim(&mut f);
        }
        std::mem::swap(&mut f, &mut g);
    }
    if let Some(l) = f.last().cloned() {
        for c in &mut f {
            *c = &*c / &l;
        }
    }
    f
}

/// True iff no nonzero combination `alpha*D1 + beta*D2` is nilpotent,
/// decided exactly over the algebraic closure via the trace conditions
/// `tr((alpha*D1 + beta*D2)^k) = 0`, k = 1..n, on both affine charts.
pub fn nil_independent_pair(d1: &LinearMap, d2: &LinearMap) -> Result<bool> {
    if !d1.matrix().is_rational() || !d2.matrix().is_rational() {
        return Err(Error::PolynomialEntries);
    }
    if d1.dim() != d2.dim() {
        return Err(Error::DimensionMismatch {
            expected: d1.dim(),
            got: d2.dim(),
        });
    }
    // Chart alpha = 0: beta*D2 nilpotent iff D2 is.
    if is_nilpotent_map(d2)? {
        return Ok(false);
    }
    // Chart alpha = 1: common zeros of tr((D1 + beta*D2)^k).
    let n = d1.dim();
    let beta = Scalar::var("beta");
    let mut m = ExactMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(
                i,
                j,
                d1.matrix().get(i, j).add(&beta.mul(d2.matrix().get(i, j))),
            );
        }
    }
    let mut gcd: Option<Vec<Rational>> = None;
    let mut pow = m.clone();
    for _ in 0..n {
        let tr = univariate_coeffs(&pow.trace(), "beta")?;
        gcd = Some(match gcd {
            None => {
                let mut t = tr;
                poly_trim(&mut t);
                t
            }
            Some(g) => poly_gcd(&g, &tr),
        });
        if gcd.as_ref().is_some_and(|g| g.len() == 1) {
            // constant nonzero gcd: no common zero anywhere
            return Ok(true);
        }
        pow = pow.matmul(&m);
    }
    // gcd empty (all traces identically zero) or positive degree: some
    // (possibly irrational) beta kills every trace, so a nilpotent
    // combination exists over the closure.
    Ok(false)
}

/// Dimension of the span of the diagonals of a derivation-space basis.
pub fn diagonal_span_dim(ds: &DerivationSpace) -> usize {
    let rows: Vec<Vec<Rational>> = ds
        .basis
        .iter()
        .map(|d| {
            (0..d.dim())
                .map(|i| d.matrix().get(i, i).as_rational().unwrap().clone())
                .collect()
        })
        .collect();
    if rows.is_empty() {
        return 0;
    }
    let dim = rows[0].len();
    crate::algebra::span_dim(dim, rows)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DerivationPattern {
    /// `M^{1,delta}` (delta read from the algebra's bound parameters).
    M1Delta,
    /// `M^{2,lam}` (lam read from the algebra's bound parameters).
    M2Lambda,
    /// `M^{3,1}` at n = 6.
    M31,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatternMatch {
    Pass { dim: usize },
    Mismatch { computed_dim: usize, pattern_dim: usize, detail: String },
}

fn bound_param(a: &Algebra, name: &str) -> Result<Rational> {
    a.params()
        .get(name)
        .and_then(|v| v.clone())
        .ok_or_else(|| Error::BadParam {
            param: name.to_string(),
            constraint: "must be bound to match a derivation pattern".to_string(),
        })
}

/// The closed-form generators of the derivation space of each nilradical,
/// one map per free parameter of the pattern.
pub fn pattern_generators(a: &Algebra, pattern: DerivationPattern) -> Result<Vec<LinearMap>> {
    let n = a.dim();
    let mut gens: Vec<LinearMap> = Vec::new();
    let mut push = |rows: Vec<Vec<(usize, Rational)>>| {
        // rows: 1-based (target, coeff) lists per basis vector
        let mut m = ExactMatrix::zeros(n, n);
        for (i, terms) in rows.into_iter().enumerate() {
            for (t, c) in terms {
                m.set(i, t - 1, Scalar::Rat(c));
            }
        }
        gens.push(LinearMap::new(m));
    };
    let one = Rational::one;
    let q = |k: i64| Rational::from_integer(k.into());
    match pattern {
        DerivationPattern::M1Delta => {
            let delta = bound_param(a, "delta")?;
            let delta1 = delta.is_one();
            // d(e_1) = a_1 e_1 + a_{n-2} e_{n-2} + a_{n-1} e_{n-1} + a_n e_n
            // d(e_2) = sum_{t=2}^n b_t e_t
            // d(e_i) = ((i-2) a_1 + b_2) e_i + sum_{t=i+1}^{n-1} b_{t-i+2} e_t
            // d(e_n) = a_{n-2} e_{n-1} + 2 a_1 e_n;   delta = 1 => b_2 = 3 a_1.
            // a_1 direction (with b_2 folded in when delta = 1):
            let mut rows = vec![Vec::new(); n];
            rows[0].push((1, one()));
            let b2 = if delta1 { q(3) } else { q(0) };
            if delta1 {
                rows[1].push((2, b2.clone()));
            }
            for i in 3..=n - 1 {
                rows[i - 1].push((i, q(i as i64 - 2) + b2.clone()));
            }
            rows[n - 1].push((n, q(2)));
            push(rows);
            for slot in [n - 2, n - 1, n] {
                let mut rows = vec![Vec::new(); n];
                rows[0].push((slot, one()));
                if slot == n - 2 {
                    rows[n - 1].push((n - 1, one()));
                }
                push(rows);
            }
            let b_lo = if delta1 { 3 } else { 2 };
            for b in b_lo..=n {
                let mut rows = vec![Vec::new(); n];
                rows[1].push((b, one()));
                if b == 2 {
                    for i in 3..=n - 1 {
                        rows[i - 1].push((i, one()));
                    }
                } else {
                    // b_t multiplies e_{t+i-2} in d(e_i), i.e. target t+i-2
                    for i in 3..=n - 1 {
                        let t = b + i - 2;
                        if t <= n - 1 {
                            rows[i - 1].push((t, one()));
                        }
                    }
                }
                push(rows);
            }
        }
        DerivationPattern::M2Lambda => {
            let lam = bound_param(a, "lam")?;
            // d(e_1) = sum_{t=1}^n a_t e_t
            // d(e_2) = 2 a_1 e_2 + sum_{t=2}^{n-3} a_t e_{t+1} + (1+lam) a_{n-1} e_n
            // d(e_i) = i a_1 e_i + sum_{t=2}^{n-1-i} a_t e_{t+i-1},  3 <= i <= n-2
            // d(e_{n-1}) = b_{n-3} e_{n-3} + b_{n-2} e_{n-2}
            //            + b_{n-1} e_{n-1} + b_n e_n   (lam != 0 => b_{n-3} = 0)
            // d(e_n) = b_{n-3} e_{n-2} + (a_1 + b_{n-1}) e_n
            for t in 1..=n {
                let mut rows = vec![Vec::new(); n];
                rows[0].push((t, one()));
                if t == 1 {
                    rows[1].push((2, q(2)));
                    for i in 3..=n - 2 {
                        rows[i - 1].push((i, q(i as i64)));
                    }
                    rows[n - 1].push((n, one()));
                }
                if (2..=n - 3).contains(&t) {
                    rows[1].push((t + 1, one()));
                }
                if t == n - 1 {
                    let c = Rational::one() + lam.clone();
                    if !c.is_zero() {
                        rows[1].push((n, c));
                    }
                }
                for i in 3..=n - 2 {
                    if (2..=n - 1 - i).contains(&t) {
                        rows[i - 1].push((t + i - 1, one()));
                    }
                }
                push(rows);
            }
            let b_slots: Vec<usize> = if lam.is_zero() {
                vec![n - 3, n - 2, n - 1, n]
            } else {
                vec![n - 2, n - 1, n]
            };
            for b in b_slots {
                let mut rows = vec![Vec::new(); n];
                rows[n - 2].push((b, one()));
                if b == n - 3 {
                    rows[n - 1].push((n - 2, one()));
                }
                if b == n - 1 {
                    rows[n - 1].push((n, one()));
                }
                push(rows);
            }
        }
        DerivationPattern::M31 => {
            if n != 6 {
                return Err(Error::BadDim {
                    family: "M31 pattern".to_string(),
                    n,
                    constraint: "n = 6".to_string(),
                });
            }
            // a_1 direction: diag(1, 3, 4, 5, 6, 2)
            let mut rows = vec![Vec::new(); n];
            for (i, w) in [1i64, 3, 4, 5, 6, 2].into_iter().enumerate() {
                rows[i].push((i + 1, q(w)));
            }
            push(rows);
            for slot in 3..=6 {
                let mut rows = vec![Vec::new(); n];
                rows[0].push((slot, one()));
                push(rows);
            }
            for b in 3..=6 {
                let mut rows = vec![Vec::new(); n];
                rows[1].push((b, one()));
                // shifted copies stop at e_5: e_6 is the separate square slot
                if b + 1 <= 5 {
                    rows[2].push((b + 1, one()));
                }
                if b + 2 <= 5 {
                    rows[3].push((b + 2, one()));
                }
                push(rows);
            }
        }
    }
    Ok(gens)
}

/// Free-parameter names of a pattern, index-aligned with the generator list
/// returned by `pattern_generators`.
pub fn pattern_parameter_names(a: &Algebra, pattern: DerivationPattern) -> Result<Vec<String>> {
    let n = a.dim();
    let mut names = Vec::new();
    match pattern {
        DerivationPattern::M1Delta => {
            let delta = bound_param(a, "delta")?;
            names.push("a1".to_string());
            for slot in [n - 2, n - 1, n] {
                names.push(format!("a{slot}"));
            }
            let b_lo = if delta.is_one() { 3 } else { 2 };
            for b in b_lo..=n {
                names.push(format!("b{b}"));
            }
        }
        DerivationPattern::M2Lambda => {
            let lam = bound_param(a, "lam")?;
            for t in 1..=n {
                names.push(format!("a{t}"));
            }
            let b_lo = if lam.is_zero() { n - 3 } else { n - 2 };
            for b in b_lo..=n {
                names.push(format!("b{b}"));
            }
        }
        DerivationPattern::M31 => {
            names.push("a1".to_string());
            for slot in 3..=6 {
                names.push(format!("a{slot}"));
            }
            for b in 3..=6 {
                names.push(format!("b{b}"));
            }
        }
    }
    Ok(names)
}

fn maps_to_subspace(dim: usize, maps: &[LinearMap]) -> Subspace {
    let vecs: Vec<Vec<Rational>> = maps
        .iter()
        .map(|m| {
            let mut flat = Vec::with_capacity(dim * dim);
            for i in 0..dim {
                for j in 0..dim {
                    flat.push(m.matrix().get(i, j).as_rational().unwrap().clone());
                }
            }
            flat
        })
        .collect();
    Subspace::from_spanning(dim * dim, vecs)
}

/// Span equality between the computed derivation space and the closed-form
/// pattern generators.
pub fn match_derivation_pattern(a: &Algebra, pattern: DerivationPattern) -> Result<PatternMatch> {
    let ds = derivation_space(a)?;
    let gens = pattern_generators(a, pattern)?;
    for (gi, g) in gens.iter().enumerate() {
        if !is_derivation(a, g)? {
            return Ok(PatternMatch::Mismatch {
                computed_dim: ds.dim,
                pattern_dim: gens.len(),
                detail: format!("pattern generator {gi} is not a derivation"),
            });
        }
    }
    let n = a.dim();
    let computed = maps_to_subspace(n, &ds.basis);
    let patterned = maps_to_subspace(n, &gens);
    if computed == patterned {
        Ok(PatternMatch::Pass { dim: ds.dim })
    } else {
        Ok(PatternMatch::Mismatch {
            computed_dim: computed.dim(),
            pattern_dim: patterned.dim(),
            detail: "span mismatch".to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateCheck {
    Pass,
    Failure(CandidateFailure),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CandidateFailure {
    /// N is not a two-sided ideal.
    NotIdeal,
    /// N is not nilpotent as a subalgebra.
    NotNilpotentIdeal,
    /// Complement element (index) acts as a nilpotent derivation.
    NilpotentAction(usize),
    /// Complement element (index) does not even act as a derivation of N.
    NotDerivation(usize),
    /// A pair of complement elements fails nil-independence.
    NilDependentPair(usize, usize),
    /// dim N < (1/2) dim R.
    TooSmall,
}

impl CandidateCheck {
    pub fn passed(&self) -> bool {
        matches!(self, CandidateCheck::Pass)
    }
}

/// Certificate that `nsub` can serve as the nilradical of `r` with the given
/// complement: two-sided ideal, nilpotent, non-nilpotent nil-independent
/// right-multiplication action, and `dim N >= dim R / 2`.
pub fn verify_nilradical_candidate(
    r: &Algebra,
    nsub: &Subspace,
    complement: &[Vec<Scalar>],
) -> Result<CandidateCheck> {
    r.require_rational()?;
    let full = Subspace::full(r.dim());
    let left = product_subspace(r, nsub, &full)?;
    let right = product_subspace(r, &full, nsub)?;
    if !nsub.contains_subspace(&left) || !nsub.contains_subspace(&right) {
        return Ok(CandidateCheck::Failure(CandidateFailure::NotIdeal));
    }
    if !is_nilpotent_subalgebra(r, nsub)? {
        return Ok(CandidateCheck::Failure(CandidateFailure::NotNilpotentIdeal));
    }
    let mut restrictions = Vec::with_capacity(complement.len());
    for (idx, x) in complement.iter().enumerate() {
        let d = match right_mult_restriction(r, x, nsub) {
            Ok(d) => d,
            Err(Error::NotInvariant) => {
                return Ok(CandidateCheck::Failure(CandidateFailure::NotDerivation(idx)))
            }
            Err(e) => return Err(e),
        };
        if is_nilpotent_map(&d)? {
            return Ok(CandidateCheck::Failure(CandidateFailure::NilpotentAction(idx)));
        }
        restrictions.push(d);
    }
    for i in 0..restrictions.len() {
        for j in i + 1..restrictions.len() {
            if !nil_independent_pair(&restrictions[i], &restrictions[j])? {
                return Ok(CandidateCheck::Failure(CandidateFailure::NilDependentPair(i, j)));
            }
        }
    }
    if 2 * nsub.dim() < r.dim() {
        return Ok(CandidateCheck::Failure(CandidateFailure::TooSmall));
    }
    Ok(CandidateCheck::Pass)
}

//! Generic solvable extensions R = N (+) Q with symbolic unknown products,
//! Leibniz residual extraction, linear auto-solving, and substitution — the
//! machinery for replaying extension classification arguments step by step.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::algebra::Algebra;
use crate::derivations::{
    pattern_generators, pattern_parameter_names, DerivationPattern,
};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};
use crate::series::is_nilpotent;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtensionPattern {
    /// Closed-form derivation pattern of `M^{1,delta}`.
    M1Delta,
    /// Closed-form derivation pattern of `M^{2,lam}`.
    M2Lambda,
    /// Closed-form derivation pattern of `M^{3,1}` (n = 6).
    M31,
    /// Every entry of the action unknown (only sensible for tiny algebras).
    Full,
}

/// One scalar equation `lhs = 0` with its provenance (which identity
/// residual or structural constraint produced it, and on which component).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Equation {
    pub lhs: Scalar,
    pub provenance: String,
    pub component: String,
}

impl std::fmt::Display for Equation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}[{}]: {} = 0", self.provenance, self.component, self.lhs)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ResidualSystem {
    pub equations: Vec<Equation>,
}

impl ResidualSystem {
    pub fn is_empty(&self) -> bool {
        self.equations.is_empty()
    }

    pub fn merged(mut self, other: ResidualSystem) -> ResidualSystem {
        self.equations.extend(other.equations);
        self
    }
}

#[derive(Clone, Debug)]
pub struct GenericExtension {
    nilradical: Algebra,
    s: usize,
    table: Algebra,
    bindings: BTreeMap<String, Scalar>,
    nonzero_pins: BTreeSet<String>,
}

fn pattern_cap(nilradical: &Algebra, pattern: ExtensionPattern) -> Result<usize> {
    Ok(match pattern {
        ExtensionPattern::M1Delta => {
            let delta = nilradical
                .params()
                .get("delta")
                .and_then(|v| v.clone())
                .ok_or_else(|| Error::BadParam {
                    param: "delta".to_string(),
                    constraint: "must be bound on the nilradical".to_string(),
                })?;
            if delta.is_zero() {
                2
            } else {
                1
            }
        }
        ExtensionPattern::M2Lambda => 2,
        ExtensionPattern::M31 => 1,
        ExtensionPattern::Full => 2,
    })
}

/// Assemble the symbolic product table of R = N (+) span{x_1..x_s}:
/// `[e_i, x_j]` from the derivation pattern (parameters `a*`/`b*`, doubled
/// to `aa*`/`bb*` for the second generator), `[x_j, e_i]` with unknowns
/// `c{j}_{i}_{t}`, and `[x_j, x_k]` with unknowns `d{j}{k}_{t}`.
pub fn build_generic_extension(
    nilradical: &Algebra,
    pattern: ExtensionPattern,
    s: usize,
) -> Result<GenericExtension> {
    nilradical.require_rational()?;
    if !nilradical.verify_leibniz().passed() || !is_nilpotent(nilradical)? {
        return Err(Error::BadParam {
            param: "nilradical".to_string(),
            constraint: "must be a nilpotent Leibniz algebra".to_string(),
        });
    }
    let cap = pattern_cap(nilradical, pattern)?;
    if s == 0 || s > cap {
        return Err(Error::CapExceeded { got: s, cap });
    }
    let n = nilradical.dim();
    let mut labels: Vec<String> = nilradical.labels().to_vec();
    if s == 1 {
        labels.push("x".to_string());
    } else {
        for j in 1..=s {
            labels.push(format!("x{j}"));
        }
    }
    let mut table = Algebra::with_labels(n + s, labels);
    for ((i, j), v) in nilradical.products() {
        let terms: Vec<(usize, Scalar)> = v
            .iter()
            .enumerate()
            .filter(|(_, s)| !s.is_zero())
            .map(|(k, s)| (k + 1, s.clone()))
            .collect();
        table.put(i + 1, j + 1, &terms);
    }
    for j in 1..=s {
        let xj = n + j;
        // [e_i, x_j]: derivation template
        match pattern {
            ExtensionPattern::Full => {
                for i in 1..=n {
                    for t in 1..=n {
                        let name = if j == 1 {
                            format!("a{i}_{t}")
                        } else {
                            format!("aa{i}_{t}")
                        };
                        table.put(i, xj, &[(t, Scalar::var(&name))]);
                    }
                }
            }
            _ => {
                let dpat = match pattern {
                    ExtensionPattern::M1Delta => DerivationPattern::M1Delta,
                    ExtensionPattern::M2Lambda => DerivationPattern::M2Lambda,
                    ExtensionPattern::M31 => DerivationPattern::M31,
                    ExtensionPattern::Full => unreachable!(),
                };
                let gens = pattern_generators(nilradical, dpat)?;
                let names = pattern_parameter_names(nilradical, dpat)?;
                debug_assert_eq!(gens.len(), names.len());
                for (g, name) in gens.iter().zip(&names) {
                    let var = if j == 1 {
                        Scalar::var(name)
                    } else {
                        // second generator: double the letter prefix
                        let (head, tail) = name.split_at(1);
                        Scalar::var(&format!("{head}{head}{tail}"))
                    };
                    for i in 0..n {
                        for t in 0..n {
                            let c = g.matrix().get(i, t);
                            if !c.is_zero() {
                                table.put(i + 1, xj, &[(t + 1, var.mul(c))]);
                            }
                        }
                    }
                }
            }
        }
        // [x_j, e_i] and [x_j, x_k]: fully unknown, landing in N
        for i in 1..=n {
            for t in 1..=n {
                table.put(xj, i, &[(t, Scalar::var(&format!("c{j}_{i}_{t}")))]);
            }
        }
        for k in 1..=s {
            for t in 1..=n {
                table.put(xj, n + k, &[(t, Scalar::var(&format!("d{j}{k}_{t}")))]);
            }
        }
    }
    Ok(GenericExtension {
        nilradical: nilradical.clone(),
        s,
        table,
        bindings: BTreeMap::new(),
        nonzero_pins: BTreeSet::new(),
    })
}

impl GenericExtension {
    pub fn table(&self) -> &Algebra {
        &self.table
    }

    pub fn nilradical(&self) -> &Algebra {
        &self.nilradical
    }

    pub fn complement_size(&self) -> usize {
        self.s
    }

    pub fn bindings(&self) -> &BTreeMap<String, Scalar> {
        &self.bindings
    }

    pub fn nonzero_pins(&self) -> &BTreeSet<String> {
        &self.nonzero_pins
    }

    /// Record a case-split assumption `var != 0`; protected from
    /// auto-solving and watched by `contradiction`.
    pub fn pin_nonzero(&mut self, var: &str) {
        self.nonzero_pins.insert(var.to_string());
    }

    /// All variables still occurring in the table.
    pub fn vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for v in self.table.products().values() {
            for s in v {
                out.extend(s.vars());
            }
        }
        out
    }

    fn symbol_index(&self, sym: &str) -> Result<usize> {
        self.table
            .labels()
            .iter()
            .position(|l| l == sym)
            .ok_or_else(|| Error::UnknownSymbol(sym.to_string()))
    }

    /// Leibniz residual equations of the symbolic table on the given basis
    /// symbol triples, nonzero components only.
    pub fn residual_system(&self, triples: &[(&str, &str, &str)]) -> Result<ResidualSystem> {
        let mut equations = Vec::new();
        for &(xs, ys, zs) in triples {
            let x = self.table.basis_vector(self.symbol_index(xs)?);
            let y = self.table.basis_vector(self.symbol_index(ys)?);
            let z = self.table.basis_vector(self.symbol_index(zs)?);
            let r = self.table.leibniz_residual(&x, &y, &z)?;
            for (k, lhs) in r.into_iter().enumerate() {
                if !lhs.is_zero() {
                    equations.push(Equation {
                        lhs,
                        provenance: format!("L({xs},{ys},{zs})"),
                        component: self.table.labels()[k].clone(),
                    });
                }
            }
        }
        Ok(ResidualSystem { equations })
    }

    /// Structural right-annihilator constraints: `[x_j, x_k]` and the
    /// symmetrizations `[x_j, e_i] + [e_i, x_j]` must be annihilated on the
    /// right by every basis vector. Stored as equations, never auto-applied.
    pub fn annihilator_constraints(&self) -> Result<ResidualSystem> {
        let n = self.nilradical.dim();
        let total = self.table.dim();
        let mut equations = Vec::new();
        let mut demand_annihilated = |v: Vec<Scalar>, what: &str| -> Result<()> {
            for m in 0..total {
                let w = self.table.bracket(&self.table.basis_vector(m), &v)?;
                for (k, lhs) in w.into_iter().enumerate() {
                    if !lhs.is_zero() {
                        equations.push(Equation {
                            lhs,
                            provenance: format!(
                                "Ann_r({what}) via {}",
                                self.table.labels()[m]
                            ),
                            component: self.table.labels()[k].clone(),
                        });
                    }
                }
            }
            Ok(())
        };
        for j in n..total {
            for k in n..total {
                let v = self.table.bracket(
                    &self.table.basis_vector(j),
                    &self.table.basis_vector(k),
                )?;
                let what = format!(
                    "[{},{}]",
                    self.table.labels()[j],
                    self.table.labels()[k]
                );
                demand_annihilated(v, &what)?;
            }
            for i in 0..n {
                let a = self.table.bracket(
                    &self.table.basis_vector(j),
                    &self.table.basis_vector(i),
                )?;
                let b = self.table.bracket(
                    &self.table.basis_vector(i),
                    &self.table.basis_vector(j),
                )?;
                let v: Vec<Scalar> = a.iter().zip(&b).map(|(p, q)| p.add(q)).collect();
                let what = format!(
                    "[{x},{e}]+[{e},{x}]",
                    x = self.table.labels()[j],
                    e = self.table.labels()[i]
                );
                demand_annihilated(v, &what)?;
            }
        }
        Ok(ResidualSystem { equations })
    }

    /// Triangular substitution set from the linear equations `r*v + p = 0`
    /// (v absent from p, v unpinned); at each step the
    /// reverse-lexicographically last eligible variable is eliminated, so
    /// `d* > c* > b* > a*`.
    pub fn auto_solve_linear(&self, system: &ResidualSystem) -> Vec<(String, Scalar)> {
        let mut eqs: Vec<Scalar> = system.equations.iter().map(|e| e.lhs.clone()).collect();
        let mut solved: BTreeSet<String> = BTreeSet::new();
        let mut subs: Vec<(String, Scalar)> = Vec::new();
        loop {
            let mut best: Option<(String, Rational, Scalar)> = None;
            for eq in &eqs {
                for v in eq.linear_vars() {
                    if self.nonzero_pins.contains(&v) || solved.contains(&v) {
                        continue;
                    }
                    if best.as_ref().is_none_or(|(bv, _, _)| v > *bv) {
                        let (r, rest) = eq.isolate_linear_in(&v).unwrap();
                        best = Some((v, r, rest));
                    }
                }
            }
            let Some((v, r, rest)) = best else { break };
            let repl = rest.neg().scale(&(Rational::from_integer(1.into()) / r));
            let one_sub = BTreeMap::from([(v.clone(), repl.clone())]);
            for eq in &mut eqs {
                *eq = eq.substitute(&one_sub);
            }
            for (_, rhs) in &mut subs {
                *rhs = rhs.substitute(&one_sub);
            }
            solved.insert(v.clone());
            subs.push((v, repl));
        }
        subs
    }

    /// Apply substitutions to the whole table, accumulating bindings; a new
    /// snapshot is returned and re-application is a no-op.
    pub fn substitute(&self, subs: &[(String, Scalar)]) -> Result<GenericExtension> {
        // resolve to closed form, detecting cycles
        let raw: BTreeMap<String, Scalar> = subs.iter().cloned().collect();
        let mut closed: BTreeMap<String, Scalar> = BTreeMap::new();
        for (v, rhs) in &raw {
            let mut cur = rhs.clone();
            for _ in 0..=raw.len() {
                if cur.vars().iter().all(|w| !raw.contains_key(w)) {
                    break;
                }
                cur = cur.substitute(&raw);
            }
            if cur.vars().iter().any(|w| !raw.contains_key(w)) && cur.vars().contains(v) {
                return Err(Error::CyclicSubstitution(v.clone()));
            }
            if cur.vars().iter().any(|w| raw.contains_key(w)) {
                return Err(Error::CyclicSubstitution(v.clone()));
            }
            closed.insert(v.clone(), cur);
        }
        let mut out = self.clone();
        let entries: Vec<((usize, usize), Vec<Scalar>)> = out
            .table
            .products()
            .iter()
            .map(|(k, v)| (*k, v.iter().map(|s| s.substitute(&closed)).collect()))
            .collect();
        for ((i, j), v) in entries {
            out.table.set_product(i, j, v);
        }
        for (_, rhs) in out.bindings.iter_mut() {
            *rhs = rhs.substitute(&closed);
        }
        for (v, rhs) in closed {
            out.bindings.insert(v, rhs);
        }
        Ok(out)
    }

    /// A contradiction visible in the system: a nonzero constant equation,
    /// or an equation forcing a pinned-nonzero variable to vanish.
    pub fn contradiction(&self, system: &ResidualSystem) -> Option<String> {
        for eq in &system.equations {
            if let Some(r) = eq.lhs.as_rational() {
                if !r.is_zero() {
                    return Some(format!("{} is a nonzero constant", eq.lhs));
                }
            }
            for v in &self.nonzero_pins {
                if let Some((_, rest)) = eq.lhs.isolate_linear_in(v) {
                    if rest.is_zero() {
                        return Some(format!("{v} = 0 contradicts the pin {v} != 0"));
                    }
                }
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{self, FamilyId};

    fn q(v: i64) -> Rational {
        Rational::from_integer(v.into())
    }

    fn m1(n: usize, delta: i64) -> Algebra {
        catalog::make(
            FamilyId::M1,
            n,
            &BTreeMap::from([("delta".to_string(), q(delta))]),
        )
        .unwrap()
    }

    #[test]
    fn cap_is_enforced() {
        let n11 = m1(7, 1);
        assert!(matches!(
            build_generic_extension(&n11, ExtensionPattern::M1Delta, 2),
            Err(Error::CapExceeded { got: 2, cap: 1 })
        ));
        let n10 = m1(7, 0);
        assert!(build_generic_extension(&n10, ExtensionPattern::M1Delta, 2).is_ok());
    }

    #[test]
    fn m11_nonexistence_replayed() {
        let ext = build_generic_extension(&m1(7, 1), ExtensionPattern::M1Delta, 1).unwrap();
        let mut ext = ext;
        ext.pin_nonzero("a1");

        let s1 = ext.residual_system(&[("e1", "x", "e1")]).unwrap();
        assert!(s1
            .equations
            .iter()
            .any(|e| e.lhs == Scalar::var("c1_1_1").add(&Scalar::var("a1"))));
        let subs = ext.auto_solve_linear(&s1);
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].0, "c1_1_1");
        assert_eq!(subs[0].1, Scalar::var("a1").neg());
        let ext = ext.substitute(&subs).unwrap();

        let s2 = ext.residual_system(&[("e2", "x", "e2")]).unwrap();
        assert!(s2
            .equations
            .iter()
            .any(|e| e.lhs == Scalar::var("c1_2_2").add(&Scalar::var("a1").scale(&q(3)))));
        let subs = ext.auto_solve_linear(&s2);
        let ext = ext.substitute(&subs).unwrap();

        let s3 = ext.residual_system(&[("x", "e1", "e2")]).unwrap();
        let found = ext.contradiction(&s3).expect("a1 must be forced to zero");
        assert!(found.contains("a1"));
    }

    #[test]
    fn m31_extension_contradiction() {
        // replay of the analogous non-existence for M^{3,1}: pinning the
        // diagonal parameter nonzero and closing under a handful of
        // identities forces it to zero anyway.
        let n31 = catalog::make(FamilyId::M31, 6, &BTreeMap::new()).unwrap();
        let mut ext = build_generic_extension(&n31, ExtensionPattern::M31, 1).unwrap();
        ext.pin_nonzero("a1");
        let mut ext = ext;
        for round in 0..6 {
            let sys = ext
                .residual_system(&[
                    ("e1", "x", "e1"),
                    ("e1", "x", "e2"),
                    ("e1", "x", "e3"),
                    ("e1", "x", "e4"),
                    ("x", "e2", "e2"),
                    ("x", "e2", "e1"),
                    ("x", "e3", "e1"),
                    ("x", "e4", "e1"),
                    ("x", "e1", "e2"),
                ])
                .unwrap();
            if let Some(c) = ext.contradiction(&sys) {
                assert!(c.contains("a1"));
                return;
            }
            let subs = ext.auto_solve_linear(&sys);
            assert!(!subs.is_empty(), "no progress in round {round}");
            ext = ext.substitute(&subs).unwrap();
        }
        panic!("contradiction not reached");
    }

    #[test]
    fn substitution_is_idempotent_and_detects_cycles() {
        let ext = build_generic_extension(&m1(7, 0), ExtensionPattern::M1Delta, 1).unwrap();
        let subs = vec![("c1_1_1".to_string(), Scalar::var("a1").neg())];
        let once = ext.substitute(&subs).unwrap();
        let twice = once.substitute(&subs).unwrap();
        assert_eq!(once.table().products(), twice.table().products());

        let cyc = vec![
            ("a1".to_string(), Scalar::var("b2")),
            ("b2".to_string(), Scalar::var("a1").neg()),
        ];
        assert!(matches!(
            ext.substitute(&cyc),
            Err(Error::CyclicSubstitution(_))
        ));
    }

    #[test]
    fn auto_solve_preserves_solutions_and_skips_nonlinear() {
        let ext = build_generic_extension(&m1(7, 0), ExtensionPattern::M1Delta, 1).unwrap();
        let sys = ResidualSystem {
            equations: vec![
                Equation {
                    lhs: Scalar::var("a1").mul(&Scalar::var("c1_2_7")).scale(&q(2)),
                    provenance: "test".to_string(),
                    component: "e7".to_string(),
                },
                Equation {
                    lhs: Scalar::var("b2").add(&Scalar::from_int(5)),
                    provenance: "test".to_string(),
                    component: "e2".to_string(),
                },
            ],
        };
        let subs = ext.auto_solve_linear(&sys);
        assert_eq!(subs, vec![("b2".to_string(), Scalar::from_int(-5))]);
    }

    #[test]
    fn empty_residual_on_zero_and_annihilator_constraints_exist() {
        let ext = build_generic_extension(&m1(7, 0), ExtensionPattern::M1Delta, 1).unwrap();
        let ann = ext.annihilator_constraints().unwrap();
        assert!(!ann.is_empty());
        assert!(ext
            .residual_system(&[("nope", "x", "e1")])
            .is_err());
    }

    #[test]
    fn full_pattern_on_abelian() {
        let ext =
            build_generic_extension(&Algebra::new(2), ExtensionPattern::Full, 1).unwrap();
        let vars = ext.vars();
        assert!(vars.contains("a1_1"));
        assert!(vars.contains("c1_2_1"));
        assert!(vars.contains("d11_2"));
    }

    #[test]
    fn instantiated_residuals_match_symbolic_view() {
        // bind every remaining variable with fixed rationals: a triple has a
        // zero symbolic residual iff the instantiated algebra does.
        let ext = build_generic_extension(&m1(7, 0), ExtensionPattern::M1Delta, 1).unwrap();
        let sys = ext.residual_system(&[("e1", "x", "e1")]).unwrap();
        let subs = ext.auto_solve_linear(&sys);
        let ext = ext.substitute(&subs).unwrap();
        let mut bind = BTreeMap::new();
        for (i, v) in ext.vars().into_iter().enumerate() {
            bind.insert(v, Rational::new((i as i64 % 5 + 1).into(), 3.into()));
        }
        let inst = ext.table().instantiate(&bind);
        let i1 = inst.basis_vector(0);
        let x = inst.basis_vector(7);
        let r = inst.leibniz_residual(&i1, &x, &i1).unwrap();
        assert!(r.iter().all(|s| s.is_zero()));
    }
}

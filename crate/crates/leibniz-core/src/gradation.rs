//! Connected Z-gradations: verification of a weight assignment and a
//! generator-propagation search for gradations of maximum length.

use std::collections::BTreeSet;

use crate::algebra::{product_subspace, Algebra, Subspace};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Gradation {
    /// One weight per basis vector.
    pub weights: Vec<i64>,
}

impl Gradation {
    pub fn new(weights: Vec<i64>) -> Self {
        Gradation { weights }
    }

    pub fn occupied(&self) -> BTreeSet<i64> {
        self.weights.iter().copied().collect()
    }

    /// `max - min + 1`; 0 for the empty algebra.
    pub fn length(&self) -> usize {
        match (self.weights.iter().min(), self.weights.iter().max()) {
            (Some(lo), Some(hi)) => (hi - lo + 1) as usize,
            _ => 0,
        }
    }

    /// Translate so the minimum weight is 1 (idempotent).
    pub fn canonicalize(&self) -> Gradation {
        let shift = match self.weights.iter().min() {
            Some(lo) => 1 - lo,
            None => 0,
        };
        Gradation::new(self.weights.iter().map(|w| w + shift).collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GradationCheck {
    Valid(usize),
    /// 1-based product (i, j, k) with `c_{ij}^k != 0` but
    /// `w_k != w_i + w_j`; the reported triple is minimal in (k, i, j) order.
    Invalid(usize, usize, usize),
    Disconnected(i64),
}

/// Compatibility is a support condition, so polynomial coefficients are
/// fine: any nonzero scalar on a weight-incompatible product violates.
pub fn verify_gradation(a: &Algebra, weights: &[i64]) -> Result<GradationCheck> {
    let n = a.dim();
    if weights.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: weights.len(),
        });
    }
    let mut worst: Option<(usize, usize, usize)> = None;
    for ((i, j), v) in a.products() {
        for (k, s) in v.iter().enumerate() {
            if !s.is_zero() && weights[k] != weights[*i] + weights[*j] {
                let key = (k + 1, i + 1, j + 1);
                if worst.is_none_or(|w| key < w) {
                    worst = Some(key);
                }
            }
        }
    }
    if let Some((k, i, j)) = worst {
        return Ok(GradationCheck::Invalid(i, j, k));
    }
    let g = Gradation::new(weights.to_vec());
    let occ = g.occupied();
    if let (Some(&lo), Some(&hi)) = (occ.first(), occ.last()) {
        for w in lo..=hi {
            if !occ.contains(&w) {
                return Ok(GradationCheck::Disconnected(w));
            }
        }
    }
    Ok(GradationCheck::Valid(g.length()))
}

const NODE_BUDGET: usize = 1_000_000;

/// Search for a connected gradation of length exactly `dim(A)` with weights
/// in `[-B, B]` (B defaults to `2 * dim`). Weights are chosen on a basis of
/// `L/L^2` and propagated through the nonzero products; ties are broken by
/// the lexicographically smallest canonical weight sequence.
pub fn search_max_length_gradation(
    a: &Algebra,
    weight_bound: Option<i64>,
) -> Result<Option<Gradation>> {
    search_max_length_gradation_with_budget(a, weight_bound, NODE_BUDGET)
}

pub fn search_max_length_gradation_with_budget(
    a: &Algebra,
    weight_bound: Option<i64>,
    budget: usize,
) -> Result<Option<Gradation>> {
    a.require_rational()?;
    let n = a.dim();
    if n == 0 {
        return Ok(None);
    }
    // support triples (i, j, k), 0-based
    let mut support: Vec<(usize, usize, usize)> = Vec::new();
    for ((i, j), v) in a.products() {
        for (k, s) in v.iter().enumerate() {
            if !s.is_zero() {
                support.push((*i, *j, k));
            }
        }
    }
    if support.is_empty() {
        // abelian: no compatibility constraints at all
        return Ok(Some(Gradation::new((1..=n as i64).collect())));
    }
    let bound = weight_bound.unwrap_or(2 * n as i64);
    if bound < n as i64 {
        return Err(Error::BadParam {
            param: "weight_bound".to_string(),
            constraint: "must be at least dim".to_string(),
        });
    }

    // generator axes: coordinate vectors outside L^2
    let full = Subspace::full(n);
    let sq = product_subspace(a, &full, &full)?;
    let mut gens: Vec<usize> = Vec::new();
    for i in 0..n {
        let mut axis =
            vec![crate::scalar::Rational::from_integer(0.into()); n];
        axis[i] = crate::scalar::Rational::from_integer(1.into());
        if !sq.contains(&axis) {
            gens.push(i);
        }
    }
    if gens.is_empty() {
        gens.push(0);
    }

    let mut nodes: usize = 0;
    let mut best: Option<Vec<i64>> = None;

    // odometer over generator weights
    let g = gens.len();
    let mut choice = vec![-bound; g];
    'outer: loop {
        nodes += 1;
        if nodes > budget {
            return Err(Error::BudgetExceeded { nodes });
        }
        if let Some(w) = propagate(n, &support, &gens, &choice, bound, budget, &mut nodes)? {
            let cand = Gradation::new(w);
            if cand.length() == n {
                if let GradationCheck::Valid(len) = verify_gradation(a, &cand.weights)? {
                    if len == n {
                        let canon = cand.canonicalize().weights;
                        if best.as_ref().is_none_or(|b| &canon < b) {
                            best = Some(canon);
                        }
                    }
                }
            }
        }
        // advance odometer
        for slot in (0..g).rev() {
            if choice[slot] < bound {
                choice[slot] += 1;
                continue 'outer;
            }
            choice[slot] = -bound;
            if slot == 0 {
                break 'outer;
            }
        }
    }
    Ok(best.map(Gradation::new))
}

/// Fixpoint propagation of `w_k = w_i + w_j` over the support, with the
/// generator axes pinned. Returns None on conflict or when some index
/// stays undetermined (such assignments cannot reach length n here, since
/// an unconstrained index admits no forced weight).
fn propagate(
    n: usize,
    support: &[(usize, usize, usize)],
    gens: &[usize],
    choice: &[i64],
    bound: i64,
    budget: usize,
    nodes: &mut usize,
) -> Result<Option<Vec<i64>>> {
    let mut w: Vec<Option<i64>> = vec![None; n];
    for (slot, &gi) in gens.iter().enumerate() {
        w[gi] = Some(choice[slot]);
    }
    loop {
        *nodes += 1;
        if *nodes > budget {
            return Err(Error::BudgetExceeded { nodes: *nodes });
        }
        let mut changed = false;
        for &(i, j, k) in support {
            match (w[i], w[j], w[k]) {
                (Some(a), Some(b), Some(c)) => {
                    if c != a + b {
                        return Ok(None);
                    }
                }
                (Some(a), Some(b), None) => {
                    let v = a + b;
                    if v.abs() > bound {
                        return Ok(None);
                    }
                    w[k] = Some(v);
                    changed = true;
                }
                (Some(a), None, Some(c)) => {
                    let v = c - a;
                    if v.abs() > bound {
                        return Ok(None);
                    }
                    w[j] = Some(v);
                    changed = true;
                }
                (None, Some(b), Some(c)) => {
                    let v = c - b;
                    if v.abs() > bound {
                        return Ok(None);
                    }
                    w[i] = Some(v);
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            break;
        }
    }
    if w.iter().any(|x| x.is_none()) {
        return Ok(None);
    }
    Ok(Some(w.into_iter().map(|x| x.unwrap()).collect()))
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
    fn m1_valid_weights() {
        let a = fam(FamilyId::M1, 7, &[("delta", 0)]);
        let w = [1, 3, 4, 5, 6, 7, 2];
        assert_eq!(verify_gradation(&a, &w).unwrap(), GradationCheck::Valid(7));
    }

    #[test]
    fn all_ones_invalid_at_minimal_target() {
        let a = fam(FamilyId::M1, 7, &[("delta", 0)]);
        let w = [1; 7];
        assert_eq!(
            verify_gradation(&a, &w).unwrap(),
            GradationCheck::Invalid(2, 1, 3)
        );
    }

    #[test]
    fn abelian_all_zero_is_valid_of_length_one() {
        let a = Algebra::new(4);
        assert_eq!(
            verify_gradation(&a, &[0, 0, 0, 0]).unwrap(),
            GradationCheck::Valid(1)
        );
    }

    #[test]
    fn disconnected_detected() {
        let a = Algebra::new(3);
        assert_eq!(
            verify_gradation(&a, &[1, 3, 1]).unwrap(),
            GradationCheck::Disconnected(2)
        );
    }

    #[test]
    fn canonicalization_is_idempotent_and_kills_translation() {
        let w: Vec<i64> = vec![1, 2, 3, 4, 5, 6, 7];
        let shifted: Vec<i64> = w.iter().map(|x| x - 5).collect();
        let g = Gradation::new(shifted).canonicalize();
        assert_eq!(g.weights, w);
        assert_eq!(g.canonicalize().weights, w);
    }

    #[test]
    fn search_finds_known_maximum_length_gradations() {
        let cases: Vec<(Algebra, Vec<i64>)> = vec![
            (fam(FamilyId::M4, 7, &[]), vec![1, 2, 3, 4, 5, 6, 7]),
            (fam(FamilyId::M31, 6, &[]), vec![1, 3, 4, 5, 6, 2]),
            (fam(FamilyId::M1, 7, &[("delta", 0)]), vec![1, 3, 4, 5, 6, 7, 2]),
            (fam(FamilyId::M2, 7, &[("lam", 0)]), vec![1, 2, 3, 4, 5, 6, 7]),
            (fam(FamilyId::M2, 7, &[("lam", 1)]), vec![1, 2, 3, 4, 5, 6, 7]),
            (Algebra::new(5), vec![1, 2, 3, 4, 5]),
        ];
        for (a, expect) in cases {
            let g = search_max_length_gradation(&a, None).unwrap().unwrap();
            assert_eq!(g.weights, expect);
            assert_eq!(
                verify_gradation(&a, &g.weights).unwrap(),
                GradationCheck::Valid(a.dim())
            );
        }
    }

    #[test]
    fn search_rejects_small_bound() {
        let a = fam(FamilyId::M4, 7, &[]);
        assert!(matches!(
            search_max_length_gradation(&a, Some(3)),
            Err(Error::BadParam { .. })
        ));
    }

    #[test]
    fn budget_is_enforced() {
        let a = fam(FamilyId::M1, 7, &[("delta", 1)]);
        assert!(matches!(
            search_max_length_gradation_with_budget(&a, None, 10),
            Err(Error::BudgetExceeded { .. })
        ));
    }
}

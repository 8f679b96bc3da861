//! Structure-constant presentation of a Leibniz algebra, the bracket, the
//! Leibniz residual, identity verification, and the change-of-basis engine.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::matrix::{rref_in_place, rref_nullspace, ExactMatrix};
use crate::scalar::{Rational, Scalar};

/// A finite-dimensional algebra given by its structure constants
/// `[e_i, e_j] = sum_k c_{ij}^k e_k`. Absent `(i, j)` keys mean the zero
/// product. Indices are 0-based internally; the 1-based helpers mirror the
/// usual `e_1..e_n` naming.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebra {
    dim: usize,
    labels: Vec<String>,
    products: BTreeMap<(usize, usize), Vec<Scalar>>,
    params: BTreeMap<String, Option<Rational>>,
}

impl Algebra {
    pub fn new(dim: usize) -> Self {
        Algebra {
            dim,
            labels: (1..=dim).map(|i| format!("e{i}")).collect(),
            products: BTreeMap::new(),
            params: BTreeMap::new(),
        }
    }

    pub fn with_labels(dim: usize, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), dim);
        Algebra {
            dim,
            labels,
            products: BTreeMap::new(),
            params: BTreeMap::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn params(&self) -> &BTreeMap<String, Option<Rational>> {
        &self.params
    }

    pub fn set_param(&mut self, name: &str, value: Option<Rational>) {
        self.params.insert(name.to_string(), value);
    }

    pub fn products(&self) -> &BTreeMap<(usize, usize), Vec<Scalar>> {
        &self.products
    }

    /// Set `[e_i, e_j]` (0-based) to the given coordinate vector.
    pub fn set_product(&mut self, i: usize, j: usize, v: Vec<Scalar>) {
        assert_eq!(v.len(), self.dim);
        if v.iter().all(|s| s.is_zero()) {
            self.products.remove(&(i, j));
        } else {
            self.products.insert((i, j), v);
        }
    }

    /// 1-based sparse assignment: `[e_i, e_j] = sum coeff * e_k`.
    /// Out-of-range targets (`k > n`) are dropped per the truncation
    /// convention; `k < 1` is rejected by the caller.
    pub fn put(&mut self, i1: usize, j1: usize, terms: &[(usize, Scalar)]) {
        assert!(i1 >= 1 && i1 <= self.dim && j1 >= 1 && j1 <= self.dim);
        let mut v = self
            .products
            .remove(&(i1 - 1, j1 - 1))
            .unwrap_or_else(|| vec![Scalar::zero(); self.dim]);
        for (k1, s) in terms {
            if *k1 >= 1 && *k1 <= self.dim {
                v[*k1 - 1] = v[*k1 - 1].add(s);
            }
        }
        self.set_product(i1 - 1, j1 - 1, v);
    }

    pub fn basis_product(&self, i: usize, j: usize) -> Option<&Vec<Scalar>> {
        self.products.get(&(i, j))
    }

    pub fn is_rational(&self) -> bool {
        self.products
            .values()
            .all(|v| v.iter().all(|s| s.is_rational()))
    }

    pub fn require_rational(&self) -> Result<()> {
        if self.is_rational() {
            Ok(())
        } else {
            Err(Error::PolynomialEntries)
        }
    }

    /// Bilinear extension of the structure table.
    pub fn bracket(&self, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>> {
        if u.len() != self.dim || v.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: if u.len() != self.dim { u.len() } else { v.len() },
            });
        }
        let mut out = vec![Scalar::zero(); self.dim];
        for ((i, j), w) in &self.products {
            if u[*i].is_zero() || v[*j].is_zero() {
                continue;
            }
            let c = u[*i].mul(&v[*j]);
            for (k, s) in w.iter().enumerate() {
                if !s.is_zero() {
                    out[k] = out[k].add(&c.mul(s));
                }
            }
        }
        Ok(out)
    }

    /// `L(x,y,z) = [x,[y,z]] - [[x,y],z] + [[x,z],y]`; the zero vector iff
    /// the triple satisfies the Leibniz identity.
    pub fn leibniz_residual(&self, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> Result<Vec<Scalar>> {
        let yz = self.bracket(y, z)?;
        let xy = self.bracket(x, y)?;
        let xz = self.bracket(x, z)?;
        let a = self.bracket(x, &yz)?;
        let b = self.bracket(&xy, z)?;
        let c = self.bracket(&xz, y)?;
        Ok((0..self.dim)
            .map(|k| a[k].sub(&b[k]).add(&c[k]))
            .collect())
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); self.dim];
        v[i] = Scalar::one();
        v
    }

    /// Check the Leibniz identity on all basis triples. Reports the
    /// lexicographically first failing triple (1-based indices).
    pub fn verify_leibniz(&self) -> LeibnizCheck {
        for i in 0..self.dim {
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let r = self
                        .leibniz_residual(
                            &self.basis_vector(i),
                            &self.basis_vector(j),
                            &self.basis_vector(k),
                        )
                        .expect("basis vectors have the right length");
                    if r.iter().any(|s| !s.is_zero()) {
                        return LeibnizCheck::Witness {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                            residual: r,
                        };
                    }
                }
            }
        }
        LeibnizCheck::Pass
    }

    /// True iff the table is antisymmetric: `c_{ij}^k = -c_{ji}^k`.
    pub fn is_lie(&self) -> bool {
        for ((i, j), v) in &self.products {
            let flipped = self.products.get(&(*j, *i));
            for (k, s) in v.iter().enumerate() {
                let other = flipped.map_or(Scalar::zero(), |w| w[k].clone());
                if !s.add(&other).is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// Substitute rational values for named parameters in all entries.
    pub fn instantiate(&self, bindings: &BTreeMap<String, Rational>) -> Algebra {
        let mut out = self.clone();
        out.products = self
            .products
            .iter()
            .map(|(k, v)| (*k, v.iter().map(|s| s.eval(bindings)).collect()))
            .collect();
        out.products.retain(|_, v: &mut Vec<Scalar>| v.iter().any(|s| !s.is_zero()));
        for (name, val) in bindings {
            if out.params.contains_key(name) {
                out.params.insert(name.clone(), Some(val.clone()));
            }
        }
        out
    }

    /// Express the same bilinear product in the basis `{P(e_i)}`. Requires
    /// `P` rational and invertible.
    pub fn apply_basis_change(&self, p: &LinearMap) -> Result<Algebra> {
        if p.dim() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.dim(),
            });
        }
        let pinv = p.inverse()?;
        let mut out = Algebra::with_labels(self.dim, self.labels.clone());
        out.params = self.params.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                let v = self.bracket(p.matrix().row(i), p.matrix().row(j))?;
                let w = pinv.matrix().apply_row(&v);
                out.set_product(i, j, w);
            }
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LeibnizCheck {
    Pass,
    Witness {
        i: usize,
        j: usize,
        k: usize,
        residual: Vec<Scalar>,
    },
}

impl LeibnizCheck {
    pub fn passed(&self) -> bool {
        matches!(self, LeibnizCheck::Pass)
    }
}

/// A linear self-map in the row convention: row `i` holds the image
/// coordinates of basis vector `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearMap {
    matrix: ExactMatrix,
}

impl LinearMap {
    pub fn new(matrix: ExactMatrix) -> Self {
        assert_eq!(matrix.rows(), matrix.cols(), "linear map must be square");
        LinearMap { matrix }
    }

    pub fn identity(n: usize) -> Self {
        LinearMap {
            matrix: ExactMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ExactMatrix {
        &self.matrix
    }

    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        self.matrix.apply_row(v)
    }

    /// Exact inverse via Gauss-Jordan on the augmented matrix. Rational
    /// entries only.
    pub fn inverse(&self) -> Result<LinearMap> {
        let n = self.dim();
        let grid = self.matrix.to_rational_grid()?;
        let mut aug: Vec<Vec<Rational>> = grid
            .into_iter()
            .enumerate()
            .map(|(i, mut row)| {
                for j in 0..n {
                    row.push(if i == j {
                        Rational::one()
                    } else {
                        Rational::zero()
                    });
                }
                row
            })
            .collect();
        let pivots = rref_in_place(&mut aug);
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &p)| p != i) {
            return Err(Error::SingularMap);
        }
        let inv_rows: Vec<Vec<Rational>> = aug.into_iter().map(|row| row[n..].to_vec()).collect();
        Ok(LinearMap::new(ExactMatrix::from_rational_rows(inv_rows)))
    }

    pub fn compose(&self, then: &LinearMap) -> LinearMap {
        // Row convention: (self then other)(v) = (v * self) * other.
        LinearMap::new(self.matrix.matmul(then.matrix()))
    }

    pub fn pow(&self, k: usize) -> LinearMap {
        let mut acc = LinearMap::identity(self.dim());
        for _ in 0..k {
            acc = acc.compose(self);
        }
        acc
    }

    pub fn is_zero(&self) -> bool {
        (0..self.dim()).all(|i| self.matrix.row(i).iter().all(|s| s.is_zero()))
    }
}

/// A subspace of coordinate space, stored as a canonical reduced-echelon
/// basis. Equality of subspaces is equality of representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subspace {
    ambient: usize,
    basis: Vec<Vec<Rational>>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: (0..ambient)
                .map(|i| {
                    let mut v = vec![Rational::zero(); ambient];
                    v[i] = Rational::one();
                    v
                })
                .collect(),
        }
    }

    pub fn from_spanning(ambient: usize, vectors: Vec<Vec<Rational>>) -> Self {
        let mut grid: Vec<Vec<Rational>> = vectors
            .into_iter()
            .inspect(|v| assert_eq!(v.len(), ambient))
            .collect();
        rref_in_place(&mut grid);
        grid.retain(|row| row.iter().any(|x| !x.is_zero()));
        Subspace {
            ambient,
            basis: grid,
        }
    }

    /// Span of the given 1-based coordinate axes.
    pub fn from_axes(ambient: usize, axes: &[usize]) -> Self {
        Subspace::from_spanning(
            ambient,
            axes.iter()
                .map(|&a| {
                    let mut v = vec![Rational::zero(); ambient];
                    v[a - 1] = Rational::one();
                    v
                })
                .collect(),
        )
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vec<Rational>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.coords(v).is_some()
    }

    pub fn contains_subspace(&self, other: &Subspace) -> bool {
        other.basis.iter().all(|v| self.contains(v))
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the span.
    pub fn coords(&self, v: &[Rational]) -> Option<Vec<Rational>> {
        assert_eq!(v.len(), self.ambient);
        // Pivot columns of an rref basis read coordinates off directly.
        let mut coords = Vec::with_capacity(self.basis.len());
        let mut residue = v.to_vec();
        for row in &self.basis {
            let p = row.iter().position(|x| x.is_one()).expect("rref basis row");
            let c = residue[p].clone();
            if !c.is_zero() {
                for (r, x) in residue.iter_mut().zip(row) {
                    *r -= &c * x;
                }
            }
            coords.push(c);
        }
        if residue.iter().all(|x| x.is_zero()) {
            Some(coords)
        } else {
            None
        }
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient);
        let mut vs = self.basis.clone();
        vs.extend(other.basis.clone());
        Subspace::from_spanning(self.ambient, vs)
    }
}

/// Canonical span of `[U, V]`: brackets of basis pairs, reduced. Requires a
/// rational table.
pub fn product_subspace(a: &Algebra, u: &Subspace, v: &Subspace) -> Result<Subspace> {
    if u.ambient_dim() != a.dim() || v.ambient_dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: if u.ambient_dim() != a.dim() {
                u.ambient_dim()
            } else {
                v.ambient_dim()
            },
        });
    }
    a.require_rational()?;
    let mut spans = Vec::new();
    for ub in u.basis() {
        let us: Vec<Scalar> = ub.iter().map(|r| Scalar::Rat(r.clone())).collect();
        for vb in v.basis() {
            let vs: Vec<Scalar> = vb.iter().map(|r| Scalar::Rat(r.clone())).collect();
            let w = a.bracket(&us, &vs)?;
            spans.push(
                w.into_iter()
                    .map(|s| s.as_rational().expect("rational table").clone())
                    .collect(),
            );
        }
    }
    Ok(Subspace::from_spanning(a.dim(), spans))
}

/// Rank of the span of coordinate vectors; convenience for dimension counts.
pub fn span_dim(ambient: usize, vectors: Vec<Vec<Rational>>) -> usize {
    Subspace::from_spanning(ambient, vectors).dim()
}

/// Rational rank of a scalar matrix, erroring on polynomial entries.
pub fn rational_rank(m: &ExactMatrix) -> Result<usize> {
    Ok(rref_nullspace(m)?.rank)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    /// The rebased table of M^{1,delta} at the given dimension.
    pub fn m1(n: usize, delta: i64) -> Algebra {
        let mut a = Algebra::new(n);
        a.put(1, 1, &[(n, Scalar::one())]);
        for i in 2..=n - 2 {
            a.put(i, 1, &[(i + 1, Scalar::one())]);
        }
        if delta != 0 {
            for i in 2..=n - 4 {
                a.put(i, 2, &[(i + 3, Scalar::from_int(delta))]);
            }
        }
        a
    }

    fn cross_product() -> Algebra {
        let mut a = Algebra::new(3);
        a.put(1, 2, &[(3, Scalar::one())]);
        a.put(2, 1, &[(3, Scalar::from_int(-1))]);
        a.put(2, 3, &[(1, Scalar::one())]);
        a.put(3, 2, &[(1, Scalar::from_int(-1))]);
        a.put(3, 1, &[(2, Scalar::one())]);
        a.put(1, 3, &[(2, Scalar::from_int(-1))]);
        a
    }

    fn unit(n: usize, i1: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); n];
        v[i1 - 1] = Scalar::one();
        v
    }

    #[test]
    fn bracket_on_m1_table() {
        let a = m1(7, 0);
        let r = a.bracket(&unit(7, 2), &unit(7, 1)).unwrap();
        assert_eq!(r, unit(7, 3));
        let zero = vec![Scalar::zero(); 7];
        assert_eq!(a.bracket(&zero, &unit(7, 1)).unwrap(), zero);
    }

    #[test]
    fn residual_vanishes_on_m1() {
        let a = m1(7, 0);
        let r = a
            .leibniz_residual(&unit(7, 2), &unit(7, 1), &unit(7, 1))
            .unwrap();
        assert!(r.iter().all(|s| s.is_zero()));
        assert!(a.verify_leibniz().passed());
    }

    #[test]
    fn corrupted_m1_reports_first_witness() {
        let mut a = m1(7, 0);
        a.put(2, 2, &[(3, Scalar::one())]);
        // Direct expansion: L(e2,e2,e1) = [e2,e3] - [e3,e1] + [e3,e2] = -e4.
        let r = a
            .leibniz_residual(&unit(7, 2), &unit(7, 2), &unit(7, 1))
            .unwrap();
        let mut expect = vec![Scalar::zero(); 7];
        expect[3] = Scalar::from_int(-1);
        assert_eq!(r, expect);
        // Lexicographically first failure is (2,1,2):
        // L(e2,e1,e2) = 0 - [e3,e2] + [e3,e1] = e4.
        match a.verify_leibniz() {
            LeibnizCheck::Witness { i, j, k, residual } => {
                assert_eq!((i, j, k), (2, 1, 2));
                assert_eq!(residual[3], Scalar::one());
            }
            LeibnizCheck::Pass => panic!("expected witness"),
        }
    }

    #[test]
    fn lie_checks() {
        assert!(!m1(7, 0).is_lie()); // [e1,e1] = e7 != 0
        assert!(cross_product().is_lie());
        assert!(Algebra::new(4).is_lie());
        assert!(cross_product().verify_leibniz().passed());
    }

    #[test]
    fn identity_change_is_identity() {
        let a = m1(7, 1);
        let b = a.apply_basis_change(&LinearMap::identity(7)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn basis_change_round_trip() {
        let a = m1(6, 1);
        let mut m = ExactMatrix::identity(6);
        m.set(0, 2, Scalar::from_int(2));
        m.set(3, 5, Scalar::from_frac(1, 3));
        let p = LinearMap::new(m);
        let b = a.apply_basis_change(&p).unwrap();
        let back = b.apply_basis_change(&p.inverse().unwrap()).unwrap();
        assert_eq!(a, back);
        assert!(b.verify_leibniz().passed());
    }

    #[test]
    fn singular_map_rejected() {
        let a = m1(6, 0);
        let p = LinearMap::new(ExactMatrix::zeros(6, 6));
        assert_eq!(a.apply_basis_change(&p).unwrap_err(), Error::SingularMap);
    }

    #[test]
    fn product_subspace_of_full() {
        let a = m1(7, 0);
        let l = Subspace::full(7);
        let sq = product_subspace(&a, &l, &l).unwrap();
        assert_eq!(sq.dim(), 5);
        assert_eq!(sq, Subspace::from_axes(7, &[3, 4, 5, 6, 7]));
        let z = Subspace::zero(7);
        assert!(product_subspace(&a, &z, &l).unwrap().is_zero());
        let ab = Algebra::new(4);
        assert!(product_subspace(&ab, &Subspace::full(4), &Subspace::full(4))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn subspace_coords() {
        let s = Subspace::from_spanning(3, vec![vec![q(1), q(2), q(0)], vec![q(0), q(0), q(3)]]);
        assert!(s.contains(&[q(2), q(4), q(5)]));
        assert!(!s.contains(&[q(1), q(0), q(0)]));
    }
}

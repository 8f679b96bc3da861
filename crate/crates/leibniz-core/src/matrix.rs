//! Dense matrices over [`Scalar`] with exact Gauss-Jordan elimination.
//!
//! Row reduction, nullspace and linear solve are defined for rational
//! entries only; matrices with polynomial entries are rejected with
//! [`Error::PolynomialEntries`]. Pivoting is deterministic: the first
//! nonzero entry in column order.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Scalar>,
}

impl ExactMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        ExactMatrix {
            rows,
            cols,
            entries: vec![Scalar::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        assert!(rows.iter().all(|x| x.len() == c), "ragged rows");
        ExactMatrix {
            rows: r,
            cols: c,
            entries: rows.into_iter().flatten().collect(),
        }
    }

    pub fn from_rational_rows(rows: Vec<Vec<Rational>>) -> Self {
        Self::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(Scalar::Rat).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_rational(&self) -> bool {
        self.entries.iter().all(|e| e.is_rational())
    }

    pub fn to_rational_grid(&self) -> Result<Vec<Vec<Rational>>> {
        let mut out = Vec::with_capacity(self.rows);
        for i in 0..self.rows {
            let mut row = Vec::with_capacity(self.cols);
            for j in 0..self.cols {
                row.push(
                    self.get(i, j)
                        .as_rational()
                        .ok_or(Error::PolynomialEntries)?
                        .clone(),
                );
            }
            out.push(row);
        }
        Ok(out)
    }

    pub fn matmul(&self, other: &ExactMatrix) -> ExactMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = ExactMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let v = out.get(i, j).add(&a.mul(b));
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Row-vector times matrix: `v * M`.
    pub fn apply_row(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.rows);
        let mut out = vec![Scalar::zero(); self.cols];
        for (i, vi) in v.iter().enumerate() {
            if vi.is_zero() {
                continue;
            }
            for j in 0..self.cols {
                let e = self.get(i, j);
                if !e.is_zero() {
                    out[j] = out[j].add(&vi.mul(e));
                }
            }
        }
        out
    }

    pub fn trace(&self) -> Scalar {
        assert_eq!(self.rows, self.cols);
        let mut t = Scalar::zero();
        for i in 0..self.rows {
            t = t.add(self.get(i, i));
        }
        t
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RrefResult {
    pub rref: ExactMatrix,
    pub rank: usize,
    pub pivot_cols: Vec<usize>,
    pub nullspace: Vec<Vec<Rational>>,
}

/// Reduced row echelon form of a rational grid, in place. Returns pivot
/// column indices.
pub fn rref_in_place(m: &mut [Vec<Rational>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        // First nonzero entry in column order.
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].recip();
        for j in c..cols {
            let v = &m[r][j] * &inv;
            m[r][j] = v;
        }
        for i in 0..rows {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in c..cols {
                    let v = &m[i][j] - &f * &m[r][j];
                    m[i][j] = v;
                }
                m[i][c] = Rational::zero();
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// RREF, rank, and a deterministic nullspace basis. The nullspace vectors
/// carry a unit entry at their free column, free columns in ascending order.
pub fn rref_nullspace(m: &ExactMatrix) -> Result<RrefResult> {
    let mut grid = m.to_rational_grid()?;
    let pivots = rref_in_place(&mut grid);
    let rank = pivots.len();
    let cols = m.cols();
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut nullspace = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -grid[r][f].clone();
        }
        nullspace.push(v);
    }
    Ok(RrefResult {
        rref: ExactMatrix::from_rational_rows(grid),
        rank,
        pivot_cols: pivots,
        nullspace,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearSolution {
    pub particular: Vec<Rational>,
    pub nullspace: Vec<Vec<Rational>>,
}

/// Solve `x * 0 + M x = rhs` for column vector x; returns one particular
/// solution plus the nullspace when consistent, `None` when inconsistent.
pub fn solve_linear(m: &ExactMatrix, rhs: &[Rational]) -> Result<Option<LinearSolution>> {
    if rhs.len() != m.rows() {
        return Err(Error::DimensionMismatch {
            expected: m.rows(),
            got: rhs.len(),
        });
    }
    let mut grid = m.to_rational_grid()?;
    for (row, b) in grid.iter_mut().zip(rhs) {
        row.push(b.clone());
    }
    let pivots = rref_in_place(&mut grid);
    let cols = m.cols();
    // A pivot in the augmented column means inconsistency.
    if pivots.contains(&cols) {
        return Ok(None);
    }
    let mut particular = vec![Rational::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        particular[p] = grid[r][cols].clone();
    }
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    let mut nullspace = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![Rational::zero(); cols];
        v[f] = Rational::one();
        for (r, &p) in pivots.iter().enumerate() {
            v[p] = -grid[r][f].clone();
        }
        nullspace.push(v);
    }
    Ok(Some(LinearSolution {
        particular,
        nullspace,
    }))
}

//! Lower central and derived series, nilpotency and solvability tests, the
//! quasi-filiform condition, and the right annihilator.

use num_traits::Zero;

use crate::algebra::{product_subspace, Algebra, Subspace};
use crate::error::Result;
use crate::matrix::{rref_nullspace, ExactMatrix};
use crate::scalar::{Rational, Scalar};

/// `L^1 = L`, `L^{k+1} = [L^k, L]`; stops at the first repeat or zero.
pub fn lower_central_series(a: &Algebra) -> Result<Vec<Subspace>> {
    a.require_rational()?;
    let full = Subspace::full(a.dim());
    let mut series = vec![full.clone()];
    loop {
        let prev = series.last().unwrap();
        if prev.is_zero() {
            break;
        }
        let next = product_subspace(a, prev, &full)?;
        if &next == prev {
            break;
        }
        series.push(next);
    }
    Ok(series)
}

/// `L^{[1]} = L`, `L^{[s+1]} = [L^{[s]}, L^{[s]}]`.
pub fn derived_series(a: &Algebra) -> Result<Vec<Subspace>> {
    a.require_rational()?;
    let mut series = vec![Subspace::full(a.dim())];
    loop {
        let prev = series.last().unwrap();
        if prev.is_zero() {
            break;
        }
        let next = product_subspace(a, prev, prev)?;
        if &next == prev {
            break;
        }
        series.push(next);
    }
    Ok(series)
}

pub fn series_dims(series: &[Subspace]) -> Vec<usize> {
    series.iter().map(|s| s.dim()).collect()
}

pub fn is_nilpotent(a: &Algebra) -> Result<bool> {
    Ok(lower_central_series(a)?.last().unwrap().is_zero())
}

pub fn is_solvable(a: &Algebra) -> Result<bool> {
    Ok(derived_series(a)?.last().unwrap().is_zero())
}

/// Nilpotency of the subalgebra spanned by a subspace: the series
/// `U^1 = U`, `U^{k+1} = [U^k, U]` reaches zero. The subspace must be
/// closed under its own bracket for the notion to make sense; closure is
/// checked by the first product step staying inside `U`.
pub fn is_nilpotent_subalgebra(a: &Algebra, u: &Subspace) -> Result<bool> {
    a.require_rational()?;
    let mut cur = u.clone();
    loop {
        if cur.is_zero() {
            return Ok(true);
        }
        let next = product_subspace(a, &cur, u)?;
        if next == cur {
            return Ok(false);
        }
        cur = next;
    }
}

/// Quasi-filiform: `L^{n-2} != 0` and `L^{n-1} = 0`. Requires `n >= 3`.
pub fn is_quasi_filiform(a: &Algebra) -> Result<bool> {
    let n = a.dim();
    if n < 3 {
        return Ok(false);
    }
    let series = lower_central_series(a)?;
    // series[k] = L^{k+1} while it keeps descending; once stabilized at
    // zero the remaining powers are zero, otherwise nonzero.
    let power_dim = |k: usize| -> usize {
        if k - 1 < series.len() {
            series[k - 1].dim()
        } else {
            series.last().unwrap().dim()
        }
    };
    Ok(power_dim(n - 2) != 0 && power_dim(n - 1) == 0)
}

/// `Ann_r(L) = {y : [x, y] = 0 for all x}`, the nullspace of the stacked
/// left-multiplication matrices.
pub fn right_annihilator(a: &Algebra) -> Result<Subspace> {
    a.require_rational()?;
    let n = a.dim();
    // Row (i, k), column j: coefficient of e_k in [e_i, e_j].
    let mut m = ExactMatrix::zeros(n * n, n);
    for ((i, j), v) in a.products() {
        for (k, s) in v.iter().enumerate() {
            if !s.is_zero() {
                m.set(i * n + k, *j, s.clone());
            }
        }
    }
    let r = rref_nullspace(&m)?;
    Ok(Subspace::from_spanning(n, r.nullspace))
}

/// Exact membership of `v` (rational coordinates) in the right annihilator.
pub fn in_right_annihilator(a: &Algebra, v: &[Rational]) -> Result<bool> {
    let ann = right_annihilator(a)?;
    Ok(ann.contains(v))
}

/// Dimension of `L / L^2`, the number of generators.
pub fn generator_count(a: &Algebra) -> Result<usize> {
    let full = Subspace::full(a.dim());
    let sq = product_subspace(a, &full, &full)?;
    Ok(a.dim() - sq.dim())
}

/// Convenience: rational coordinate vector from scalar coordinates.
pub fn rational_coords(v: &[Scalar]) -> Option<Vec<Rational>> {
    v.iter().map(|s| s.as_rational().cloned()).collect()
}

/// True iff the vector is exactly zero.
pub fn is_zero_vec(v: &[Rational]) -> bool {
    v.iter().all(|x| x.is_zero())
}

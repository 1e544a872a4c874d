//! Integer lattices: the scaled recovery lattice, exact LLL reduction,
//! Babai nearest-plane and exact CVP by enumeration.
//!
//! The recovery lattice has rational entries `1/2^(n+1)` in its defining
//! matrix; the whole lattice (and every target) is multiplied by
//! `2^(n+1)` so that all arithmetic stays over the integers. Distance
//! comparisons are scale-invariant.

mod cvp;
mod lll;

pub use cvp::{cvp_babai, cvp_exact, cvp_exact_with_limit, CvpSolution, DEFAULT_ENUM_LIMIT};
pub use lll::{lll_reduce, ReducedBasis};

use num_traits::{One, Signed, Zero};

use crate::poly::ExponentSet;
use crate::ring::RingModulus;
use crate::scalar::{Scalar, ScalarOps};
use crate::{Error, Int, Result};

/// Square integer matrix whose rows are lattice basis vectors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Matrix<S = Int> {
    rows: Vec<Vec<S>>,
}

/// Concrete arbitrary-precision matrix used by the recovery pipeline.
pub type IntegerMatrix = Matrix<Int>;

impl<S> Matrix<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    pub fn from_rows(rows: Vec<Vec<S>>) -> Self {
        assert!(!rows.is_empty(), "matrix must be nonempty");
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix { rows }
    }

    pub fn identity(n: usize) -> Self {
        let mut rows = vec![vec![S::zero(); n]; n];
        for (i, row) in rows.iter_mut().enumerate() {
            row[i] = S::one();
        }
        Matrix { rows }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<S>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.rows[i]
    }

    /// The lattice point `sum_i coeffs[i] * row_i`.
    pub fn combination(&self, coeffs: &[S]) -> Vec<S> {
        assert_eq!(coeffs.len(), self.dim());
        let mut out = vec![S::zero(); self.dim()];
        for (c, row) in coeffs.iter().zip(&self.rows) {
            for (acc, v) in out.iter_mut().zip(row) {
                *acc = &*acc + &(c * v);
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination; exact.
    pub fn determinant(&self) -> S {
        let n = self.dim();
        let mut a: Vec<Vec<S>> = self.rows.clone();
        let mut denom = S::one();
        let mut negate = false;
        for k in 0..n.saturating_sub(1) {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return S::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &(&a[i][j] * &a[k][k]) - &(&a[i][k] * &a[k][j]);
                    a[i][j] = num.div_floor(&denom);
                }
                a[i][k] = S::zero();
            }
            denom = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    pub fn is_singular(&self) -> bool {
        self.determinant().is_zero()
    }

    /// Row-style Hermite normal form of a nonsingular square matrix:
    /// upper triangular, positive diagonal, entries above a pivot
    /// reduced into `[0, pivot)`. Two bases span the same lattice iff
    /// their HNFs agree.
    pub fn hermite_normal_form(&self) -> Result<Matrix<S>> {
        let n = self.dim();
        let mut a = self.rows.clone();
        for col in 0..n {
            loop {
                let pivot = (col..n)
                    .filter(|&r| !a[r][col].is_zero())
                    .min_by_key(|&r| a[r][col].abs());
                let Some(pivot) = pivot else {
                    return Err(Error::SingularBasis);
                };
                a.swap(col, pivot);
                let mut done = true;
                for r in col + 1..n {
                    if a[r][col].is_zero() {
                        continue;
                    }
                    let q = a[r][col].div_floor(&a[col][col]);
                    for j in 0..n {
                        let sub = &q * &a[col][j];
                        a[r][j] = &a[r][j] - &sub;
                    }
                    if !a[r][col].is_zero() {
                        done = false;
                    }
                }
                if done {
                    break;
                }
            }
            if a[col][col].is_negative() {
                for v in a[col].iter_mut() {
                    *v = -v.clone();
                }
            }
            for r in 0..col {
                let q = a[r][col].div_floor(&a[col][col]);
                if q.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let sub = &q * &a[col][j];
                    a[r][j] = &a[r][j] - &sub;
                }
            }
        }
        Ok(Matrix { rows: a })
    }

    /// Row-major decimal dump for external cross-checking.
    pub fn to_text(&self) -> String {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .map(|v| v.to_string())
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// The `(d+s)`-dimensional recovery lattice, scaled by `2^(n+1)` to be
/// integral. The first `d` rows are `q 2^(n+1)` times unit vectors; row
/// `d+j` carries `2^(n+1) t_i^{e_j}` in the first `d` columns and `1` in
/// column `d+j`.
#[derive(Debug, Clone)]
pub struct ScaledLattice {
    basis: IntegerMatrix,
    scale: Int,
    d: usize,
    s: usize,
    modulus: RingModulus,
}

impl ScaledLattice {
    pub fn basis(&self) -> &IntegerMatrix {
        &self.basis
    }

    /// The global scale `2^(n+1)`.
    pub fn scale(&self) -> &Int {
        &self.scale
    }

    pub fn num_points(&self) -> usize {
        self.d
    }

    pub fn sparsity(&self) -> usize {
        self.s
    }

    pub fn dim(&self) -> usize {
        self.d + self.s
    }

    pub fn modulus(&self) -> &RingModulus {
        &self.modulus
    }
}

/// Builds the scaled lattice for exponents `e` and unit points
/// `t_1, ..., t_d`.
pub fn build_lattice(
    m: &RingModulus,
    e: &ExponentSet,
    points: &[Int],
) -> Result<ScaledLattice> {
    if points.is_empty() {
        return Err(Error::EmptyInstance);
    }
    for t in points {
        if !m.is_unit(t) {
            return Err(Error::NonUnitPoint(t.to_string()));
        }
    }
    let d = points.len();
    let s = e.sparsity();
    let n = d + s;
    let scale: Int = Int::one() << (m.bit_length() + 1);
    let q_scaled = m.q() * &scale;

    let mut rows = vec![vec![Int::zero(); n]; n];
    for i in 0..d {
        rows[i][i] = q_scaled.clone();
    }
    for (j, exp) in e.exponents().iter().enumerate() {
        for (i, t) in points.iter().enumerate() {
            rows[d + j][i] = m.pow_mod(t, exp) * &scale;
        }
        rows[d + j][d + j] = Int::one();
    }

    Ok(ScaledLattice {
        basis: Matrix::from_rows(rows),
        scale,
        d,
        s,
        modulus: m.clone(),
    })
}

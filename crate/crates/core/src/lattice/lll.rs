//! Exact LLL reduction over the integers.
//!
//! This is the all-integer formulation: instead of rational
//! Gram-Schmidt data it maintains the sub-determinants
//! `d_i = det Gram(b_1..b_i)` and the scaled coefficients
//! `lambda_{i,j} = d_j mu_{i,j}`, all of which stay integral. The
//! rational Gram-Schmidt values are recovered on demand as
//! `mu = lambda/d` and `|b*_i|^2 = d_{i+1}/d_i`, which is what the CVP
//! routines consume.

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};

use super::Matrix;
use crate::scalar::{round_div, Scalar, ScalarOps};
use crate::{Error, Result};

/// An LLL-reduced basis together with its exact Gram-Schmidt data and
/// the unimodular transform back to the input basis.
#[derive(Debug, Clone)]
pub struct ReducedBasis<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    basis: Matrix<S>,
    transform: Matrix<S>,
    lambda: Vec<Vec<S>>,
    d: Vec<S>,
}

impl<S> ReducedBasis<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    pub fn basis(&self) -> &Matrix<S> {
        &self.basis
    }

    /// Unimodular `H` with `basis = H * input`.
    pub fn transform(&self) -> &Matrix<S> {
        &self.transform
    }

    pub fn into_basis(self) -> Matrix<S> {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    /// Gram-Schmidt coefficient `mu_{i,j}` for `j < i`.
    pub fn mu(&self, i: usize, j: usize) -> Ratio<S> {
        Ratio::new(self.lambda[i][j].clone(), self.d[j + 1].clone())
    }

    /// Squared norm of the i-th Gram-Schmidt vector.
    pub fn bstar_norm_sq(&self, i: usize) -> Ratio<S> {
        Ratio::new(self.d[i + 1].clone(), self.d[i].clone())
    }

    /// Maps coefficients over the reduced basis to coefficients over
    /// the input basis.
    pub fn to_input_coeffs(&self, reduced_coeffs: &[S]) -> Vec<S> {
        self.transform.combination(reduced_coeffs)
    }
}

fn dot<S>(a: &[S], b: &[S]) -> S
where
    S: Scalar,
    for<'x> &'x S: ScalarOps<S>,
{
    a.iter()
        .zip(b)
        .fold(S::zero(), |acc, (x, y)| &acc + &(x * y))
}

/// LLL-reduces a nonsingular square basis with Lovász parameter
/// `delta` in `(1/4, 1)`; default is `3/4`. All arithmetic is exact.
pub fn lll_reduce<S>(basis: &Matrix<S>, delta: &Ratio<S>) -> Result<ReducedBasis<S>>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    let quarter = Ratio::new(S::one(), S::one() + S::one() + S::one() + S::one());
    assert!(
        *delta > quarter && *delta < Ratio::one(),
        "LLL delta must lie in (1/4, 1)"
    );
    let dn = delta.numer();
    let dd = delta.denom();

    let n = basis.dim();
    let mut b: Vec<Vec<S>> = basis.rows().to_vec();
    let mut h: Vec<Vec<S>> = Matrix::identity(n).rows().to_vec();
    let mut lambda: Vec<Vec<S>> = vec![vec![S::zero(); n]; n];
    let mut d: Vec<S> = vec![S::zero(); n + 1];
    d[0] = S::one();
    d[1] = dot(&b[0], &b[0]);
    if d[1].is_zero() {
        return Err(Error::SingularBasis);
    }

    if n == 1 {
        return Ok(ReducedBasis {
            basis: Matrix::from_rows(b),
            transform: Matrix::from_rows(h),
            lambda,
            d,
        });
    }

    let mut k = 1usize;
    let mut kmax = 0usize;
    while k < n {
        if k > kmax {
            kmax = k;
            for j in 0..=k {
                let mut u = dot(&b[k], &b[j]);
                for i in 0..j {
                    u = &(&(&d[i + 1] * &u) - &(&lambda[k][i] * &lambda[j][i])) / &d[i];
                }
                if j < k {
                    lambda[k][j] = u;
                } else {
                    if u.is_zero() {
                        return Err(Error::SingularBasis);
                    }
                    d[k + 1] = u;
                }
            }
        }

        redi(&mut b, &mut h, &mut lambda, &d, k, k - 1);

        // Lovász test in integral form:
        // swap iff dd (d_{k+1} d_{k-1} + lambda^2) < dn d_k^2
        let lam = &lambda[k][k - 1];
        let lhs = dd * &(&(&d[k + 1] * &d[k - 1]) + &(lam * lam));
        let rhs = dn * &(&d[k] * &d[k]);
        if lhs < rhs {
            swapi(&mut b, &mut h, &mut lambda, &mut d, k, kmax);
            k = k.max(2) - 1;
        } else {
            for l in (0..k.saturating_sub(1)).rev() {
                redi(&mut b, &mut h, &mut lambda, &d, k, l);
            }
            k += 1;
        }
    }

    Ok(ReducedBasis {
        basis: Matrix::from_rows(b),
        transform: Matrix::from_rows(h),
        lambda,
        d,
    })
}

/// Size-reduces row `k` against row `l` (`l < k`).
fn redi<S>(
    b: &mut [Vec<S>],
    h: &mut [Vec<S>],
    lambda: &mut [Vec<S>],
    d: &[S],
    k: usize,
    l: usize,
) where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    let two = S::one() + S::one();
    if &(&lambda[k][l].abs() * &two) <= &d[l + 1] {
        return;
    }
    let r = round_div(&lambda[k][l], &d[l + 1]);
    for j in 0..b[k].len() {
        let sub = &r * &b[l][j];
        b[k][j] = &b[k][j] - &sub;
        let sub = &r * &h[l][j];
        h[k][j] = &h[k][j] - &sub;
    }
    lambda[k][l] = &lambda[k][l] - &(&r * &d[l + 1]);
    for i in 0..l {
        let sub = &r * &lambda[l][i];
        lambda[k][i] = &lambda[k][i] - &sub;
    }
}

/// Swaps rows `k` and `k-1`, updating the integral Gram-Schmidt data.
fn swapi<S>(
    b: &mut [Vec<S>],
    h: &mut [Vec<S>],
    lambda: &mut Vec<Vec<S>>,
    d: &mut [S],
    k: usize,
    kmax: usize,
) where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    b.swap(k, k - 1);
    h.swap(k, k - 1);
    for j in 0..k.saturating_sub(1) {
        let tmp = lambda[k][j].clone();
        lambda[k][j] = lambda[k - 1][j].clone();
        lambda[k - 1][j] = tmp;
    }
    let lam = lambda[k][k - 1].clone();
    let big_b = &(&(&d[k - 1] * &d[k + 1]) + &(&lam * &lam)) / &d[k];
    for i in k + 1..=kmax {
        let t = lambda[i][k].clone();
        lambda[i][k] = &(&(&d[k + 1] * &lambda[i][k - 1]) - &(&lam * &t)) / &d[k];
        lambda[i][k - 1] = &(&(&big_b * &t) + &(&lam * &lambda[i][k])) / &d[k + 1];
    }
    d[k] = big_b;
}

//! Closest-vector solvers on an LLL-reduced basis.
//!
//! `cvp_exact` enumerates with exact rational bookkeeping and returns a
//! provably nearest lattice point (ties broken by the lexicographically
//! smallest coefficient vector over the input basis). `cvp_babai` is
//! the nearest-plane approximation used when the dimension is beyond
//! the enumeration limit.

use num_rational::Ratio;
use num_traits::{One, Zero};

use super::lll::{lll_reduce, ReducedBasis};
use super::Matrix;
use crate::scalar::{Scalar, ScalarOps};
use crate::{Error, Int, Result};

/// Dimension cap for exact enumeration.
pub const DEFAULT_ENUM_LIMIT: usize = 40;

/// A lattice point together with the integer combination producing it
/// (over the basis passed to the solver) and its exact squared distance
/// to the target.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CvpSolution<S = Int>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    pub vector: Vec<S>,
    pub coefficients: Vec<S>,
    pub distance_sq: Ratio<S>,
}

fn default_delta<S>() -> Ratio<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    let four = S::one() + S::one() + S::one() + S::one();
    Ratio::new(&four - &S::one(), four)
}

fn squared_distance<S>(v: &[S], target: &[Ratio<S>]) -> Ratio<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    v.iter()
        .zip(target)
        .map(|(a, t)| {
            let diff = Ratio::from_integer(a.clone()) - t;
            &diff * &diff
        })
        .sum()
}

/// Cached rational Gram-Schmidt data of a reduced basis.
struct Gso<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    mu: Vec<Vec<Ratio<S>>>,
    bstar_norm_sq: Vec<Ratio<S>>,
    /// tau_i = <target, b*_i> / |b*_i|^2
    tau: Vec<Ratio<S>>,
}

fn gso_with_target<S>(red: &ReducedBasis<S>, target: &[Ratio<S>]) -> Gso<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    let n = red.dim();
    let mu: Vec<Vec<Ratio<S>>> = (0..n)
        .map(|i| (0..i).map(|j| red.mu(i, j)).collect())
        .collect();
    let bstar_norm_sq: Vec<Ratio<S>> = (0..n).map(|i| red.bstar_norm_sq(i)).collect();

    // <t, b*_i> = <t, b_i> - sum_{j<i} mu_{i,j} <t, b*_j>
    let mut t_bstar: Vec<Ratio<S>> = Vec::with_capacity(n);
    for i in 0..n {
        let mut acc: Ratio<S> = red.basis().row(i)
            .iter()
            .zip(target)
            .map(|(b, t)| t * Ratio::from_integer(b.clone()))
            .sum();
        for j in 0..i {
            let sub = &mu[i][j] * &t_bstar[j];
            acc -= sub;
        }
        t_bstar.push(acc);
    }
    let tau: Vec<Ratio<S>> = t_bstar
        .into_iter()
        .zip(&bstar_norm_sq)
        .map(|(tb, b)| tb / b)
        .collect();

    Gso { mu, bstar_norm_sq, tau }
}

/// Nearest-plane coefficients over the reduced basis.
fn nearest_plane_coeffs<S>(gso: &Gso<S>) -> Vec<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    let n = gso.tau.len();
    let mut coeffs = vec![S::zero(); n];
    for i in (0..n).rev() {
        let mut center = gso.tau[i].clone();
        for j in i + 1..n {
            let sub = &gso.mu[j][i] * Ratio::from_integer(coeffs[j].clone());
            center -= sub;
        }
        coeffs[i] = center.round().to_integer();
    }
    coeffs
}

fn solution_from_reduced<S>(
    basis: &Matrix<S>,
    red: &ReducedBasis<S>,
    reduced_coeffs: &[S],
    target: &[Ratio<S>],
) -> CvpSolution<S>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    let coefficients = red.to_input_coeffs(reduced_coeffs);
    let vector = basis.combination(&coefficients);
    let distance_sq = squared_distance(&vector, target);
    CvpSolution {
        vector,
        coefficients,
        distance_sq,
    }
}

/// Approximate CVP by Babai's nearest-plane on the LLL-reduced basis.
pub fn cvp_babai<S>(basis: &Matrix<S>, target: &[Ratio<S>]) -> Result<CvpSolution<S>>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    assert_eq!(target.len(), basis.dim(), "target dimension mismatch");
    let red = lll_reduce(basis, &default_delta())?;
    let gso = gso_with_target(&red, target);
    let coeffs = nearest_plane_coeffs(&gso);
    Ok(solution_from_reduced(basis, &red, &coeffs, target))
}

/// Exact CVP with the default enumeration limit.
pub fn cvp_exact<S>(basis: &Matrix<S>, target: &[Ratio<S>]) -> Result<CvpSolution<S>>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    cvp_exact_with_limit(basis, target, DEFAULT_ENUM_LIMIT)
}

/// Exact CVP: LLL preprocessing, then depth-first enumeration with
/// exact rational partial distances, seeded with the nearest-plane
/// solution as the initial radius.
pub fn cvp_exact_with_limit<S>(
    basis: &Matrix<S>,
    target: &[Ratio<S>],
    limit: usize,
) -> Result<CvpSolution<S>>
where
    S: Scalar,
    for<'a> &'a S: ScalarOps<S>,
{
    assert_eq!(target.len(), basis.dim(), "target dimension mismatch");
    if basis.dim() > limit {
        return Err(Error::DimensionLimit {
            dim: basis.dim(),
            limit,
        });
    }
    let red = lll_reduce(basis, &default_delta())?;
    let gso = gso_with_target(&red, target);

    let babai = nearest_plane_coeffs(&gso);
    let babai_vec = red.basis().combination(&babai);
    let bound = squared_distance(&babai_vec, target);

    let n = red.dim();
    let mut search = Search {
        gso: &gso,
        n,
        bound,
        coeffs: vec![S::zero(); n],
        minimizers: Vec::new(),
    };
    search.descend(n - 1, Ratio::zero());
    debug_assert!(!search.minimizers.is_empty());

    // map minimizers to input-basis coefficients and break ties
    // lexicographically
    let best_coeffs = search
        .minimizers
        .iter()
        .map(|m| red.to_input_coeffs(m))
        .min()
        .expect("enumeration found no lattice point within the Babai radius");
    let vector = basis.combination(&best_coeffs);
    let distance_sq = squared_distance(&vector, target);
    debug_assert_eq!(distance_sq, search.bound);
    Ok(CvpSolution {
        vector,
        coefficients: best_coeffs,
        distance_sq,
    })
}

struct Search<'a, S>
where
    S: Scalar,
    for<'x> &'x S: ScalarOps<S>,
{
    gso: &'a Gso<S>,
    n: usize,
    bound: Ratio<S>,
    coeffs: Vec<S>,
    minimizers: Vec<Vec<S>>,
}

impl<S> Search<'_, S>
where
    S: Scalar,
    for<'x> &'x S: ScalarOps<S>,
{
    /// Enumerates coefficients at `level` (from `n-1` down to `0`),
    /// zig-zagging around the real center. `partial` is the exact
    /// squared distance contributed by levels above.
    fn descend(&mut self, level: usize, partial: Ratio<S>) {
        let mut center = self.gso.tau[level].clone();
        for j in level + 1..self.n {
            let sub = &self.gso.mu[j][level] * Ratio::from_integer(self.coeffs[j].clone());
            center -= sub;
        }
        let start = center.round();

        let one = Ratio::one();
        let mut up = start.clone();
        let mut down = &start - &one;
        let mut up_alive = true;
        let mut down_alive = true;
        let mut take_up = true;
        while up_alive || down_alive {
            let candidate = if take_up && up_alive {
                let c = up.clone();
                up += &one;
                c
            } else if down_alive {
                let c = down.clone();
                down -= &one;
                c
            } else {
                take_up = true;
                continue;
            };
            let went_up = candidate >= start;
            take_up = !take_up;

            let diff = &candidate - &center;
            let term = &(&diff * &diff) * &self.gso.bstar_norm_sq[level];
            let total = &partial + &term;
            if total > self.bound {
                // moving further on this side only increases the term
                if went_up {
                    up_alive = false;
                } else {
                    down_alive = false;
                }
                continue;
            }
            self.coeffs[level] = candidate.to_integer();
            if level == 0 {
                if total < self.bound {
                    self.bound = total.clone();
                    self.minimizers.clear();
                }
                self.minimizers.push(self.coeffs.clone());
            } else {
                self.descend(level - 1, total);
            }
        }
    }
}

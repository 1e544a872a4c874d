//! End-to-end coefficient recovery.
//!
//! The instance's points and values become a scaled lattice and target;
//! a CVP solution's trailing `s` coordinates are exactly the candidate
//! coefficients (each power row contributes `1` at its own trailing
//! coordinate and the q-rows contribute nothing there). Candidates are
//! verified against the modular window `floor(q / 2^l)`, the separation
//! radius under which the lattice argument guarantees uniqueness.

use std::time::{Duration, Instant};

use num_rational::Ratio;
use num_traits::{One, Signed, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

use crate::exact::le_pow;
use crate::lattice::{
    build_lattice, cvp_babai, cvp_exact_with_limit, CvpSolution, DEFAULT_ENUM_LIMIT,
};
use crate::oracle::{generate_instance, MsbInstance, NoisePolicy};
use crate::poly::{ExponentSet, SparsePoly};
use crate::ring::RingModulus;
use crate::{Error, Int, Rat, Result};

/// Which CVP routine backs the recovery.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Solver {
    Exact,
    Babai,
}

impl std::fmt::Display for Solver {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Solver::Exact => "exact",
            Solver::Babai => "babai",
        })
    }
}

impl std::str::FromStr for Solver {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exact" => Ok(Solver::Exact),
            "babai" => Ok(Solver::Babai),
            other => Err(format!("unknown solver {other:?}")),
        }
    }
}

/// Recovered coefficients plus diagnostics. On `verified = false` the
/// best candidate and its residuals are still reported for forensics.
#[derive(Debug, Clone)]
pub struct RecoveryResult {
    pub coefficients: Vec<Int>,
    pub cvp_distance_sq: Rat,
    pub verified: bool,
    /// Modular distances `dist_q(fhat(t_i), w_i)`, one per sample.
    pub residuals: Vec<Int>,
    pub solver: Solver,
}

impl RecoveryResult {
    pub fn max_residual(&self) -> Int {
        self.residuals.iter().cloned().max().unwrap_or_else(Int::zero)
    }

    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Dto<'a> {
            coefficients: Vec<String>,
            verified: bool,
            cvp_distance_sq: String,
            residuals: Vec<String>,
            solver: &'a str,
        }
        let dto = Dto {
            coefficients: self.coefficients.iter().map(|c| c.to_string()).collect(),
            verified: self.verified,
            cvp_distance_sq: format!(
                "{}/{}",
                self.cvp_distance_sq.numer(),
                self.cvp_distance_sq.denom()
            ),
            residuals: self.residuals.iter().map(|r| r.to_string()).collect(),
            solver: match self.solver {
                Solver::Exact => "exact",
                Solver::Babai => "babai",
            },
        };
        serde_json::to_string(&dto).expect("result serialization cannot fail")
    }
}

fn evaluate_candidate(m: &RingModulus, e: &ExponentSet, coeffs: &[Int], t: &Int) -> Int {
    let mut acc = Int::zero();
    for (exp, a) in e.exponents().iter().zip(coeffs) {
        acc += a * m.pow_mod(t, exp);
    }
    m.reduce(&acc)
}

fn residuals_for(m: &RingModulus, e: &ExponentSet, coeffs: &[Int], inst: &MsbInstance) -> Vec<Int> {
    inst.samples()
        .iter()
        .map(|s| m.dist(&evaluate_candidate(m, e, coeffs, &s.t), &s.w))
        .collect()
}

/// Runs the recovery algorithm with the default enumeration limit.
pub fn recover(instance: &MsbInstance, solver: Solver) -> Result<RecoveryResult> {
    recover_with_limit(instance, solver, DEFAULT_ENUM_LIMIT)
}

/// Runs the recovery algorithm; `enum_limit` caps the dimension the
/// exact solver will enumerate.
pub fn recover_with_limit(
    instance: &MsbInstance,
    solver: Solver,
    enum_limit: usize,
) -> Result<RecoveryResult> {
    let m = instance.modulus();
    let e = instance.exponents();
    let lat = build_lattice(m, e, &instance.points())?;
    let d = lat.num_points();

    let mut target: Vec<Rat> = Vec::with_capacity(lat.dim());
    for sample in instance.samples() {
        target.push(Rat::from_integer(lat.scale() * &sample.w));
    }
    target.resize(lat.dim(), Rat::zero());

    let solution: CvpSolution = match solver {
        Solver::Exact => cvp_exact_with_limit(lat.basis(), &target, enum_limit)?,
        Solver::Babai => cvp_babai(lat.basis(), &target)?,
    };

    let coefficients: Vec<Int> = (0..lat.sparsity())
        .map(|j| m.reduce(&solution.vector[d + j]))
        .collect();
    let residuals = residuals_for(m, e, &coefficients, instance);
    let window = m.floor_q_shr(instance.ell());
    let verified = residuals.iter().all(|r| r <= &window);

    Ok(RecoveryResult {
        coefficients,
        cvp_distance_sq: solution.distance_sq,
        verified,
        residuals,
        solver,
    })
}

/// Verification outcome for an explicit candidate polynomial.
#[derive(Debug, Clone)]
pub struct VerifyOutcome {
    pub ok: bool,
    pub residuals: Vec<Int>,
}

/// Checks a candidate against every sample at the window
/// `floor(q / 2^l)`.
pub fn verify_candidate(candidate: &SparsePoly, instance: &MsbInstance) -> Result<VerifyOutcome> {
    if candidate.exponent_set() != instance.exponents()
        || candidate.modulus() != instance.modulus()
    {
        return Err(Error::ExponentMismatch);
    }
    let m = instance.modulus();
    let residuals: Vec<Int> = instance
        .samples()
        .iter()
        .map(|s| m.dist(&candidate.evaluate(&s.t), &s.w))
        .collect();
    let window = m.floor_q_shr(instance.ell());
    let ok = residuals.iter().all(|r| r <= &window);
    Ok(VerifyOutcome { ok, residuals })
}

/// Exact squared (scaled) distance from the lattice point of the true
/// coefficients to the recovery target, and whether it satisfies the
/// bound `(d+s) 2^(-2l-2) q^2 2^(2(n+1))` that admissible noise implies.
pub fn truth_lattice_distance(instance: &MsbInstance) -> Result<(Rat, bool)> {
    let truth = instance
        .truth()
        .ok_or_else(|| Error::MalformedInstance("instance has no truth".into()))?;
    let m = instance.modulus();
    let scale: Int = Int::one() << (m.bit_length() + 1);

    let mut dist_sq = Int::zero();
    for sample in instance.samples() {
        let gap = (truth.evaluate(&sample.t) - &sample.w) * &scale;
        dist_sq += &gap * &gap;
    }
    for a in truth.coefficients() {
        dist_sq += a * a;
    }

    let dims = Int::from((instance.num_samples() + truth.sparsity()) as u64);
    let budget = Rat::from_integer(dims * m.q() * m.q() * (&scale * &scale));
    let lhs = Rat::from_integer(dist_sq.clone()) / &budget;
    let two = Rat::from_integer(Int::from(2));
    let exp = Rat::from_integer(Int::from(-2)) * instance.ell()
        - Rat::from_integer(Int::from(2));
    let holds = le_pow(&lhs, &two, &exp);
    Ok((Rat::from_integer(dist_sq), holds))
}

/// Parameters of a Monte Carlo success-rate experiment.
#[derive(Debug, Clone)]
pub struct ExperimentParams {
    pub modulus: RingModulus,
    pub exponents: ExponentSet,
    pub ell: Rat,
    pub d: usize,
    pub noise: NoisePolicy,
    pub solver: Solver,
    pub enum_limit: usize,
}

/// One generate-recover cycle of the experiment.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub trial: usize,
    pub seed: u64,
    pub success: bool,
    pub verified: bool,
    pub cvp_distance_sq: Rat,
    pub max_residual: Int,
    pub wall: Duration,
}

#[derive(Debug, Clone)]
pub struct ExperimentSummary {
    pub successes: usize,
    pub trials: usize,
    pub rate: Rat,
    pub per_trial: Vec<TrialOutcome>,
}

/// Runs `trials` independent generate-recover cycles. Trial `i` owns
/// the ChaCha20 stream seeded with `seed ^ i`; success means exact
/// coefficient match with the hidden truth.
pub fn success_probability(
    params: &ExperimentParams,
    trials: usize,
    seed: u64,
) -> Result<ExperimentSummary> {
    assert!(trials >= 1, "at least one trial required");
    let mut per_trial = Vec::with_capacity(trials);
    let mut successes = 0usize;
    for trial in 0..trials {
        let trial_seed = seed ^ trial as u64;
        let mut rng = ChaCha20Rng::seed_from_u64(trial_seed);
        let started = Instant::now();
        let instance = generate_instance(
            &params.modulus,
            &params.exponents,
            &params.ell,
            params.d,
            params.noise,
            &mut rng,
        )?;
        let result = recover_with_limit(&instance, params.solver, params.enum_limit)?;
        let wall = started.elapsed();
        let truth = instance.truth().expect("generated instances carry truth");
        let success = result.coefficients == truth.coefficients();
        if success {
            successes += 1;
        }
        per_trial.push(TrialOutcome {
            trial,
            seed: trial_seed,
            success,
            verified: result.verified,
            cvp_distance_sq: result.cvp_distance_sq,
            max_residual: result.max_residual(),
            wall,
        });
    }
    Ok(ExperimentSummary {
        successes,
        trials,
        rate: Ratio::new(Int::from(successes as u64), Int::from(trials as u64)),
        per_trial,
    })
}

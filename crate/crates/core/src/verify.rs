//! Brute-force verification of the number-theoretic quantities backing
//! the recovery argument: congruence counts over windows, complete
//! exponential sums over units, and the interval discrepancy of the
//! value sequence. Everything here iterates over all units of Z_q, so
//! moduli are capped at desk scale.
//!
//! Exponential sums use double precision with Kahan compensation; the
//! error is at most a few ulps per unit, negligible against the
//! integer-scale quantities they are compared with.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::exact::cmp_pow;
use crate::poly::{delta_ord_p, SparsePoly};
use crate::ring::{ord_p, RingModulus};
use crate::{Error, Int, Rat, Result};

/// Modulus cap for congruence counting and exponential sums.
pub const COUNT_Q_LIMIT: u64 = 1 << 20;
/// Modulus cap for the discrepancy sweep and the Erdos-Turan bound.
pub const DISCREPANCY_Q_LIMIT: u64 = 1 << 16;

fn q_in_range(m: &RingModulus, limit: u64) -> Result<u64> {
    m.q()
        .to_u64()
        .filter(|&q| q <= limit)
        .ok_or_else(|| Error::BruteForceLimit(m.q().to_string(), limit.to_string()))
}

fn pow_mod_u64(mut base: u64, mut exp: u64, q: u64) -> u64 {
    let mut acc = 1u64 % q;
    base %= q;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % q;
        }
        base = base * base % q;
        exp >>= 1;
    }
    acc
}

/// `F(x) mod q` for every unit `x` of Z_q, ascending in `x`.
fn unit_values(f: &SparsePoly, q: u64) -> Vec<u64> {
    let p = f.modulus().p();
    let exps: Vec<u64> = f
        .exponents()
        .iter()
        .map(|e| e.to_u64().expect("exponent fits: e < q <= 2^20"))
        .collect();
    let coeffs: Vec<u64> = f
        .coefficients()
        .iter()
        .map(|a| a.to_u64().expect("coefficient fits: a < q <= 2^20"))
        .collect();
    let mut out = Vec::with_capacity((q - q / p) as usize);
    for x in 1..q {
        if x % p == 0 {
            continue;
        }
        let mut acc = 0u64;
        for (e, a) in exps.iter().zip(&coeffs) {
            acc = (acc + a * pow_mod_u64(x, *e, q)) % q;
        }
        out.push(acc);
    }
    out
}

/// Count of `x` in Z_q^* with `F(x) = u (mod q)` for some
/// `u in {a+1, ..., a+h}`, against its expected value `h (p-1)/p`.
#[derive(Debug, Clone)]
pub struct CongruenceCount {
    pub a: Int,
    pub h: u64,
    pub count: u64,
    pub expected: Rat,
    pub deviation: Rat,
}

/// Exact window count by iteration over the units; `a` may be any
/// integer (the count only depends on `a mod q`).
pub fn count_solutions(f: &SparsePoly, a: &Int, h: u64) -> Result<CongruenceCount> {
    assert!(h >= 1, "window length must be positive");
    let m = f.modulus();
    let q = q_in_range(m, COUNT_Q_LIMIT)?;
    let a_red = m
        .reduce(a)
        .to_i64()
        .expect("reduced window start fits in i64");
    let values = unit_values(f, q);

    let qi = q as i64;
    let h_i = i64::try_from(h).expect("window length fits in i64");
    let mut count: u64 = 0;
    for &v in &values {
        // number of u in (a, a+h] congruent to v mod q
        let r = v as i64;
        let hi = (a_red + h_i - r).div_euclid(qi);
        let lo = (a_red - r).div_euclid(qi);
        count += (hi - lo) as u64;
    }

    let expected = Rat::new(Int::from(h) * (m.p() - 1), Int::from(m.p()));
    let deviation = (Rat::from_integer(Int::from(count)) - &expected).abs();
    Ok(CongruenceCount {
        a: a.clone(),
        h,
        count,
        expected,
        deviation,
    })
}

#[derive(Debug, Clone, Copy, Default)]
struct Kahan {
    sum: f64,
    carry: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Kahan-compensated `sum_x e_q(mult * F(x))` over precomputed values.
fn exp_sum_points(values: &[u64], q: u64, mult: u64) -> (f64, f64) {
    let mut re = Kahan::default();
    let mut im = Kahan::default();
    let step = std::f64::consts::TAU / q as f64;
    for &v in values {
        let phase = ((u128::from(v) * u128::from(mult)) % u128::from(q)) as u64;
        let angle = phase as f64 * step;
        re.add(angle.cos());
        im.add(angle.sin());
    }
    (re.sum, im.sum)
}

/// `S(F, q)` with its magnitude and the reference size
/// `q^(1 - 1/s + eta (s+1)/s)` for the supplied `eta` (diagnostic
/// only; the inequality carries an unspecified constant).
#[derive(Debug, Clone, Copy)]
pub struct ExpSum {
    pub re: f64,
    pub im: f64,
    pub abs: f64,
    pub reference_bound: f64,
}

pub fn exp_sum(f: &SparsePoly, eta: &Rat) -> Result<ExpSum> {
    let q = q_in_range(f.modulus(), COUNT_Q_LIMIT)?;
    let values = unit_values(f, q);
    let (re, im) = exp_sum_points(&values, q, 1);
    let s = f.sparsity() as f64;
    let eta = eta.to_f64().expect("eta fits in f64");
    let reference_bound = (q as f64).powf(1.0 - 1.0 / s + eta * (s + 1.0) / s);
    Ok(ExpSum {
        re,
        im,
        abs: re.hypot(im),
        reference_bound,
    })
}

/// The `eta` induced by `eps` in the congruence bound:
/// `eta = (1 - (s+1) eps) / ((s+1)(1 - eps))`.
pub fn derived_eta(s: usize, eps: &Rat) -> Rat {
    let one = Rat::one();
    let s1 = Rat::from_integer(Int::from(s as u64 + 1));
    (&one - &s1 * eps) / (s1 * (one - eps))
}

/// Exact interval discrepancy `sup |#hits - (beta-alpha) N|` of the
/// points `values/q` in `[0,1)`, scaled computation entirely in
/// integers. Exposed on raw residues so synthetic point sets can be
/// swept too.
pub fn discrepancy_of_points(values: &[u64], q: u64) -> Rat {
    assert!(!values.is_empty());
    assert!(values.iter().all(|&v| v < q));
    let n = values.len() as i64;
    let qi = q as i64;
    let mut w: Vec<i64> = values.iter().map(|&v| v as i64).collect();
    w.sort_unstable();

    // surplus side: intervals closing tightly around runs of points;
    // max over i <= j of q(j-i+1) - N(w_j - w_i)
    let mut best_plus = i64::MIN;
    let mut best_prefix = i64::MIN; // max over i of N w_i - q i
    for (j, &wj) in w.iter().enumerate() {
        let ji = j as i64;
        best_prefix = best_prefix.max(n * wj - qi * ji);
        best_plus = best_plus.max(qi * (ji + 1) - n * wj + best_prefix);
    }

    // deficit side: alpha just above a point (or 0), beta at a point
    // (or 1)
    let mut best_minus = 0i64;
    let mut best_gap_start = 0i64; // alpha = 0
    let mut idx = 0usize;
    while idx < w.len() {
        let v = w[idx];
        let count_less = idx as i64;
        let mut end = idx;
        while end < w.len() && w[end] == v {
            end += 1;
        }
        let count_le = end as i64;
        let close_here = n * v - qi * count_less;
        best_minus = best_minus.max(best_gap_start + close_here);
        best_gap_start = best_gap_start.max(qi * count_le - n * v);
        idx = end;
    }
    best_minus = best_minus.max(best_gap_start); // beta = 1

    Rat::new(Int::from(best_plus.max(best_minus)), Int::from(q))
}

/// Exact discrepancy of `{F(x)/q : x unit}`.
pub fn discrepancy(f: &SparsePoly) -> Result<Rat> {
    let q = q_in_range(f.modulus(), DISCREPANCY_Q_LIMIT)?;
    Ok(discrepancy_of_points(&unit_values(f, q), q))
}

/// Erdos-Turan upper bound on the discrepancy:
/// `3 (N/(H+1) + sum_{h=1}^{H} |S(hF, q)| / h)`.
pub fn erdos_turan_bound(f: &SparsePoly, big_h: u64) -> Result<Rat> {
    assert!(big_h >= 1, "H must be positive");
    let q = q_in_range(f.modulus(), DISCREPANCY_Q_LIMIT)?;
    let values = unit_values(f, q);
    let n = values.len() as u64;
    let mut acc = Rat::new(Int::from(n), Int::from(big_h + 1));
    for h in 1..=big_h {
        let (re, im) = exp_sum_points(&values, q, h % q);
        let magnitude = Rat::from_float(re.hypot(im)).expect("finite magnitude");
        acc += magnitude / Rat::from_integer(Int::from(h));
    }
    Ok(acc * Rat::from_integer(Int::from(3)))
}

/// `gcd(A_1, ..., A_s, q)`; a power of `p` strictly below `q`.
pub fn content_gcd(f: &SparsePoly) -> Int {
    let mut d = f.modulus().q().clone();
    for a in f.coefficients() {
        d = d.gcd(a);
    }
    d
}

/// Checks `N_F(a,h;q) = D N_{F/D}(a,h;q/D)` exactly by computing both
/// sides brute-force. Requires `h <= q/D` (the identity fails to be
/// meaningful beyond that) and exponents below the reduced modulus.
pub fn reduction_identity_check(f: &SparsePoly, a: &Int, h: u64) -> Result<bool> {
    let m = f.modulus();
    q_in_range(m, DISCREPANCY_Q_LIMIT)?;
    let d = content_gcd(f);
    let q_over_d = m.q() / &d;
    if Int::from(h) > q_over_d {
        return Err(Error::WindowTooLarge {
            h: h.to_string(),
            max: q_over_d.to_string(),
        });
    }
    let lhs = count_solutions(f, a, h)?.count;

    let r = ord_p(&d, m.p())?;
    let reduced_modulus = RingModulus::new(m.p(), m.k() - u32::try_from(r).unwrap())?;
    if f.exponents().last().unwrap() >= reduced_modulus.q() {
        return Err(Error::InvalidExponents(
            "exponent exceeds reduced modulus q/D".into(),
        ));
    }
    let reduced_coeffs: Vec<Int> = f.coefficients().iter().map(|c| c / &d).collect();
    let reduced = SparsePoly::new(
        reduced_modulus,
        f.exponent_set().clone(),
        reduced_coeffs,
    )?;
    let rhs = count_solutions(&reduced, a, h)?.count;

    Ok(Int::from(lhs) == d * Int::from(rhs))
}

/// Both sides of the window-count upper bound
/// `N_F(a,h;q) <= D h + D^eps q^(1-eps) log2 q`, reported as a ratio
/// because the right side carries an unspecified constant.
#[derive(Debug, Clone, Copy)]
pub struct CorollaryCheck {
    pub lhs: u64,
    pub rhs: f64,
    pub ratio: f64,
    /// Whether `p^rho <= s^(-1) (q/D)^(1/(s+1) - eps)` holds (exact).
    pub hypothesis_ok: bool,
    pub holds: bool,
}

pub fn corollary_bound_check(
    f: &SparsePoly,
    a: &Int,
    h: u64,
    eps: &Rat,
) -> Result<CorollaryCheck> {
    let m = f.modulus();
    let q = q_in_range(m, DISCREPANCY_Q_LIMIT)?;
    let s = f.sparsity();
    let d = content_gcd(f);

    let rho = delta_ord_p(f.exponent_set(), m.p());
    let gamma = Rat::new(Int::one(), Int::from(s as u64 + 1)) - eps;
    let lhs_hyp = Rat::from_integer(
        Int::from(s as u64) * Int::from(m.p()).pow(u32::try_from(rho).expect("rho fits")),
    );
    let base = Rat::from_integer(m.q() / &d);
    let hypothesis_ok = cmp_pow(&lhs_hyp, &base, &gamma) != std::cmp::Ordering::Greater;

    let lhs = count_solutions(f, a, h)?.count;
    let d_f = d.to_f64().expect("D fits in f64");
    let q_f = q as f64;
    let eps_f = eps.to_f64().expect("eps fits in f64");
    let rhs = d_f * h as f64 + d_f.powf(eps_f) * q_f.powf(1.0 - eps_f) * q_f.log2();
    let ratio = lhs as f64 / rhs;
    Ok(CorollaryCheck {
        lhs,
        rhs,
        ratio,
        hypothesis_ok,
        holds: (lhs as f64) <= rhs,
    })
}

//! Arithmetic in the residue ring Z_{p^k}.
//!
//! The modulus is a power of a small fixed prime; `k` may push `q` to
//! hundreds of bits, so everything is arbitrary precision.

use num_bigint::RandBigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::exact::floor_div_pow2;
use crate::{Error, Int, Rat, Result};

/// Prime-power modulus `q = p^k` with its derived quantities.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RingModulus {
    p: u64,
    k: u32,
    q: Int,
    n: u64,
    totient: Int,
}

impl RingModulus {
    /// Builds the modulus, checking that `p` is prime (trial division;
    /// `p` is small by assumption) and `k >= 1`.
    pub fn new(p: u64, k: u32) -> Result<Self> {
        if !is_small_prime(p) {
            return Err(Error::InvalidModulus(format!("p = {p} is not prime")));
        }
        if k == 0 {
            return Err(Error::InvalidModulus("k must be positive".into()));
        }
        let q = Int::from(p).pow(k);
        // n = ceil(k * log2 p): equals k for p = 2 and the bit count of q
        // otherwise (q is never a power of two for odd p).
        let n = if p == 2 { u64::from(k) } else { q.bits() };
        let totient = &q / p * (p - 1);
        Ok(RingModulus { p, k, q, n, totient })
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn q(&self) -> &Int {
        &self.q
    }

    /// Bit length `n = ceil(k log2 p)` of the modulus.
    pub fn bit_length(&self) -> u64 {
        self.n
    }

    /// Euler totient `phi(q) = p^(k-1) (p-1)`.
    pub fn totient(&self) -> &Int {
        &self.totient
    }

    /// Canonical representative of `x` in `[0, q)`.
    pub fn reduce(&self, x: &Int) -> Int {
        x.mod_floor(&self.q)
    }

    /// Modular distance `min_b |beta - gamma - b q|`, in `[0, q/2]`.
    pub fn dist(&self, beta: &Int, gamma: &Int) -> Int {
        let r = self.reduce(&(beta - gamma));
        let wrapped = &self.q - &r;
        r.min(wrapped)
    }

    /// `t^e mod q` by square-and-multiply; `e >= 0`.
    pub fn pow_mod(&self, t: &Int, e: &Int) -> Int {
        assert!(!e.is_negative(), "pow_mod: exponent must be nonnegative");
        self.reduce(t).modpow(e, &self.q)
    }

    /// Whether the representative of `x` is a unit, i.e. coprime to `p`.
    pub fn is_unit(&self, x: &Int) -> bool {
        !self.reduce(x).is_multiple_of(&Int::from(self.p))
    }

    /// Uniform unit of Z_q, by rejection of the multiples of `p`.
    pub fn sample_unit<R: Rng + ?Sized>(&self, rng: &mut R) -> Int {
        let zero = Int::zero();
        loop {
            let x = rng.gen_bigint_range(&zero, &self.q);
            if self.is_unit(&x) {
                return x;
            }
        }
    }

    /// Exact `floor(q / 2^bits)` for rational `bits >= 0`; the MSB noise
    /// window is `floor_q_shr(l + 1)` and the verification window
    /// `floor_q_shr(l)`.
    pub fn floor_q_shr(&self, bits: &Rat) -> Int {
        floor_div_pow2(&self.q, bits)
    }
}

/// p-adic order of a nonzero integer: the largest `alpha` with
/// `p^alpha | a`.
pub fn ord_p(a: &Int, p: u64) -> Result<u64> {
    if a.is_zero() {
        return Err(Error::ZeroOrder);
    }
    let p = Int::from(p);
    let mut rest = a.abs();
    let mut order = 0;
    loop {
        let (quot, rem) = rest.div_rem(&p);
        if !rem.is_zero() {
            return Ok(order);
        }
        order += 1;
        rest = quot;
    }
}

fn is_small_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= p {
        if p % f == 0 {
            return false;
        }
        f += 1;
    }
    true
}

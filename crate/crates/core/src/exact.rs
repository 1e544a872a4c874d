//! Exact comparisons and floors involving real powers.
//!
//! Noise windows have the shape `q / 2^(l+1)` where `l` is rational, so
//! the power is irrational in general. Comparisons are decided by
//! clearing the fractional exponent: `x <=> y^(a/b)` becomes the integer
//! comparison `x^b <=> y^a`. No floating point is involved anywhere.

use std::cmp::Ordering;

use num_integer::Roots;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::{Int, Rat};

/// Compares `lhs` against `base^exp` exactly. `base` must be positive.
pub fn cmp_pow(lhs: &Rat, base: &Rat, exp: &Rat) -> Ordering {
    assert!(base.is_positive(), "cmp_pow: base must be positive");
    if lhs.is_negative() {
        return Ordering::Less;
    }
    let b = exp
        .denom()
        .to_i32()
        .expect("cmp_pow: exponent denominator out of range");
    let a = exp
        .numer()
        .to_i32()
        .expect("cmp_pow: exponent numerator out of range");
    lhs.pow(b).cmp(&base.pow(a))
}

/// `true` iff `lhs <= base^exp`, decided exactly.
pub fn le_pow(lhs: &Rat, base: &Rat, exp: &Rat) -> bool {
    cmp_pow(lhs, base, exp) != Ordering::Greater
}

/// Exact `floor(x / 2^exp)` for `x >= 0` and rational `exp >= 0`.
///
/// For `exp = a/b` the floor is the integer b-th root of `x^b >> a`,
/// since `t * 2^(a/b) <= x` iff `t^b <= x^b / 2^a`.
pub fn floor_div_pow2(x: &Int, exp: &Rat) -> Int {
    assert!(!x.is_negative(), "floor_div_pow2: x must be nonnegative");
    assert!(!exp.is_negative(), "floor_div_pow2: exp must be nonnegative");
    if x.is_zero() {
        return Int::zero();
    }
    let a = exp
        .numer()
        .to_u64()
        .expect("floor_div_pow2: exponent numerator out of range");
    let b = exp
        .denom()
        .to_u32()
        .expect("floor_div_pow2: exponent denominator out of range");
    if b == 1 {
        return if a >= x.bits() { Int::zero() } else { x >> a };
    }
    if a >= x.bits() * u64::from(b) {
        return Int::zero();
    }
    (x.pow(b) >> a).nth_root(b)
}

/// Parses a rational written as `num` or `num/den` in decimal.
pub fn parse_rat(s: &str) -> Result<Rat, String> {
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d),
        None => (s, "1"),
    };
    let num: Int = num
        .trim()
        .parse()
        .map_err(|_| format!("bad rational numerator in {s:?}"))?;
    let den: Int = den
        .trim()
        .parse()
        .map_err(|_| format!("bad rational denominator in {s:?}"))?;
    if den.is_zero() {
        return Err(format!("zero denominator in {s:?}"));
    }
    Ok(Rat::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(Int::from(n), Int::from(d))
    }

    #[test]
    fn cmp_pow_integer_exponents() {
        // 8 = 2^3, 9 > 2^3, 7 < 2^3
        let two = Rat::from_integer(Int::from(2));
        assert_eq!(cmp_pow(&rat(8, 1), &two, &rat(3, 1)), Ordering::Equal);
        assert_eq!(cmp_pow(&rat(9, 1), &two, &rat(3, 1)), Ordering::Greater);
        assert_eq!(cmp_pow(&rat(7, 1), &two, &rat(3, 1)), Ordering::Less);
    }

    #[test]
    fn cmp_pow_fractional_exponents() {
        let two = Rat::from_integer(Int::from(2));
        // 2^(3/2) = 2.828...
        assert_eq!(cmp_pow(&rat(3, 1), &two, &rat(3, 2)), Ordering::Greater);
        assert_eq!(cmp_pow(&rat(2, 1), &two, &rat(3, 2)), Ordering::Less);
        // negative exponent: 2^(-1/2) = 0.707...
        assert_eq!(cmp_pow(&rat(7, 10), &two, &rat(-1, 2)), Ordering::Less);
        assert_eq!(cmp_pow(&rat(3, 4), &two, &rat(-1, 2)), Ordering::Greater);
        // negative lhs is below any power
        assert_eq!(cmp_pow(&rat(-5, 1), &two, &rat(-10, 1)), Ordering::Less);
    }

    #[test]
    fn floor_div_pow2_integer_exponent() {
        assert_eq!(
            floor_div_pow2(&Int::from(1024), &rat(4, 1)),
            Int::from(64)
        );
        assert_eq!(floor_div_pow2(&Int::from(1000), &rat(4, 1)), Int::from(62));
        assert_eq!(floor_div_pow2(&Int::from(7), &rat(10, 1)), Int::zero());
        assert_eq!(floor_div_pow2(&Int::from(7), &Rat::zero()), Int::from(7));
    }

    #[test]
    fn floor_div_pow2_fractional_exponent() {
        // floor(100 / 2^(3/2)) = floor(35.35...) = 35
        assert_eq!(floor_div_pow2(&Int::from(100), &rat(3, 2)), Int::from(35));
        // floor(2 / 2^(1/2)) = 1
        assert_eq!(floor_div_pow2(&Int::from(2), &rat(1, 2)), Int::one());
        // cross-check against f64 on a grid; exact result may exceed the
        // float by at most one ulp worth of rounding
        for x in 1u64..200 {
            for (a, b) in [(1i64, 2i64), (3, 2), (5, 3), (7, 4)] {
                let exact = floor_div_pow2(&Int::from(x), &rat(a, b));
                let approx = (x as f64 / 2f64.powf(a as f64 / b as f64)).floor();
                let diff = exact.to_f64().unwrap() - approx;
                assert!(diff.abs() <= 1.0, "x={x} a={a} b={b}");
            }
        }
    }

    #[test]
    fn parse_rat_forms() {
        assert_eq!(parse_rat("48").unwrap(), rat(48, 1));
        assert_eq!(parse_rat("1/4").unwrap(), rat(1, 4));
        assert_eq!(parse_rat("39/2").unwrap(), rat(39, 2));
        assert!(parse_rat("1/0").is_err());
        assert!(parse_rat("x").is_err());
    }
}

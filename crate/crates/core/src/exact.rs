//! Conversions between exact big numbers and `f64`, and recovery of small
//! rationals from high-precision rational approximations.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Denominator bound used when recovering exact constants.
pub const SNAP_MAX_DENOMINATOR: u64 = 1_000_000;

/// Relative distance below which a constant is replaced by a nearby small
/// rational. Far below `f64` resolution, so only constants that were
/// computed from exact data to very high accuracy are affected.
pub const SNAP_RELATIVE_TOLERANCE: f64 = 1e-24;

/// `num / den` as `f64` without overflowing on huge operands.
pub fn ratio_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero(), "division by zero");
    if num.is_zero() {
        return 0.0;
    }
    let bits = num.bits().max(den.bits());
    let shift = bits.saturating_sub(1000);
    let n = (num >> shift).to_f64().unwrap_or(f64::INFINITY);
    let d = (den >> shift).to_f64().unwrap_or(f64::INFINITY);
    if d == 0.0 {
        // den vanished under the shift: the ratio exceeds 2^(1000 - bits(den))
        return f64::INFINITY;
    }
    n / d
}

pub fn ln_big(x: &BigUint) -> f64 {
    assert!(!x.is_zero(), "logarithm of zero");
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_f64().expect("64-bit value fits in f64");
    libm::log(top) + shift as f64 * core::f64::consts::LN_2
}

pub fn rational_to_f64(x: &BigRational) -> f64 {
    if x.is_zero() {
        return 0.0;
    }
    let sign = if x.is_negative() { -1.0 } else { 1.0 };
    let n = x.numer().magnitude();
    let d = x.denom().magnitude();
    sign * ratio_f64(n, d)
}

/// Exact rational value of a finite `f64`.
pub fn f64_to_rational(x: f64) -> BigRational {
    assert!(x.is_finite(), "non-finite constant");
    BigRational::from_float(x).expect("finite float")
}

pub fn uint_to_rational(x: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from_biguint(Sign::Plus, x.clone()))
}

/// Best rational approximation with denominator at most `max_den`, if it lies
/// within `rel_tol` of `x` (relative). Uses the continued fraction of `x`.
pub fn snap_rational(x: &BigRational, max_den: u64, rel_tol: f64) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let max_den = BigInt::from(max_den);
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    let mut rest = x.clone();
    let mut best: Option<BigRational> = None;
    for _ in 0..64 {
        let a = rest.floor().to_integer();
        let h_next = &a * &h + &h_prev;
        let k_next = &a * &k + &k_prev;
        if k_next > max_den {
            break;
        }
        h_prev = core::mem::replace(&mut h, h_next);
        k_prev = core::mem::replace(&mut k, k_next);
        best = Some(BigRational::new(h.clone(), k.clone()));
        let frac = &rest - BigRational::from_integer(a);
        if frac.is_zero() {
            break;
        }
        rest = frac.recip();
    }
    let candidate = best?;
    let err = rational_to_f64(&((&candidate - x) / x).abs());
    (err <= rel_tol).then_some(candidate)
}

/// Snaps to a small rational when `x` is one to within
/// [`SNAP_RELATIVE_TOLERANCE`]; otherwise rounds to the nearest `f64` so the
/// stored constant stays small.
pub fn tidy_constant(x: &BigRational) -> BigRational {
    snap_rational(x, SNAP_MAX_DENOMINATOR, SNAP_RELATIVE_TOLERANCE)
        .unwrap_or_else(|| f64_to_rational(rational_to_f64(x)))
}

/// Least common multiple of two positive integers.
pub fn lcm(a: usize, b: usize) -> usize {
    a.lcm(&b)
}

pub fn gcd(a: usize, b: usize) -> usize {
    a.gcd(&b)
}

/// `x^n` for a rational and a signed exponent.
pub fn rational_pow(x: &BigRational, n: i64) -> BigRational {
    if n >= 0 {
        num_traits::pow(x.clone(), n as usize)
    } else {
        num_traits::pow(x.recip(), n.unsigned_abs() as usize)
    }
}

/// Exact value of `n!` as a big integer.
pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, k| acc * BigUint::from(k))
}

/// Beta function at positive integer arguments `B(m + 1, n + 1)`, exactly:
/// `m! n! / (m + n + 1)!`.
pub fn beta_integer(m: u32, n: u32) -> BigRational {
    let num = factorial(m) * factorial(n);
    let den = factorial(m + n + 1);
    BigRational::new(
        BigInt::from_biguint(Sign::Plus, num),
        BigInt::from_biguint(Sign::Plus, den),
    )
}

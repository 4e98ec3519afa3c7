//! Progression constants, argument maps and the Legendre symbol.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::series::TruncSeries;

/// Largest `alpha` for which the progression constants fit in `i64`.
pub const MAX_ALPHA: u32 = 20;

pub fn pow5(alpha: u32) -> i64 {
    assert!(alpha <= 26, "5^{alpha} overflows i64");
    5i64.pow(alpha)
}

fn check_alpha(alpha: u32) {
    assert!((1..=MAX_ALPHA).contains(&alpha), "alpha = {alpha} outside 1..={MAX_ALPHA}");
}

/// `δ̃_α`: `(23·5^α - 19)/24` for odd `α`, `19(5^α - 1)/24` for even `α`.
pub fn delta_tilde(alpha: u32) -> i64 {
    check_alpha(alpha);
    let p = pow5(alpha);
    if alpha % 2 == 1 {
        (23 * p - 19) / 24
    } else {
        19 * (p - 1) / 24
    }
}

/// The inverse of 24 modulo `5^α`, in `(0, 5^α)`.
pub fn delta_ram(alpha: u32) -> i64 {
    check_alpha(alpha);
    let m = pow5(alpha);
    let g = 24i64.extended_gcd(&m);
    debug_assert_eq!(g.gcd, 1);
    g.x.mod_floor(&m)
}

/// The `(odd, even)` constant of the progressions: 23 for odd `α`, 19 for even.
pub fn parity_constant(alpha: u32) -> i64 {
    if alpha % 2 == 1 {
        23
    } else {
        19
    }
}

/// `y_{α,ℓ}`: `(23·5^α·ℓ² - 19)/24` for odd `α`, `(19·5^α·ℓ² - 19)/24` for even.
pub fn y_of(alpha: u32, ell: u64) -> BigRational {
    check_alpha(alpha);
    let num = BigInt::from(parity_constant(alpha)) * pow5(alpha) * BigInt::from(ell).pow(2) - 19;
    BigRational::new(num, BigInt::from(24))
}

/// The argument `5^α ((24n + K)/ℓ² - K)/24 + δ̃_α`, `K` the parity
/// constant, at which the `-ℓ c(·)` term of the Hecke-type congruence is
/// evaluated. It is an integer exactly when `ℓ² | 24n + K`.
pub fn hecke_arg(alpha: u32, ell: u64, n: u64) -> BigRational {
    let k = BigInt::from(parity_constant(alpha));
    let ell2 = BigInt::from(ell).pow(2);
    let inner = BigRational::new(BigInt::from(24) * n + &k, ell2) - BigRational::from_integer(k);
    inner * BigRational::new(BigInt::from(pow5(alpha)), BigInt::from(24))
        + BigRational::from_integer(BigInt::from(delta_tilde(alpha)))
}

/// `c(x)` for a rational `x`: the series coefficient when `x` is a
/// nonnegative integer, and 0 otherwise.
pub fn c_at(series: &TruncSeries, x: &BigRational) -> Result<BigInt> {
    if !x.is_integer() || x.is_negative() {
        return Ok(BigInt::zero());
    }
    let e = x.to_integer().to_i64().expect("argument fits in i64");
    series.coeff(e)
}

/// Legendre symbol `(a/p)` for an odd prime `p`, by Euler's criterion.
pub fn legendre(a: i64, p: u64) -> i8 {
    assert!(p > 2 && p % 2 == 1, "p = {p} must be an odd prime");
    let a = a.rem_euclid(p as i64) as u64;
    if a == 0 {
        return 0;
    }
    match pow_mod(a, (p - 1) / 2, p) {
        1 => 1,
        r if r == p - 1 => -1,
        r => panic!("Euler's criterion gave {r} mod {p}: modulus is not prime"),
    }
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = base as u128 % m as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m as u128;
        }
        b = b * b % m as u128;
        exp >>= 1;
    }
    base = acc as u64;
    base
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

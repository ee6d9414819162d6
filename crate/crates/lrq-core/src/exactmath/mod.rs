//! Exact arithmetic in cyclotomic fields Q(zeta_m) and exact linear algebra
//! over them. Everything downstream (group closure, lambda-invariants,
//! catalogs) is built on these two types.

mod cyclotomic;
mod matrix;

pub use cyclotomic::{CycNum, root_of_unity};
pub use matrix::CycMatrix;

use num::BigRational;

/// Exact rational scalar. Stored in lowest terms with positive denominator.
pub type Rational = BigRational;

/// Largest conductor the arithmetic layer accepts: 2^3 * 3^2 * 5 * 7.
/// Every generator in the catalogs lives in a conductor dividing 120, so the
/// cap leaves generous headroom while keeping degrees bounded.
pub const CONDUCTOR_CAP: u64 = 2520;

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    num::integer::gcd(a, b)
}

pub fn lcm_u64(a: u64, b: u64) -> u64 {
    num::integer::lcm(a, b)
}

/// Euler totient by trial-division factorization (inputs are tiny).
pub fn euler_phi(mut m: u64) -> u64 {
    assert!(m >= 1);
    let mut phi = 1u64;
    let mut p = 2u64;
    while p * p <= m {
        if m % p == 0 {
            let mut pk = 1u64;
            while m % p == 0 {
                m /= p;
                pk *= p;
            }
            phi *= pk - pk / p;
        }
        p += 1;
    }
    if m > 1 {
        phi *= m - 1;
    }
    phi
}

/// Multiplicative order of `r` mod `m`; requires gcd(r, m) = 1.
pub fn multiplicative_order(r: u64, m: u64) -> u64 {
    assert!(m >= 1 && gcd_u64(r, m) == 1);
    if m == 1 {
        return 1;
    }
    let mut x = r % m;
    let mut e = 1u64;
    while x != 1 {
        x = x * (r % m) % m;
        e += 1;
    }
    e
}

/// Inverse of `a` mod `m` when gcd(a, m) = 1.
pub fn mod_inverse(a: u64, m: u64) -> Option<u64> {
    if m == 1 {
        return Some(0);
    }
    let (mut t, mut new_t) = (0i128, 1i128);
    let (mut r, mut new_r) = (m as i128, (a % m) as i128);
    while new_r != 0 {
        let q = r / new_r;
        (t, new_t) = (new_t, t - q * new_t);
        (r, new_r) = (new_r, r - q * new_r);
    }
    if r != 1 {
        return None;
    }
    Some(((t % m as i128 + m as i128) % m as i128) as u64)
}

/// p-adic valuation and p-part of n.
pub fn p_valuation(mut n: u64, p: u64) -> (u32, u64) {
    assert!(p >= 2 && n >= 1);
    let mut v = 0u32;
    let mut part = 1u64;
    while n % p == 0 {
        n /= p;
        v += 1;
        part *= p;
    }
    (v, part)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Parse "num/den" (or a bare integer) into a Rational.
pub fn parse_rational(s: &str) -> crate::error::Result<Rational> {
    use crate::error::Error;
    use num::BigInt;
    use std::str::FromStr;
    let mk = |v: &str| {
        BigInt::from_str(v.trim()).map_err(|_| Error::BadInput(format!("bad rational `{s}`")))
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let den = mk(d)?;
            if den == BigInt::from(0) {
                return Err(Error::BadInput(format!("zero denominator in `{s}`")));
            }
            Ok(Rational::new(mk(n)?, den))
        }
        None => Ok(Rational::from(mk(s)?)),
    }
}

/// Format a Rational as "num/den" (denominator always printed).
pub fn format_rational(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

//! Integer helpers: squarefree parts, prime factors, Legendre symbols.

use num_integer::Roots;
use num_prime::nt_funcs::{factorize128, is_prime64};

use crate::error::{Error, Result};

pub fn is_prime(n: u64) -> bool {
    is_prime64(n)
}

/// Distinct prime divisors of `n`, ascending.
pub fn prime_divisors(n: u128) -> Vec<u64> {
    if n <= 1 {
        return Vec::new();
    }
    factorize128(n).keys().map(|&p| u64::try_from(p).expect("prime factor exceeds u64")).collect()
}

/// Squarefree part of a nonzero integer, keeping the sign.
pub fn squarefree_part(n: i128) -> Result<i64> {
    if n == 0 {
        return Err(Error::DegenerateElement("zero has no square class".into()));
    }
    let mut out: i128 = n.signum();
    for (p, e) in factorize128(n.unsigned_abs()) {
        if e % 2 == 1 {
            out *= p as i128;
        }
    }
    i64::try_from(out).map_err(|_| Error::ResourceExceeded(format!("squarefree part of {n} overflows")))
}

/// Product of two squarefree integers, reduced to its squarefree part.
pub fn squarefree_mul(a: i64, b: i64) -> i64 {
    let g = num_integer::gcd(a, b);
    (a / g).checked_mul(b / g).expect("square class representative overflowed i64")
}

pub fn is_perfect_square(n: i128) -> bool {
    if n < 0 {
        return false;
    }
    let r = (n as u128).sqrt();
    r * r == n as u128
}

pub fn mod_pow(b: u64, mut e: u64, m: u64) -> u64 {
    let m128 = m as u128;
    let mut acc: u128 = 1 % m128;
    let mut base = (b % m) as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * base % m128;
        }
        base = base * base % m128;
        e >>= 1;
    }
    acc as u64
}

/// Legendre symbol (a/p) for an odd prime p not dividing a.
pub fn legendre(a: i64, p: u64) -> Result<i8> {
    let r = (a as i128).rem_euclid(p as i128) as u64;
    if r == 0 {
        return Err(Error::NotAUnit(a, p));
    }
    Ok(if mod_pow(r, (p - 1) / 2, p) == 1 { 1 } else { -1 })
}

/// Least positive quadratic non-residue modulo an odd prime.
pub fn least_non_residue(p: u64) -> u64 {
    (2..p).find(|&a| mod_pow(a, (p - 1) / 2, p) == p - 1).expect("odd prime has a non-residue")
}

/// p-adic valuation and unit part of a nonzero integer.
pub fn split_valuation(mut n: i64, p: u64) -> (u32, i64) {
    let p = p as i64;
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    (v, n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squarefree_examples() {
        assert_eq!(squarefree_part(18).unwrap(), 2);
        assert_eq!(squarefree_part(-4).unwrap(), -1);
        assert_eq!(squarefree_part(12).unwrap(), 3);
        assert_eq!(squarefree_part(1_000_000_007 * 4).unwrap(), 1_000_000_007);
        assert!(squarefree_part(0).is_err());
    }

    #[test]
    fn legendre_small() {
        let squares: Vec<i64> = (1..7).map(|x| (x * x) % 7).collect();
        for a in 1..7 {
            let expected = if squares.contains(&a) { 1 } else { -1 };
            assert_eq!(legendre(a, 7).unwrap(), expected);
        }
        assert_eq!(legendre(-1, 7).unwrap(), -1);
        assert!(matches!(legendre(14, 7), Err(Error::NotAUnit(14, 7))));
    }

    #[test]
    fn non_residues() {
        assert_eq!(least_non_residue(3), 2);
        assert_eq!(least_non_residue(7), 3);
        assert_eq!(least_non_residue(17), 3);
        assert_eq!(least_non_residue(23), 5);
    }

    #[test]
    fn squarefree_products() {
        assert_eq!(squarefree_mul(6, 10), 15);
        assert_eq!(squarefree_mul(-3, -3), 1);
        assert_eq!(squarefree_mul(-1, 5), -5);
    }
}

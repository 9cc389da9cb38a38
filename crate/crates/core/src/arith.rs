//! Small number-theoretic helpers: factorization, square classes and
//! Legendre symbols.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub(crate) fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn pow_mod(base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut b = (base % p) as u128;
    let m = p as u128;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        exp >>= 1;
    }
    acc as u64
}

pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    // p prime
    pow_mod(a, p - 2, p)
}

/// True iff the nonzero residue `a` is a square modulo the odd prime `p`.
pub(crate) fn is_square_mod(a: u64, p: u64) -> bool {
    let a = a % p;
    debug_assert!(a != 0);
    pow_mod(a, (p - 1) / 2, p) == 1
}

/// Smallest quadratic non-residue modulo the odd prime `p`.
pub(crate) fn least_nonsquare(p: u64) -> u64 {
    (2..p).find(|&a| !is_square_mod(a, p)).expect("odd prime has a non-residue")
}

/// Reduces `x` modulo `p`, failing when the denominator is divisible by `p`.
pub(crate) fn rational_mod(x: &BigRational, p: u64) -> Option<u64> {
    let pb = BigInt::from(p);
    let num = x.numer().mod_floor(&pb).to_u64()?;
    let den = x.denom().mod_floor(&pb).to_u64()?;
    if den == 0 {
        return None;
    }
    Some(mul_mod(num, inv_mod(den, p), p))
}

/// Prime factorization by trial division, returned as `(prime, exponent)`
/// pairs in ascending order.
pub(crate) fn factor(n: &BigUint) -> Vec<(BigUint, u32)> {
    let mut out = Vec::new();
    if n.is_zero() {
        return out;
    }
    let mut n = n.clone();
    let two = BigUint::from(2u32);
    let mut k = 0;
    while n.is_even() {
        n /= &two;
        k += 1;
    }
    if k > 0 {
        out.push((two, k));
    }
    let mut d = BigUint::from(3u32);
    while &d * &d <= n {
        let mut k = 0;
        while (&n % &d).is_zero() {
            n /= &d;
            k += 1;
        }
        if k > 0 {
            out.push((d.clone(), k));
        }
        d += 2u32;
    }
    if !n.is_one() {
        out.push((n, 1));
    }
    out
}

/// The squarefree integer representing the square class of a nonzero
/// rational (`a/b` and `a*b` lie in the same class).
pub(crate) fn squarefree_class(x: &BigRational) -> BigInt {
    debug_assert!(!x.is_zero());
    let prod = x.numer() * x.denom();
    let sign = prod.sign();
    let mut core = BigUint::one();
    for (p, k) in factor(prod.magnitude()) {
        if k % 2 == 1 {
            core *= p;
        }
    }
    BigInt::from_biguint(if sign == Sign::Minus { Sign::Minus } else { Sign::Plus }, core)
}

pub(crate) fn lcm_u64(a: u64, b: u64) -> u64 {
    a.lcm(&b)
}

/// True iff every prime factor of `n` divides `m`.
pub(crate) fn divides_power_of(n: &BigUint, m: u64) -> bool {
    if n.is_zero() {
        return false;
    }
    let mb = BigUint::from(m);
    let mut n = n.clone();
    loop {
        let g = n.gcd(&mb);
        if g.is_one() {
            return n.is_one();
        }
        while (&n % &g).is_zero() {
            n /= &g;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn squares_mod_five() {
        let squares: Vec<u64> = (1..5).filter(|&a| is_square_mod(a, 5)).collect();
        assert_eq!(squares, vec![1, 4]);
        assert_eq!(least_nonsquare(5), 2);
        assert_eq!(least_nonsquare(7), 3);
    }

    #[test]
    fn square_classes() {
        let r = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        assert_eq!(squarefree_class(&r(12, 1)), BigInt::from(3));
        assert_eq!(squarefree_class(&r(-8, 9)), BigInt::from(-2));
        assert_eq!(squarefree_class(&r(1, 6)), BigInt::from(6));
    }

    #[test]
    fn power_divisibility() {
        assert!(divides_power_of(&BigUint::from(12u32), 6));
        assert!(!divides_power_of(&BigUint::from(10u32), 6));
        assert!(divides_power_of(&BigUint::from(1u32), 1));
    }
}

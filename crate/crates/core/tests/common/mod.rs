//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use witt_loc::bn::{BNElem, CoeffTheory};
use witt_loc::series::PowerSeries;
use witt_loc::witt::{FieldSpec, WittClass};

// ---------------------------------------------------------------------------
// W(Q) via Hasse–Minkowski: a form is zero in W(Q) iff it is hyperbolic,
// i.e. it has even rank, signature 0, square signed discriminant and the
// Hasse invariants of a hyperbolic form at every prime.

fn squarefree(n: i128) -> i128 {
    assert!(n != 0);
    let sign = n.signum();
    let mut m = n.abs();
    let mut out = 1;
    let mut p = 2;
    while p * p <= m {
        let mut k = 0;
        while m % p == 0 {
            m /= p;
            k += 1;
        }
        if k % 2 == 1 {
            out *= p;
        }
        p += 1;
    }
    sign * out * m
}

fn primes_dividing(n: i128) -> Vec<i128> {
    let mut m = n.abs();
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            out.push(p);
            while m % p == 0 {
                m /= p;
            }
        }
        p += 1;
    }
    if m > 1 {
        out.push(m);
    }
    out
}

fn legendre(a: i128, p: i128) -> i32 {
    let a = a.rem_euclid(p);
    assert!(a != 0);
    let mut r: i128 = 1;
    let mut b = a;
    let mut e = (p - 1) / 2;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    if r == 1 {
        1
    } else {
        -1
    }
}

fn split(a: i128, p: i128) -> (u32, i128) {
    let mut v = 0;
    let mut u = a;
    while u % p == 0 {
        u /= p;
        v += 1;
    }
    (v, u)
}

/// Hilbert symbol `(a, b)_p` for nonzero integers.
pub fn hilbert(a: i128, b: i128, p: i128) -> i32 {
    let (alpha, u) = split(a, p);
    let (beta, v) = split(b, p);
    if p == 2 {
        let eps = |x: i128| ((x - 1) / 2).rem_euclid(2);
        let omega = |x: i128| ((x * x - 1) / 8).rem_euclid(2);
        let e = eps(u) * eps(v) + alpha as i128 * omega(v) + beta as i128 * omega(u);
        if e % 2 == 0 {
            1
        } else {
            -1
        }
    } else {
        let mut s = if (alpha as i128 * beta as i128 * ((p - 1) / 2)) % 2 == 0 { 1 } else { -1 };
        if beta % 2 == 1 {
            s *= legendre(u, p);
        }
        if alpha % 2 == 1 {
            s *= legendre(v, p);
        }
        s
    }
}

fn hasse(entries: &[i128], p: i128) -> i32 {
    let mut h = 1;
    for i in 0..entries.len() {
        for j in i + 1..entries.len() {
            h *= hilbert(entries[i], entries[j], p);
        }
    }
    h
}

/// True iff the diagonal form with these integer entries is zero in W(Q).
pub fn hasse_is_zero(entries: &[i64]) -> bool {
    let e: Vec<i128> = entries.iter().map(|&a| squarefree(a as i128)).collect();
    let n = e.len();
    if n % 2 == 1 {
        return false;
    }
    if e.iter().filter(|a| **a > 0).count() * 2 != n {
        return false;
    }
    let det: i128 = e.iter().fold(1, |acc, a| squarefree(acc * a));
    let signed = if (n / 2) % 2 == 1 { -det } else { det };
    if signed != 1 {
        return false;
    }
    let mut primes = vec![2];
    for a in &e {
        primes.extend(primes_dividing(*a));
    }
    primes.sort();
    primes.dedup();
    let hyperbolic: Vec<i128> = (0..n).map(|i| if i % 2 == 0 { 1 } else { -1 }).collect();
    primes.into_iter().all(|p| hasse(&e, p) == hasse(&hyperbolic, p))
}

/// Equality in W(Q) decided by the Hasse–Minkowski oracle.
pub fn hasse_equal(a: &[i64], b: &[i64]) -> bool {
    let mut c = a.to_vec();
    c.extend(b.iter().map(|x| -x));
    hasse_is_zero(&c)
}

// ---------------------------------------------------------------------------
// W(F_p) by counting: an even-rank form over F_p is hyperbolic iff it has
// as many zeros as the hyperbolic form of that rank.

fn zeros(entries: &[u64], p: u64) -> u64 {
    let n = entries.len();
    let total = p.pow(n as u32);
    let mut count = 0;
    for mut idx in 0..total {
        let mut s = 0;
        for a in entries {
            let x = idx % p;
            idx /= p;
            s = (s + a * x * x) % p;
        }
        if s == 0 {
            count += 1;
        }
    }
    count
}

pub fn brute_hyperbolic(entries: &[u64], p: u64) -> bool {
    if entries.len() % 2 == 1 {
        return false;
    }
    let h: Vec<u64> = (0..entries.len()).map(|i| if i % 2 == 0 { 1 } else { p - 1 }).collect();
    zeros(entries, p) == zeros(&h, p)
}

/// Witt equivalence over F_p by brute force.
pub fn brute_equal(a: &[u64], b: &[u64], p: u64) -> bool {
    let mut c = a.to_vec();
    c.extend(b.iter().map(|x| (p - x % p) % p));
    brute_hyperbolic(&c, p)
}

// ---------------------------------------------------------------------------
// A(BN) product by free multiplication of monomials q0^a e^i followed by
// rewriting with q0^2 -> 1 and q0 e -> -e.

pub fn rewrite_mul(a: &BNElem, b: &BNElem) -> BNElem {
    let field = a.field();
    let t = a.truncation().min(b.truncation());
    let words = |x: &BNElem| -> Vec<((u32, usize), WittClass)> {
        let mut w: Vec<_> = x.e_part().coeffs().iter().enumerate().map(|(i, c)| ((0, i), c.clone())).collect();
        w.push(((1, 0), x.q0_part().clone()));
        w.into_iter().filter(|(_, c)| !c.is_zero()).collect()
    };
    let mut free: BTreeMap<(u32, usize), WittClass> = BTreeMap::new();
    for ((qa, i), x) in words(a) {
        for ((qb, j), y) in words(b) {
            let slot = free.entry((qa + qb, i + j)).or_insert_with(|| WittClass::zero(field));
            *slot = &*slot + &(&x * &y);
        }
    }
    // Rewrite until every word is e^i or q0.
    let mut changed = true;
    while changed {
        changed = false;
        let mut next: BTreeMap<(u32, usize), WittClass> = BTreeMap::new();
        for ((q, i), c) in free {
            let (word, coeff) = if q >= 2 {
                changed = true;
                ((q - 2, i), c)
            } else if q == 1 && i >= 1 {
                changed = true;
                ((0, i), -&c)
            } else {
                ((q, i), c)
            };
            let slot = next.entry(word).or_insert_with(|| WittClass::zero(field));
            *slot = &*slot + &coeff;
        }
        free = next;
    }
    let e_terms: Vec<(usize, WittClass)> =
        free.iter().filter(|((q, i), _)| *q == 0 && *i < t).map(|((_, i), c)| (*i, c.clone())).collect();
    let c = free.get(&(1, 0)).cloned().unwrap_or_else(|| WittClass::zero(field));
    BNElem::new(PowerSeries::from_terms(field, &e_terms, t), c, CoeffTheory::HW)
}


pub const FIELDS: [FieldSpec; 6] = [
    FieldSpec::Rationals,
    FieldSpec::Reals,
    FieldSpec::FinitePrime(3),
    FieldSpec::FinitePrime(5),
    FieldSpec::FinitePrime(7),
    FieldSpec::QuadraticallyClosed,
];

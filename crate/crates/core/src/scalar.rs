//! Coefficients in `W(k)[1/M]`.
//!
//! `W(k)` splits as a free part (the signature, present only for the real
//! fields) plus a torsion part whose exponent divides 4. Inverting an odd
//! integer acts on the torsion part as multiplication by that integer
//! mod 4; inverting an even integer kills it.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::arith;
use crate::witt::{FieldSpec, WittClass};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LocScalar {
    field: FieldSpec,
    two_inverted: bool,
    free: BigRational,
    torsion: WittClass,
}

/// Why a scalar could not be inverted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nonunit {
    Zero,
    NotUnit,
}

impl LocScalar {
    pub fn zero(field: FieldSpec, two_inverted: bool) -> Self {
        LocScalar { field, two_inverted, free: BigRational::zero(), torsion: WittClass::zero(field) }
    }

    pub fn one(field: FieldSpec, two_inverted: bool) -> Self {
        Self::from_witt(&WittClass::one(field), two_inverted)
    }

    pub fn from_integer(field: FieldSpec, n: i64, two_inverted: bool) -> Self {
        Self::from_witt(&WittClass::from_integer(field, n), two_inverted)
    }

    pub fn from_witt(w: &WittClass, two_inverted: bool) -> Self {
        let field = w.field();
        let free = match w.signature() {
            Some(s) => BigRational::from_integer(s.into()),
            None => BigRational::zero(),
        };
        let torsion = if two_inverted { WittClass::zero(field) } else { w.torsion_part() };
        LocScalar { field, two_inverted, free, torsion }
    }

    /// `a/b` times `<1>`; the denominator must be a unit in the target ring.
    pub fn from_rational(field: FieldSpec, x: &BigRational, two_inverted: bool) -> Self {
        let num = x.numer().to_i64().expect("numerator fits in i64");
        let s = Self::from_integer(field, num, two_inverted);
        s.div_integer(x.denom())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn two_inverted(&self) -> bool {
        self.two_inverted
    }

    /// The signature part (zero over fields without ordering).
    pub fn free_part(&self) -> &BigRational {
        &self.free
    }

    pub fn torsion_part(&self) -> &WittClass {
        &self.torsion
    }

    pub fn is_zero(&self) -> bool {
        self.free.is_zero() && self.torsion.is_zero()
    }

    pub fn is_one(&self) -> bool {
        *self == Self::one(self.field, self.two_inverted)
    }

    /// Moves the scalar into a ring where 2 is (also) inverted.
    pub fn with_two_inverted(&self, two_inverted: bool) -> Self {
        if two_inverted == self.two_inverted || !two_inverted {
            return self.clone();
        }
        LocScalar { field: self.field, two_inverted: true, free: self.free.clone(), torsion: WittClass::zero(self.field) }
    }

    fn align(&self, other: &LocScalar) -> (LocScalar, LocScalar) {
        let t = self.two_inverted || other.two_inverted;
        (self.with_two_inverted(t), other.with_two_inverted(t))
    }

    /// The value as an honest Witt class, when no denominators remain.
    pub fn to_witt(&self) -> Option<WittClass> {
        if !self.free.is_integer() {
            return None;
        }
        let s = self.free.to_integer().to_i64()?;
        let base = if self.field.is_real() { WittClass::from_integer(self.field, s) } else { WittClass::zero(self.field) };
        Some(&base + &self.torsion)
    }

    pub fn add(&self, other: &LocScalar) -> LocScalar {
        let (a, b) = self.align(other);
        LocScalar { field: a.field, two_inverted: a.two_inverted, free: &a.free + &b.free, torsion: &a.torsion + &b.torsion }
    }

    pub fn neg(&self) -> LocScalar {
        LocScalar { field: self.field, two_inverted: self.two_inverted, free: -&self.free, torsion: -&self.torsion }
    }

    pub fn sub(&self, other: &LocScalar) -> LocScalar {
        self.add(&other.neg())
    }

    /// Rational multiple of a torsion class. The denominator is odd here,
    /// otherwise the torsion would already be zero.
    fn torsion_times(t: &WittClass, x: &BigRational) -> WittClass {
        if t.is_zero() || x.is_zero() {
            return WittClass::zero(t.field());
        }
        let four = BigInt::from(4);
        let num = x.numer().mod_floor(&four);
        let den = x.denom().mod_floor(&four);
        debug_assert!(den.is_odd());
        // d^{-1} = d mod 4 for odd d.
        let k = (num * den).mod_floor(&four).to_i64().expect("small");
        t.times_integer(k)
    }

    pub fn mul(&self, other: &LocScalar) -> LocScalar {
        let (a, b) = self.align(other);
        let free = &a.free * &b.free;
        let mut torsion = Self::torsion_times(&b.torsion, &a.free);
        torsion = &torsion + &Self::torsion_times(&a.torsion, &b.free);
        if !a.torsion.is_zero() && !b.torsion.is_zero() {
            torsion = &torsion + &(&a.torsion * &b.torsion);
        }
        // A product of torsion classes may have a nonzero signature only if
        // the field is real and both signatures vanish, so it stays torsion.
        LocScalar { field: a.field, two_inverted: a.two_inverted, free, torsion }
    }

    /// Division by a positive integer that is a unit of the ambient ring.
    pub fn div_integer(&self, n: &BigInt) -> LocScalar {
        assert!(n.is_positive(), "division by a non-positive integer");
        if n.is_one() {
            return self.clone();
        }
        let two_inverted = self.two_inverted || n.is_even();
        let base = self.with_two_inverted(two_inverted);
        let inv = BigRational::new(BigInt::one(), n.clone());
        let free = &base.free * &inv;
        let torsion = Self::torsion_times(&base.torsion, &inv);
        LocScalar { field: base.field, two_inverted, free, torsion }
    }

    /// Inverse in `W(k)[1/M]`.
    pub fn inverse(&self, modulus: u64) -> Result<LocScalar, Nonunit> {
        if self.is_zero() {
            return Err(Nonunit::Zero);
        }
        if self.field.is_real() {
            let s = &self.free;
            if s.is_zero() {
                // Pure torsion is nilpotent.
                return Err(Nonunit::NotUnit);
            }
            if !arith::divides_power_of(s.numer().magnitude(), modulus) {
                return Err(Nonunit::NotUnit);
            }
            let s_inv = LocScalar {
                field: self.field,
                two_inverted: self.two_inverted,
                free: s.recip(),
                torsion: WittClass::zero(self.field),
            };
            // x = s (1 + n) with n = t/s nilpotent: x^{-1} = s^{-1} sum (-n)^k.
            let n = LocScalar {
                field: self.field,
                two_inverted: self.two_inverted,
                free: BigRational::zero(),
                torsion: Self::torsion_times(&self.torsion, &s.recip()),
            };
            let mut acc = Self::one(self.field, self.two_inverted);
            let mut term = acc.clone();
            for _ in 0..8 {
                term = term.mul(&n.neg());
                if term.is_zero() {
                    return Ok(s_inv.mul(&acc));
                }
                acc = acc.add(&term);
            }
            unreachable!("torsion of W(Q) is nilpotent of small order");
        }
        // Finite and quadratically closed fields: W(k) is a finite local ring
        // whose units are the classes of odd rank.
        if !self.torsion.rank_parity() {
            return Err(Nonunit::NotUnit);
        }
        let one = Self::one(self.field, self.two_inverted);
        candidates(self.field)
            .into_iter()
            .map(|w| LocScalar::from_witt(&w, self.two_inverted))
            .find(|y| self.mul(y) == one)
            .ok_or(Nonunit::NotUnit)
    }
}

fn candidates(field: FieldSpec) -> Vec<WittClass> {
    use crate::witt::{witt_class, FpClass, QForm};
    match field {
        FieldSpec::FinitePrime(p) => FpClass::all()
            .into_iter()
            .map(|c| {
                let e: Vec<i64> = c.representative(p).into_iter().map(|a| a as i64).collect();
                witt_class(&QForm::diagonal(field, &e).expect("residues"))
            })
            .collect(),
        FieldSpec::QuadraticallyClosed => vec![WittClass::zero(field), WittClass::one(field)],
        _ => vec![],
    }
}

impl fmt::Display for LocScalar {
    /// `a/b` for the signature part, followed by the torsion literal.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = !self.torsion.is_zero();
        if self.field.is_real() {
            if !self.free.is_zero() || !t {
                write!(f, "{}", self.free)?;
            }
            if t {
                if !self.free.is_zero() {
                    write!(f, " + ")?;
                }
                write!(f, "{}", self.torsion.to_literal())?;
            }
            Ok(())
        } else {
            write!(f, "{}", self.torsion.to_literal())
        }
    }
}

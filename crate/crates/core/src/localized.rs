//! Laurent series in `e` over `W(k)[1/M]`: the localized ring
//! `A(BN)[(M e)^{-1}]` and its twisted module.
//!
//! Inverting `e` forces `q0 = -1` because `(1 + q0) e = 0`, so localized
//! classes carry no q0 component. A γ-twisted class is `ẽ` times a Laurent
//! series; multiplying two twisted classes uses the value of `ẽ^2`.
//!
//! Precision is tracked as an absolute bound: coefficients of `e^i` for
//! `i >= precision` are unknown. Exact classes (polynomial data such as
//! Euler-table entries) have no bound.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use thiserror::Error;

use crate::arith;
use crate::bn::BNElem;
use crate::scalar::{LocScalar, Nonunit};
use crate::witt::FieldSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LocalError {
    #[error("twist parities differ in a sum")]
    TagMismatch,
    #[error("leading coefficient {coeff} at e^{exponent} is not invertible after inverting {modulus}")]
    NonUnitLeading { exponent: i64, coeff: String, modulus: u64 },
    #[error("the zero class has no inverse")]
    ZeroClass,
    #[error("fields differ: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("product of two twisted classes needs the value of ẽ^2")]
    NeedsSquareRule,
}

/// Parity of the twist by `γ_N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Twist {
    Untwisted,
    Gamma,
}

impl Twist {
    pub fn from_parity(odd: bool) -> Twist {
        if odd {
            Twist::Gamma
        } else {
            Twist::Untwisted
        }
    }

    pub fn is_twisted(&self) -> bool {
        *self == Twist::Gamma
    }

    pub fn combine(self, other: Twist) -> Twist {
        Twist::from_parity(self.is_twisted() ^ other.is_twisted())
    }
}

impl fmt::Display for Twist {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Twist::Untwisted => write!(f, "untwisted"),
            Twist::Gamma => write!(f, "gamma"),
        }
    }
}

fn min_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.min(y)),
        (Some(x), None) | (None, Some(x)) => Some(x),
        (None, None) => None,
    }
}

fn add_opt(a: Option<i64>, b: Option<i64>) -> Option<i64> {
    Some(a? + b?)
}

/// A truncated Laurent series over `W(k)[1/M]`, tagged with a twist parity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizedClass {
    field: FieldSpec,
    tag: Twist,
    modulus: u64,
    coeffs: BTreeMap<i64, LocScalar>,
    precision: Option<i64>,
}

impl LocalizedClass {
    /// Builds a class from `(exponent, coefficient)` pairs; repeated
    /// exponents are summed and terms at or beyond the precision dropped.
    pub fn from_terms(
        field: FieldSpec,
        modulus: u64,
        tag: Twist,
        terms: impl IntoIterator<Item = (i64, LocScalar)>,
        precision: Option<i64>,
    ) -> Self {
        assert!(modulus >= 1, "modulus must be positive");
        let two = modulus % 2 == 0;
        let mut coeffs: BTreeMap<i64, LocScalar> = BTreeMap::new();
        for (i, c) in terms {
            assert_eq!(c.field(), field, "coefficient over the wrong field");
            let c = c.with_two_inverted(two);
            match coeffs.get_mut(&i) {
                Some(x) => *x = x.add(&c),
                None => {
                    coeffs.insert(i, c);
                }
            }
        }
        let mut out = LocalizedClass { field, tag, modulus, coeffs, precision };
        out.normalize();
        out
    }

    pub fn zero(field: FieldSpec, modulus: u64, precision: Option<i64>) -> Self {
        Self::from_terms(field, modulus, Twist::Untwisted, [], precision)
    }

    pub fn one(field: FieldSpec, modulus: u64) -> Self {
        Self::monomial(LocScalar::one(field, modulus % 2 == 0), 0, modulus, Twist::Untwisted)
    }

    /// The exact class `c e^k`.
    pub fn monomial(c: LocScalar, k: i64, modulus: u64, tag: Twist) -> Self {
        Self::from_terms(c.field(), modulus, tag, [(k, c)], None)
    }

    fn normalize(&mut self) {
        let two = self.modulus % 2 == 0;
        let prec = self.precision;
        self.coeffs.retain(|i, _| prec.is_none_or(|p| *i < p));
        for c in self.coeffs.values_mut() {
            *c = c.with_two_inverted(two);
        }
        self.coeffs.retain(|_, c| !c.is_zero());
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn tag(&self) -> Twist {
        self.tag
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn precision(&self) -> Option<i64> {
        self.precision
    }

    pub fn is_exact(&self) -> bool {
        self.precision.is_none()
    }

    /// True when every known coefficient vanishes.
    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Exponent of the first nonzero coefficient.
    pub fn valuation(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    /// Coefficient of `e^i`, or `None` when it lies beyond the precision.
    pub fn coeff(&self, i: i64) -> Option<LocScalar> {
        if self.precision.is_some_and(|p| i >= p) {
            return None;
        }
        Some(self.coeffs.get(&i).cloned().unwrap_or_else(|| LocScalar::zero(self.field, self.modulus % 2 == 0)))
    }

    /// Nonzero terms in ascending exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &LocScalar)> {
        self.coeffs.iter().map(|(i, c)| (*i, c))
    }

    /// Order of the pole at `e = 0` (0 when there are no negative exponents).
    pub fn pole_order(&self) -> i64 {
        self.valuation().map_or(0, |v| (-v).max(0))
    }

    /// Same class in `W(k)[1/M']` for a multiple `M'` of the modulus.
    pub fn with_modulus(&self, modulus: u64) -> Self {
        let m = arith::lcm_u64(self.modulus, modulus);
        let mut out = self.clone();
        out.modulus = m;
        out.normalize();
        out
    }

    pub fn with_tag(&self, tag: Twist) -> Self {
        let mut out = self.clone();
        out.tag = tag;
        out
    }

    /// Drops coefficients at exponents `>= precision`.
    pub fn truncated(&self, precision: i64) -> Self {
        let mut out = self.clone();
        out.precision = min_opt(self.precision, Some(precision));
        out.normalize();
        out
    }

    fn effective_valuation(&self) -> Option<i64> {
        self.valuation().or(self.precision)
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self), LocalError> {
        if self.field != other.field {
            return Err(LocalError::FieldMismatch(self.field, other.field));
        }
        Ok((self.with_modulus(other.modulus), other.with_modulus(self.modulus)))
    }

    pub fn add(&self, other: &Self) -> Result<Self, LocalError> {
        let (a, b) = self.aligned(other)?;
        let tag = match (a.tag == b.tag, a.is_zero(), b.is_zero()) {
            (true, _, _) => a.tag,
            (false, true, _) => b.tag,
            (false, _, true) => a.tag,
            _ => return Err(LocalError::TagMismatch),
        };
        let terms = a.coeffs.into_iter().chain(b.coeffs);
        Ok(Self::from_terms(a.field, a.modulus, tag, terms, min_opt(a.precision, b.precision)))
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.coeffs.values_mut() {
            *c = c.neg();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self, LocalError> {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &LocScalar) -> Self {
        let terms: Vec<_> = self.coeffs.iter().map(|(i, a)| (*i, a.mul(c))).collect();
        let two = self.modulus % 2 == 0 || c.two_inverted();
        let m = if two && self.modulus % 2 == 1 { self.modulus * 2 } else { self.modulus };
        Self::from_terms(self.field, m, self.tag, terms, self.precision)
    }

    /// Multiplication by `e^k`.
    pub fn shift(&self, k: i64) -> Self {
        let terms: Vec<_> = self.coeffs.iter().map(|(i, a)| (i + k, a.clone())).collect();
        Self::from_terms(self.field, self.modulus, self.tag, terms, self.precision.map(|p| p + k))
    }

    /// Product of the underlying Laurent series, with tags added mod 2.
    /// The result of multiplying two twisted classes still carries a
    /// factor `ẽ^2` that the caller must resolve.
    fn raw_mul(&self, other: &Self) -> Result<Self, LocalError> {
        let (a, b) = self.aligned(other)?;
        let precision = min_opt(
            add_opt(a.precision, b.effective_valuation()),
            add_opt(b.precision, a.effective_valuation()),
        );
        let mut terms = Vec::new();
        for (i, x) in &a.coeffs {
            for (j, y) in &b.coeffs {
                if precision.is_none_or(|p| i + j < p) {
                    terms.push((i + j, x.mul(y)));
                }
            }
        }
        // A product of two exact zeros with no valuation stays exact.
        Ok(Self::from_terms(a.field, a.modulus, a.tag.combine(b.tag), terms, precision))
    }

    /// Product when at most one factor is twisted.
    pub fn try_mul(&self, other: &Self) -> Result<Self, LocalError> {
        if self.tag.is_twisted() && other.tag.is_twisted() {
            return Err(LocalError::NeedsSquareRule);
        }
        self.raw_mul(other)
    }

    /// True when both classes have the same coefficients on every exponent
    /// known to both.
    pub fn agrees_with(&self, other: &Self) -> bool {
        if self.field != other.field {
            return false;
        }
        if self.tag != other.tag && !(self.is_zero() && other.is_zero()) {
            return false;
        }
        let (a, b) = (self.with_modulus(other.modulus), other.with_modulus(self.modulus));
        let bound = min_opt(a.precision, b.precision);
        let keys: std::collections::BTreeSet<i64> = a.coeffs.keys().chain(b.coeffs.keys()).copied().collect();
        keys.into_iter().filter(|k| bound.is_none_or(|p| *k < p)).all(|k| a.coeff(k) == b.coeff(k))
    }
}

impl fmt::Display for LocalizedClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self
            .coeffs
            .iter()
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("({c})*e"),
                _ => format!("({c})*e^{i}"),
            })
            .collect();
        if let Some(p) = self.precision {
            parts.push(format!("O(e^{p})"));
        }
        let body = if parts.is_empty() { "0".to_string() } else { parts.join(" + ") };
        match self.tag {
            Twist::Untwisted => write!(f, "{body}"),
            Twist::Gamma => write!(f, "et*({body})"),
        }
    }
}

/// The localized ring `W(k)[1/M]((e))` together with the twisted module,
/// with a fixed inversion depth and the value of `ẽ^2`.
#[derive(Debug, Clone)]
pub struct LocalizedRing {
    field: FieldSpec,
    modulus: u64,
    truncation: usize,
    etilde_square: Option<LocalizedClass>,
}

impl LocalizedRing {
    pub fn new(field: FieldSpec, modulus: u64, truncation: usize, etilde_square: Option<LocalizedClass>) -> Self {
        assert!(modulus >= 1 && truncation >= 1);
        let etilde_square = etilde_square.map(|s| s.with_modulus(modulus));
        LocalizedRing { field, modulus, truncation, etilde_square }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn truncation(&self) -> usize {
        self.truncation
    }

    pub fn etilde_square(&self) -> Option<&LocalizedClass> {
        self.etilde_square.as_ref()
    }

    pub fn one(&self) -> LocalizedClass {
        LocalizedClass::one(self.field, self.modulus)
    }

    pub fn zero(&self) -> LocalizedClass {
        LocalizedClass::zero(self.field, self.modulus, None)
    }

    pub fn mul(&self, a: &LocalizedClass, b: &LocalizedClass) -> Result<LocalizedClass, LocalError> {
        let p = a.raw_mul(b)?.with_modulus(self.modulus);
        if a.tag.is_twisted() && b.tag.is_twisted() {
            let s = self.etilde_square.as_ref().ok_or(LocalError::NeedsSquareRule)?;
            return p.with_tag(Twist::Untwisted).raw_mul(s);
        }
        Ok(p)
    }

    /// Inverse of a class whose leading coefficient is a unit of `W(k)[1/M]`.
    ///
    /// The leading term is factored out and the remaining unit series
    /// `1 + u_1 e + ...` is inverted term by term up to the ring's
    /// truncation. A twisted class `ẽ g` has inverse `ẽ (g ẽ^2)^{-1}`.
    pub fn invert(&self, x: &LocalizedClass) -> Result<LocalizedClass, LocalError> {
        let x = x.with_modulus(self.modulus);
        if x.tag.is_twisted() {
            let s = self.etilde_square.as_ref().ok_or(LocalError::NeedsSquareRule)?;
            let g2 = x.with_tag(Twist::Untwisted).raw_mul(s)?;
            return Ok(self.invert_untwisted(&g2)?.with_tag(Twist::Gamma));
        }
        self.invert_untwisted(&x)
    }

    fn invert_untwisted(&self, x: &LocalizedClass) -> Result<LocalizedClass, LocalError> {
        let v = x.valuation().ok_or(LocalError::ZeroClass)?;
        let lead = x.coeffs[&v].clone();
        let lead_inv = lead.inverse(self.modulus).map_err(|e| match e {
            Nonunit::Zero => LocalError::ZeroClass,
            Nonunit::NotUnit => LocalError::NonUnitLeading { exponent: v, coeff: lead.to_string(), modulus: self.modulus },
        })?;
        let field = x.field;
        let m = x.modulus;
        if x.coeffs.len() == 1 && x.is_exact() {
            return Ok(LocalizedClass::monomial(lead_inv, -v, m, x.tag));
        }
        let t = self.truncation as i64;
        let r = match x.precision {
            Some(p) => (p - v).min(t),
            None => t,
        };
        let u: Vec<LocScalar> = (0..r).map(|k| x.coeff(v + k).expect("within precision").mul(&lead_inv)).collect();
        let mut y: Vec<LocScalar> = Vec::with_capacity(r as usize);
        let two = lead_inv.two_inverted() || m % 2 == 0;
        y.push(LocScalar::one(field, two));
        for k in 1..r as usize {
            let mut acc = LocScalar::zero(field, two);
            for j in 1..=k {
                if !u[j].is_zero() && !y[k - j].is_zero() {
                    acc = acc.add(&u[j].mul(&y[k - j]));
                }
            }
            y.push(acc.neg());
        }
        let terms: Vec<_> = y.into_iter().enumerate().map(|(k, c)| (k as i64 - v, c.mul(&lead_inv))).collect();
        Ok(LocalizedClass::from_terms(field, m, x.tag, terms, Some(r - v)))
    }

    /// `x^n` for `n >= 0`.
    pub fn pow(&self, x: &LocalizedClass, n: u32) -> Result<LocalizedClass, LocalError> {
        let mut acc = self.one();
        for _ in 0..n {
            acc = self.mul(&acc, x)?;
        }
        Ok(acc)
    }
}

/// Image of `f + c q0` in `A(BN)[(M e)^{-1}]`: `q0` becomes `-1`.
pub fn localize(a: &BNElem, modulus: u64) -> LocalizedClass {
    let field = a.field();
    let two = modulus % 2 == 0;
    let f = a.e_part();
    let mut terms: Vec<(i64, LocScalar)> =
        f.coeffs().iter().enumerate().map(|(i, c)| (i as i64, LocScalar::from_witt(c, two))).collect();
    terms.push((0, LocScalar::from_witt(a.q0_part(), two).neg()));
    LocalizedClass::from_terms(field, modulus, Twist::Untwisted, terms, Some(f.truncation() as i64))
}

/// Inverse of `x` in the localized ring; see [`LocalizedRing::invert`].
pub fn loc_invert(x: &LocalizedClass, ring: &LocalizedRing) -> Result<LocalizedClass, LocalError> {
    ring.invert(x)
}

/// `n` as a scalar of `W(k)[1/M]`.
pub fn integer_scalar(field: FieldSpec, n: i64, modulus: u64) -> LocScalar {
    LocScalar::from_integer(field, n, modulus % 2 == 0)
}

/// `a/b` as a scalar of `W(k)[1/M]`.
pub fn rational_scalar(field: FieldSpec, a: i64, b: i64, modulus: u64) -> LocScalar {
    LocScalar::from_integer(field, a, modulus % 2 == 0).div_integer(&BigInt::from(b))
}

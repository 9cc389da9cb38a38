//! The ring `A(BN)` and the twisted module `A(BN; γ)` in normal form.
//!
//! Every element of `A(BN)` is written uniquely as `f(e) + c q0` with `f` a
//! power series in the degree-2 class `e` and `c` a coefficient, subject to
//!
//! ```text
//! q0^2 = 1,    (1 + q0) e = 0.
//! ```
//!
//! Elements of the twisted module are `g(e) ẽ + c1 q1`, with
//! `(1 + q0) ẽ = 0` and `(1 + q0) q1 = 0`. Products `e^i q1` for `i >= 1`
//! are not determined by these relations and are rejected.

use std::fmt;

use thiserror::Error;

use crate::series::{e_power, write_terms, PowerSeries};
use crate::witt::{FieldSpec, WittClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("coefficient theories differ: {0} vs {1}")]
    TheoryMismatch(String, String),
    #[error("fields differ: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("e^i * q1 with i >= 1 has no reduction in A(BN; γ)")]
    UnreducedQ1Product,
    #[error("product of twisted elements with a q1 component is not determined")]
    UnspecifiedProduct,
    #[error("finite level m = {0} must be odd")]
    EvenLevel(i64),
    #[error("finite level m = {0} must be at least 3")]
    InvalidLevel(i64),
    #[error("element is not homogeneous of degree {0}")]
    NotHomogeneous(i64),
    #[error("projective dimension {0} must be at least 1")]
    InvalidDimension(i64),
}

/// Set of degrees carrying coefficients: a union of residue classes modulo
/// `modulus`, or a finite set of integers when `modulus` is 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeSet {
    pub modulus: u32,
    pub residues: Vec<i64>,
}

impl DegreeSet {
    pub fn contains(&self, d: i64) -> bool {
        if self.modulus == 0 {
            self.residues.contains(&d)
        } else {
            let m = self.modulus as i64;
            self.residues.iter().any(|r| (d - r).rem_euclid(m) == 0)
        }
    }
}

/// Coefficient theory: where `A(S)` is nonzero, as a graded `W(k)`-module.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum CoeffTheory {
    /// Witt-sheaf cohomology, `W(k)` in degree 0.
    HW,
    /// Witt K-theory, `W(k)` in every degree divisible by 4.
    KW,
    /// A theory given by a custom Euler table.
    Custom { name: String, degrees: DegreeSet },
}

impl CoeffTheory {
    pub fn degrees(&self) -> DegreeSet {
        match self {
            CoeffTheory::HW => DegreeSet { modulus: 0, residues: vec![0] },
            CoeffTheory::KW => DegreeSet { modulus: 4, residues: vec![0] },
            CoeffTheory::Custom { degrees, .. } => degrees.clone(),
        }
    }

    fn check_same(&self, other: &CoeffTheory) -> Result<(), RingError> {
        if self == other {
            Ok(())
        } else {
            Err(RingError::TheoryMismatch(self.to_string(), other.to_string()))
        }
    }
}

impl fmt::Display for CoeffTheory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoeffTheory::HW => write!(f, "HW"),
            CoeffTheory::KW => write!(f, "KW"),
            CoeffTheory::Custom { name, .. } => write!(f, "custom:{name}"),
        }
    }
}

fn check_field(a: FieldSpec, b: FieldSpec) -> Result<(), RingError> {
    if a == b {
        Ok(())
    } else {
        Err(RingError::FieldMismatch(a, b))
    }
}

/// `f(e) + c q0` in `A(BN)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BNElem {
    f: PowerSeries,
    c: WittClass,
    degree: Option<i64>,
    theory: CoeffTheory,
}

impl BNElem {
    pub fn new(f: PowerSeries, c: WittClass, theory: CoeffTheory) -> Self {
        assert_eq!(f.field(), c.field(), "e-part and q0-part over different fields");
        BNElem { f, c, degree: None, theory }
    }

    pub fn zero(field: FieldSpec, theory: CoeffTheory, truncation: usize) -> Self {
        Self::new(PowerSeries::zero(field, truncation), WittClass::zero(field), theory)
    }

    pub fn constant(c: WittClass, theory: CoeffTheory, truncation: usize) -> Self {
        let field = c.field();
        Self::new(PowerSeries::constant(c, truncation), WittClass::zero(field), theory)
    }

    pub fn integer(field: FieldSpec, n: i64, theory: CoeffTheory, truncation: usize) -> Self {
        Self::constant(WittClass::from_integer(field, n), theory, truncation)
    }

    /// `c e^i`.
    pub fn e_power(c: WittClass, i: usize, theory: CoeffTheory, truncation: usize) -> Self {
        let field = c.field();
        Self::new(PowerSeries::monomial(c, i, truncation), WittClass::zero(field), theory)
    }

    pub fn e(field: FieldSpec, theory: CoeffTheory, truncation: usize) -> Self {
        Self::e_power(WittClass::one(field), 1, theory, truncation)
    }

    pub fn q0(field: FieldSpec, theory: CoeffTheory, truncation: usize) -> Self {
        Self::new(PowerSeries::zero(field, truncation), WittClass::one(field), theory)
    }

    /// Asserts homogeneity of degree `n`, checked against the grading.
    pub fn with_degree(mut self, n: i64) -> Result<Self, RingError> {
        if !grading_check(&self, n) {
            return Err(RingError::NotHomogeneous(n));
        }
        self.degree = Some(n);
        Ok(self)
    }

    pub fn e_part(&self) -> &PowerSeries {
        &self.f
    }

    pub fn q0_part(&self) -> &WittClass {
        &self.c
    }

    pub fn degree(&self) -> Option<i64> {
        self.degree
    }

    pub fn theory(&self) -> &CoeffTheory {
        &self.theory
    }

    pub fn field(&self) -> FieldSpec {
        self.c.field()
    }

    pub fn truncation(&self) -> usize {
        self.f.truncation()
    }

    pub fn is_zero(&self) -> bool {
        self.f.is_zero() && self.c.is_zero()
    }

    /// Equality of normal forms, ignoring asserted degrees.
    pub fn same_class(&self, other: &BNElem) -> bool {
        self.f == other.f && self.c == other.c && self.theory == other.theory
    }

    pub fn neg(&self) -> BNElem {
        BNElem { f: self.f.neg(), c: -&self.c, degree: self.degree, theory: self.theory.clone() }
    }

    pub fn scale(&self, w: &WittClass) -> BNElem {
        BNElem { f: self.f.scale(w), c: &self.c * w, degree: self.degree, theory: self.theory.clone() }
    }

    fn compatible(&self, other: &BNElem) -> Result<(), RingError> {
        self.theory.check_same(&other.theory)?;
        check_field(self.field(), other.field())
    }
}

impl fmt::Display for BNElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self.f.coeffs().iter().enumerate().map(|(i, c)| (c.clone(), e_power(i))).collect();
        terms.push((self.c.clone(), "q0".to_string()));
        write_terms(f, &terms)
    }
}

pub fn bn_add(a: &BNElem, b: &BNElem) -> Result<BNElem, RingError> {
    a.compatible(b)?;
    let degree = match (a.degree, b.degree) {
        (Some(x), Some(y)) if x == y => Some(x),
        _ => None,
    };
    Ok(BNElem { f: a.f.add(&b.f), c: &a.c + &b.c, degree, theory: a.theory.clone() })
}

pub fn bn_sub(a: &BNElem, b: &BNElem) -> Result<BNElem, RingError> {
    bn_add(a, &b.neg())
}

/// Normal-form product. With `a = f + c q0`, `b = g + d q0`:
///
/// ```text
/// e-part  = f g - c (g - g(0)) - d (f - f(0)) + c d
/// q0-part = c g(0) + d f(0)
/// ```
pub fn bn_mul(a: &BNElem, b: &BNElem) -> Result<BNElem, RingError> {
    a.compatible(b)?;
    let t = a.truncation().min(b.truncation());
    let (f, g) = (a.f.truncate(t), b.f.truncate(t));
    let (c, d) = (&a.c, &b.c);
    let f0 = &f.coeffs()[0];
    let g0 = &g.coeffs()[0];
    let e_part = f
        .mul(&g)
        .sub(&g.without_constant().scale(c))
        .sub(&f.without_constant().scale(d))
        .add(&PowerSeries::constant(c * d, t));
    let q0_part = &(c * g0) + &(d * f0);
    let degree = match (a.degree, b.degree) {
        (Some(x), Some(y)) => Some(x + y),
        _ => None,
    };
    Ok(BNElem { f: e_part, c: q0_part, degree, theory: a.theory.clone() })
}

/// `g(e) ẽ + c1 q1` in `A(BN; γ)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwistedElem {
    g: PowerSeries,
    c1: WittClass,
    theory: CoeffTheory,
}

impl TwistedElem {
    pub fn new(g: PowerSeries, c1: WittClass, theory: CoeffTheory) -> Self {
        assert_eq!(g.field(), c1.field(), "ẽ-part and q1-part over different fields");
        TwistedElem { g, c1, theory }
    }

    pub fn zero(field: FieldSpec, theory: CoeffTheory, truncation: usize) -> Self {
        Self::new(PowerSeries::zero(field, truncation), WittClass::zero(field), theory)
    }

    /// `ẽ`, the Euler class of the relative tangent bundle.
    pub fn etilde(field: FieldSpec, theory: CoeffTheory, truncation: usize) -> Self {
        Self::new(PowerSeries::constant(WittClass::one(field), truncation), WittClass::zero(field), theory)
    }

    pub fn q1(field: FieldSpec, theory: CoeffTheory, truncation: usize) -> Self {
        Self::new(PowerSeries::zero(field, truncation), WittClass::one(field), theory)
    }

    pub fn etilde_part(&self) -> &PowerSeries {
        &self.g
    }

    pub fn q1_part(&self) -> &WittClass {
        &self.c1
    }

    pub fn theory(&self) -> &CoeffTheory {
        &self.theory
    }

    pub fn field(&self) -> FieldSpec {
        self.c1.field()
    }

    pub fn truncation(&self) -> usize {
        self.g.truncation()
    }

    pub fn is_zero(&self) -> bool {
        self.g.is_zero() && self.c1.is_zero()
    }

    pub fn neg(&self) -> TwistedElem {
        TwistedElem { g: self.g.neg(), c1: -&self.c1, theory: self.theory.clone() }
    }
}

impl fmt::Display for TwistedElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut terms: Vec<_> = self
            .g
            .coeffs()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                let mono = match i {
                    0 => "et".to_string(),
                    _ => format!("{}*et", e_power(i)),
                };
                (c.clone(), mono)
            })
            .collect();
        terms.push((self.c1.clone(), "q1".to_string()));
        write_terms(f, &terms)
    }
}

pub fn twisted_add(a: &TwistedElem, b: &TwistedElem) -> Result<TwistedElem, RingError> {
    a.theory.check_same(&b.theory)?;
    check_field(a.field(), b.field())?;
    Ok(TwistedElem { g: a.g.add(&b.g), c1: &a.c1 + &b.c1, theory: a.theory.clone() })
}

/// Action of `A(BN)` on `A(BN; γ)`: `q0 ẽ = -ẽ`, `q0 q1 = -q1`, and the
/// e-part acts on the ẽ-component by series multiplication.
pub fn twisted_scalar(b: &BNElem, t: &TwistedElem) -> Result<TwistedElem, RingError> {
    b.theory.check_same(&t.theory)?;
    check_field(b.field(), t.field())?;
    if !t.c1.is_zero() && b.f.support().any(|i| i >= 1) {
        return Err(RingError::UnreducedQ1Product);
    }
    let trunc = b.truncation().min(t.truncation());
    let f = b.f.truncate(trunc);
    let g = t.g.truncate(trunc);
    // (f + c q0) g ẽ = (f - c) g ẽ
    let g_new = f.sub(&PowerSeries::constant(b.c.clone(), trunc)).mul(&g);
    // (f(0) + c q0) c1 q1 = (f(0) - c) c1 q1
    let c1_new = &(&f.coeffs()[0] - &b.c) * &t.c1;
    Ok(TwistedElem { g: g_new, c1: c1_new, theory: b.theory.clone() })
}

/// Product of two twisted elements, valued in `A(BN)`, using the supplied
/// value of `ẽ^2`. Only defined when both q1-components vanish.
pub fn twisted_product(a: &TwistedElem, b: &TwistedElem, etilde_square: &BNElem) -> Result<BNElem, RingError> {
    a.theory.check_same(&b.theory)?;
    check_field(a.field(), b.field())?;
    if !a.c1.is_zero() || !b.c1.is_zero() {
        return Err(RingError::UnspecifiedProduct);
    }
    let gg = a.g.mul(&b.g);
    let trunc = gg.truncation().min(etilde_square.truncation());
    let prod = BNElem::new(gg.truncate(trunc), WittClass::zero(a.field()), a.theory.clone());
    bn_mul(&prod, etilde_square)
}

/// The split of `A(BN)` into the image of `A(BSL_2)` and the boundary part:
/// returns `(f, c)`, where the boundary map sends `q0` to 1.
pub fn decompose(a: &BNElem) -> (PowerSeries, WittClass) {
    (a.f.clone(), a.c.clone())
}

/// Image in the finite approximation `B_m N` for odd `m`: the kernel is the
/// ideal generated by `e^{m-1}`.
pub fn finite_level(a: &BNElem, m: i64) -> Result<BNElem, RingError> {
    if m % 2 == 0 {
        return Err(RingError::EvenLevel(m));
    }
    if m < 3 {
        return Err(RingError::InvalidLevel(m));
    }
    let k = (m - 1) as usize;
    Ok(BNElem { f: a.f.kill_from(k), c: a.c.clone(), degree: a.degree, theory: a.theory.clone() })
}

/// True iff every nonzero term of `a` sits in total degree `n`, with `e` in
/// degree 2, `q0` in degree 0 and coefficients in the theory's degrees.
pub fn grading_check(a: &BNElem, n: i64) -> bool {
    let degs = a.theory.degrees();
    let e_ok = a.f.support().all(|i| degs.contains(n - 2 * i as i64));
    let q_ok = a.c.is_zero() || degs.contains(n);
    e_ok && q_ok
}

/// One summand `A^{• - shift}(S)` of a projective-space decomposition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Summand {
    pub source: &'static str,
    pub shift: i64,
}

/// `A(P^n; O(k))` for an SL-oriented theory with η inverted, as a sum of
/// shifted copies of `A(S)`. Only the parity of the twist matters.
pub fn proj_space_table(n: i64, twist: i64) -> Result<Vec<Summand>, RingError> {
    if n < 1 {
        return Err(RingError::InvalidDimension(n));
    }
    let s = |shift| Summand { source: "A(S)", shift };
    let twisted = twist.rem_euclid(2) == 1;
    Ok(match (n % 2 == 1, twisted) {
        (true, false) => vec![s(0), s(n)],
        (true, true) => vec![],
        (false, false) => vec![s(0)],
        (false, true) => vec![s(n)],
    })
}

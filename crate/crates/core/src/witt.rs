//! Grothendieck–Witt and Witt rings of the supported base fields.
//!
//! Every [`WittClass`] is kept in a canonical form that is unique per class,
//! so equality of classes is structural equality:
//!
//! * reals: the signature;
//! * quadratically closed fields: the rank modulo 2;
//! * `F_p`: rank modulo 2 together with the square class of the signed
//!   discriminant `(-1)^{r(r-1)/2} det`;
//! * rationals: the signature, the residue at 2 (parity of the 2-adic
//!   valuation of the determinant) and the second residues at every odd
//!   prime, each an element of `W(F_p)`.
//!
//! For the rationals these coordinates are additive, which makes addition
//! cheap. Products go through canonical diagonal representatives.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

use crate::arith;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WittError {
    #[error("degenerate form: the Gram matrix has zero determinant")]
    DegenerateForm,
    #[error("Gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("zero is not a valid diagonal entry")]
    ZeroElement,
    #[error("field mismatch: {0} vs {1}")]
    FieldMismatch(FieldSpec, FieldSpec),
    #[error("operation requires a class over {expected}, got {actual}")]
    WrongField { expected: &'static str, actual: FieldSpec },
    #[error("{0} is not an odd prime")]
    InvalidPrime(u64),
    #[error("element {0} is not defined over F_{1}")]
    NotReducible(BigRational, u64),
}

/// The supported base fields, all of characteristic different from 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FieldSpec {
    Rationals,
    /// The reals, seen only through the signs of rational entries.
    Reals,
    FinitePrime(u64),
    QuadraticallyClosed,
}

impl FieldSpec {
    pub fn finite_prime(p: u64) -> Result<Self, WittError> {
        if p < 3 || !arith::is_prime(p) {
            return Err(WittError::InvalidPrime(p));
        }
        Ok(FieldSpec::FinitePrime(p))
    }

    /// Characteristic of the field (0 for the characteristic-zero fields).
    pub fn characteristic(&self) -> u64 {
        match self {
            FieldSpec::FinitePrime(p) => *p,
            _ => 0,
        }
    }

    /// True for fields with an ordering, where `W(k)` has a free part.
    pub fn is_real(&self) -> bool {
        matches!(self, FieldSpec::Rationals | FieldSpec::Reals)
    }

    fn check_same(&self, other: &FieldSpec) -> Result<(), WittError> {
        if self == other {
            Ok(())
        } else {
            Err(WittError::FieldMismatch(*self, *other))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FieldSpec::Rationals => write!(f, "Q"),
            FieldSpec::Reals => write!(f, "R"),
            FieldSpec::FinitePrime(p) => write!(f, "F_{p}"),
            FieldSpec::QuadraticallyClosed => write!(f, "closed"),
        }
    }
}

impl std::str::FromStr for FieldSpec {
    type Err = String;

    /// Accepts `Q`, `R`, `F_p` (e.g. `F_5`) and `closed`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "Q" => Ok(FieldSpec::Rationals),
            "R" => Ok(FieldSpec::Reals),
            "closed" => Ok(FieldSpec::QuadraticallyClosed),
            other => {
                let p = other
                    .strip_prefix("F_")
                    .and_then(|p| p.parse::<u64>().ok())
                    .ok_or_else(|| format!("unknown field {other:?} (expected Q, R, F_p or closed)"))?;
                FieldSpec::finite_prime(p).map_err(|e| e.to_string())
            }
        }
    }
}

/// A nondegenerate diagonal form `<a_1, ..., a_n>`.
///
/// Over `F_p` the entries are stored as residues in `[1, p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QForm {
    field: FieldSpec,
    entries: Vec<BigRational>,
}

impl QForm {
    pub fn new(field: FieldSpec, entries: Vec<BigRational>) -> Result<Self, WittError> {
        let entries = entries
            .into_iter()
            .map(|a| normalize_entry(field, a))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(QForm { field, entries })
    }

    /// Convenience constructor from integer entries.
    pub fn diagonal(field: FieldSpec, entries: &[i64]) -> Result<Self, WittError> {
        Self::new(field, entries.iter().map(|&a| BigRational::from_integer(a.into())).collect())
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn entries(&self) -> &[BigRational] {
        &self.entries
    }

    pub fn rank(&self) -> usize {
        self.entries.len()
    }

    pub fn determinant(&self) -> BigRational {
        let d = self.entries.iter().fold(BigRational::one(), |acc, a| acc * a);
        match self.field {
            FieldSpec::FinitePrime(p) => {
                BigRational::from_integer(arith::rational_mod(&d, p).expect("residues").into())
            }
            _ => d,
        }
    }

    pub fn direct_sum(&self, other: &QForm) -> Result<QForm, WittError> {
        self.field.check_same(&other.field)?;
        let mut entries = self.entries.clone();
        entries.extend(other.entries.iter().cloned());
        Ok(QForm { field: self.field, entries })
    }

    pub fn tensor(&self, other: &QForm) -> Result<QForm, WittError> {
        self.field.check_same(&other.field)?;
        let mut entries = Vec::with_capacity(self.rank() * other.rank());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(normalize_entry(self.field, a * b)?);
            }
        }
        Ok(QForm { field: self.field, entries })
    }
}

impl fmt::Display for QForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        write!(f, "<")?;
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ">")
    }
}

fn normalize_entry(field: FieldSpec, a: BigRational) -> Result<BigRational, WittError> {
    if a.is_zero() {
        return Err(WittError::ZeroElement);
    }
    match field {
        FieldSpec::FinitePrime(p) => {
            let r = arith::rational_mod(&a, p).ok_or_else(|| WittError::NotReducible(a.clone(), p))?;
            if r == 0 {
                return Err(WittError::ZeroElement);
            }
            Ok(BigRational::from_integer(r.into()))
        }
        _ => Ok(a),
    }
}

/// Field operations used by Gram–Schmidt diagonalization.
trait GramScalar: Clone {
    fn vanishes(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
}

impl GramScalar for BigRational {
    fn vanishes(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
}

#[derive(Clone, Copy)]
struct Residue {
    v: u64,
    p: u64,
}

impl GramScalar for Residue {
    fn vanishes(&self) -> bool {
        self.v == 0
    }
    fn add(&self, o: &Self) -> Self {
        Residue { v: (self.v + o.v) % self.p, p: self.p }
    }
    fn sub(&self, o: &Self) -> Self {
        Residue { v: (self.v + self.p - o.v) % self.p, p: self.p }
    }
    fn mul(&self, o: &Self) -> Self {
        Residue { v: arith::mul_mod(self.v, o.v, self.p), p: self.p }
    }
    fn div(&self, o: &Self) -> Self {
        Residue { v: arith::mul_mod(self.v, arith::inv_mod(o.v, self.p), self.p), p: self.p }
    }
}

fn gram_schmidt<S: GramScalar>(mut a: Vec<Vec<S>>) -> Result<Vec<S>, WittError> {
    let n = a.len();
    let mut diag = Vec::with_capacity(n);
    for k in 0..n {
        if a[k][k].vanishes() {
            if let Some(j) = (k + 1..n).find(|&j| !a[j][j].vanishes()) {
                a.swap(k, j);
                for row in a.iter_mut() {
                    row.swap(k, j);
                }
            } else if let Some(j) = (k + 1..n).find(|&j| !a[k][j].vanishes()) {
                // e_k <- e_k + e_j; the new diagonal entry is 2 a_kj != 0.
                for c in 0..n {
                    let v = a[k][c].add(&a[j][c]);
                    a[k][c] = v;
                }
                for r in 0..n {
                    let v = a[r][k].add(&a[r][j]);
                    a[r][k] = v;
                }
            } else {
                return Err(WittError::DegenerateForm);
            }
        }
        let pivot = a[k][k].clone();
        for i in k + 1..n {
            if a[i][k].vanishes() {
                continue;
            }
            let factor = a[i][k].div(&pivot);
            for c in k..n {
                let v = a[i][c].sub(&factor.mul(&a[k][c]));
                a[i][c] = v;
            }
            for r in k..n {
                let v = a[r][i].sub(&factor.mul(&a[r][k]));
                a[r][i] = v;
            }
        }
        diag.push(pivot);
    }
    Ok(diag)
}

/// Diagonalizes a symmetric Gram matrix by symmetric Gaussian elimination.
pub fn diagonalize(gram: &[Vec<BigRational>], field: FieldSpec) -> Result<QForm, WittError> {
    let n = gram.len();
    if gram.iter().any(|row| row.len() != n) {
        return Err(WittError::NotSymmetric);
    }
    for i in 0..n {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(WittError::NotSymmetric);
            }
        }
    }
    match field {
        FieldSpec::FinitePrime(p) => {
            let m = gram
                .iter()
                .map(|row| {
                    row.iter()
                        .map(|x| {
                            arith::rational_mod(x, p)
                                .map(|v| Residue { v, p })
                                .ok_or_else(|| WittError::NotReducible(x.clone(), p))
                        })
                        .collect::<Result<Vec<_>, _>>()
                })
                .collect::<Result<Vec<_>, _>>()?;
            let d = gram_schmidt(m)?;
            QForm::new(field, d.into_iter().map(|r| BigRational::from_integer(r.v.into())).collect())
        }
        _ => {
            let d = gram_schmidt(gram.to_vec())?;
            QForm::new(field, d)
        }
    }
}

/// An element of `W(F_p)`: rank parity and the square class of the signed
/// discriminant. `W(F_p)` has exactly four elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FpClass {
    pub odd_rank: bool,
    pub nonsquare_disc: bool,
}

impl FpClass {
    pub const ZERO: FpClass = FpClass { odd_rank: false, nonsquare_disc: false };
    pub const ONE: FpClass = FpClass { odd_rank: true, nonsquare_disc: false };

    pub fn is_zero(&self) -> bool {
        *self == Self::ZERO
    }

    /// All four elements of `W(F_p)`.
    pub fn all() -> [FpClass; 4] {
        [
            FpClass { odd_rank: false, nonsquare_disc: false },
            FpClass { odd_rank: true, nonsquare_disc: false },
            FpClass { odd_rank: true, nonsquare_disc: true },
            FpClass { odd_rank: false, nonsquare_disc: true },
        ]
    }

    /// Class of a diagonal form with residue entries.
    pub fn of_residues(entries: &[u64], p: u64) -> FpClass {
        let r = entries.len() as u64;
        let mut d = entries.iter().fold(1u64, |acc, &a| arith::mul_mod(acc, a % p, p));
        if (r * r.saturating_sub(1) / 2) % 2 == 1 {
            d = p - d;
        }
        FpClass { odd_rank: r % 2 == 1, nonsquare_disc: !arith::is_square_mod(d, p) }
    }

    /// Canonical diagonal representative with entries in `[1, p)`.
    pub fn representative(&self, p: u64) -> Vec<u64> {
        let n = arith::least_nonsquare(p);
        match (self.odd_rank, self.nonsquare_disc) {
            (false, false) => vec![],
            (true, false) => vec![1],
            (true, true) => vec![n],
            (false, true) => vec![1, p - n],
        }
    }

    pub fn add(&self, other: &FpClass, p: u64) -> FpClass {
        let mut e = self.representative(p);
        e.extend(other.representative(p));
        Self::of_residues(&e, p)
    }

    pub fn neg(&self, p: u64) -> FpClass {
        let e: Vec<u64> = self.representative(p).into_iter().map(|a| p - a).collect();
        Self::of_residues(&e, p)
    }

    pub fn mul(&self, other: &FpClass, p: u64) -> FpClass {
        let a = self.representative(p);
        let b = other.representative(p);
        let e: Vec<u64> = a.iter().flat_map(|x| b.iter().map(move |y| arith::mul_mod(*x, *y, p))).collect();
        Self::of_residues(&e, p)
    }
}

/// Canonical data of a Witt class, one variant per field kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Canonical {
    Real { signature: i64 },
    Rational { signature: i64, two_adic: bool, residues: BTreeMap<u64, FpClass> },
    Finite(FpClass),
    Closed { odd_rank: bool },
}

/// An element of the Witt ring `W(k)` in canonical form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct WittClass {
    field: FieldSpec,
    canon: Canonical,
}

/// Reduces a diagonal form to its Witt class.
pub fn witt_class(form: &QForm) -> WittClass {
    let field = form.field;
    let canon = match field {
        FieldSpec::Reals => Canonical::Real { signature: signature_of(form.entries()) },
        FieldSpec::QuadraticallyClosed => Canonical::Closed { odd_rank: form.rank() % 2 == 1 },
        FieldSpec::FinitePrime(p) => {
            let res: Vec<u64> = form.entries().iter().map(|a| a.to_integer().to_u64().expect("residue")).collect();
            Canonical::Finite(FpClass::of_residues(&res, p))
        }
        FieldSpec::Rationals => rational_canonical(form.entries()),
    };
    WittClass { field, canon }
}

fn signature_of(entries: &[BigRational]) -> i64 {
    entries.iter().map(|a| if a.is_positive() { 1 } else { -1 }).sum()
}

fn rational_canonical(entries: &[BigRational]) -> Canonical {
    let mut two_adic = false;
    let mut residues: BTreeMap<u64, FpClass> = BTreeMap::new();
    for a in entries {
        let u = arith::squarefree_class(a);
        for (q, _) in arith::factor(u.magnitude()) {
            let q = q.to_u64().expect("prime factor fits in u64");
            if q == 2 {
                two_adic = !two_adic;
                continue;
            }
            let unit = BigRational::from_integer(&u / BigInt::from(q));
            let r = arith::rational_mod(&unit, q).expect("squarefree unit part");
            let cls = FpClass::of_residues(&[r], q);
            let entry = residues.entry(q).or_default();
            *entry = entry.add(&cls, q);
        }
    }
    residues.retain(|_, c| !c.is_zero());
    Canonical::Rational { signature: signature_of(entries), two_adic, residues }
}

impl WittClass {
    pub fn zero(field: FieldSpec) -> Self {
        witt_class(&QForm { field, entries: vec![] })
    }

    pub fn one(field: FieldSpec) -> Self {
        Self::from_integer(field, 1)
    }

    /// `n * <1>`.
    pub fn from_integer(field: FieldSpec, n: i64) -> Self {
        let unit = if n >= 0 { 1 } else { -1 };
        let form = QForm::diagonal(field, &vec![unit; n.unsigned_abs() as usize]).expect("units are nonzero");
        witt_class(&form)
    }

    /// The symbol `<a>`.
    pub fn symbol(field: FieldSpec, a: &BigRational) -> Result<Self, WittError> {
        Ok(witt_class(&QForm::new(field, vec![a.clone()])?))
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn canonical(&self) -> &Canonical {
        &self.canon
    }

    pub fn is_zero(&self) -> bool {
        match &self.canon {
            Canonical::Real { signature } => *signature == 0,
            Canonical::Rational { signature, two_adic, residues } => *signature == 0 && !*two_adic && residues.is_empty(),
            Canonical::Finite(c) => c.is_zero(),
            Canonical::Closed { odd_rank } => !*odd_rank,
        }
    }

    /// Signature, for the real fields.
    pub fn signature(&self) -> Option<i64> {
        match &self.canon {
            Canonical::Real { signature } | Canonical::Rational { signature, .. } => Some(*signature),
            _ => None,
        }
    }

    /// Rank modulo 2, a ring homomorphism `W(k) -> Z/2`.
    pub fn rank_parity(&self) -> bool {
        match &self.canon {
            Canonical::Real { signature } => signature % 2 != 0,
            Canonical::Rational { signature, .. } => signature % 2 != 0,
            Canonical::Finite(c) => c.odd_rank,
            Canonical::Closed { odd_rank } => *odd_rank,
        }
    }

    /// Canonical diagonal representative.
    pub fn representative(&self) -> QForm {
        let field = self.field;
        let ints = |v: Vec<i64>| QForm::diagonal(field, &v).expect("units");
        match &self.canon {
            Canonical::Real { signature } => ints(sign_units(*signature)),
            Canonical::Closed { odd_rank } => ints(if *odd_rank { vec![1] } else { vec![] }),
            Canonical::Finite(c) => {
                let p = field.characteristic();
                ints(c.representative(p).into_iter().map(|a| a as i64).collect())
            }
            Canonical::Rational { signature, two_adic, residues } => {
                rational_representative(*signature, *two_adic, residues)
            }
        }
    }

    /// The canonical representative written as a literal `<a1,...,an>`,
    /// or `0` for the zero class.
    pub fn to_literal(&self) -> String {
        self.representative().to_string()
    }

    pub fn try_add(&self, other: &WittClass) -> Result<WittClass, WittError> {
        self.field.check_same(&other.field)?;
        let canon = match (&self.canon, &other.canon) {
            (Canonical::Real { signature: a }, Canonical::Real { signature: b }) => Canonical::Real { signature: a + b },
            (Canonical::Closed { odd_rank: a }, Canonical::Closed { odd_rank: b }) => Canonical::Closed { odd_rank: a ^ b },
            (Canonical::Finite(a), Canonical::Finite(b)) => Canonical::Finite(a.add(b, self.field.characteristic())),
            (
                Canonical::Rational { signature: sa, two_adic: ta, residues: ra },
                Canonical::Rational { signature: sb, two_adic: tb, residues: rb },
            ) => {
                let mut residues = ra.clone();
                for (p, c) in rb {
                    let e = residues.entry(*p).or_default();
                    *e = e.add(c, *p);
                }
                residues.retain(|_, c| !c.is_zero());
                Canonical::Rational { signature: sa + sb, two_adic: ta ^ tb, residues }
            }
            _ => unreachable!("same field implies same canonical kind"),
        };
        Ok(WittClass { field: self.field, canon })
    }

    pub fn try_sub(&self, other: &WittClass) -> Result<WittClass, WittError> {
        self.try_add(&other.negated())
    }

    pub fn negated(&self) -> WittClass {
        let canon = match &self.canon {
            Canonical::Real { signature } => Canonical::Real { signature: -signature },
            Canonical::Closed { odd_rank } => Canonical::Closed { odd_rank: *odd_rank },
            Canonical::Finite(c) => Canonical::Finite(c.neg(self.field.characteristic())),
            Canonical::Rational { signature, two_adic, residues } => Canonical::Rational {
                signature: -signature,
                two_adic: *two_adic,
                residues: residues.iter().map(|(p, c)| (*p, c.neg(*p))).collect(),
            },
        };
        WittClass { field: self.field, canon }
    }

    pub fn try_mul(&self, other: &WittClass) -> Result<WittClass, WittError> {
        self.field.check_same(&other.field)?;
        match (&self.canon, &other.canon) {
            (Canonical::Real { signature: a }, Canonical::Real { signature: b }) => {
                Ok(WittClass { field: self.field, canon: Canonical::Real { signature: a * b } })
            }
            (Canonical::Closed { odd_rank: a }, Canonical::Closed { odd_rank: b }) => {
                Ok(WittClass { field: self.field, canon: Canonical::Closed { odd_rank: a & b } })
            }
            (Canonical::Finite(a), Canonical::Finite(b)) => Ok(WittClass {
                field: self.field,
                canon: Canonical::Finite(a.mul(b, self.field.characteristic())),
            }),
            (Canonical::Rational { signature: sa, .. }, Canonical::Rational { signature: sb, .. }) => {
                // (s_a + t_a)(s_b + t_b) with t the signature-zero (torsion) parts.
                let ta = self.torsion_part();
                let tb = other.torsion_part();
                let free = WittClass::from_integer(self.field, sa * sb);
                let cross = tb.times_integer(*sa).try_add(&ta.times_integer(*sb))?;
                let tt = if ta.is_zero() || tb.is_zero() {
                    WittClass::zero(self.field)
                } else {
                    witt_class(&ta.representative().tensor(&tb.representative())?)
                };
                free.try_add(&cross)?.try_add(&tt)
            }
            _ => unreachable!("same field implies same canonical kind"),
        }
    }

    /// The class minus its signature times `<1>`; the whole class over
    /// fields without an ordering. This is the torsion part of `W(k)`.
    pub fn torsion_part(&self) -> WittClass {
        match self.signature() {
            Some(s) => self.try_sub(&WittClass::from_integer(self.field, s)).expect("same field"),
            None => self.clone(),
        }
    }

    /// `n` times the class.
    pub fn times_integer(&self, n: i64) -> WittClass {
        if let Some(s) = self.signature() {
            if self.torsion_part().is_zero() {
                return WittClass::from_integer(self.field, s * n);
            }
        }
        // Torsion in W(k) for the supported fields has exponent dividing 4,
        // so only n mod 4 matters for the torsion part.
        let free = self.signature().map(|s| WittClass::from_integer(self.field, s * n));
        let t = self.torsion_part();
        let k = n.rem_euclid(4);
        let mut acc = WittClass::zero(self.field);
        for _ in 0..k {
            acc = acc.try_add(&t).expect("same field");
        }
        match free {
            Some(f) => f.try_add(&acc).expect("same field"),
            None => acc,
        }
    }

    /// Elements of `W(k)` that are units: odd rank for non-real fields,
    /// signature ±1 with nilpotent torsion for the real fields.
    pub fn is_unit(&self) -> bool {
        match self.signature() {
            Some(s) => s == 1 || s == -1,
            None => self.rank_parity(),
        }
    }
}

fn sign_units(signature: i64) -> Vec<i64> {
    let u = if signature >= 0 { 1 } else { -1 };
    vec![u; signature.unsigned_abs() as usize]
}

/// Builds a diagonal form over Q with prescribed canonical data: residues are
/// matched from the largest prime downward (a lift `<p d>` with `d < p` only
/// disturbs smaller primes), then the residue at 2, then the signature.
fn rational_representative(signature: i64, two_adic: bool, residues: &BTreeMap<u64, FpClass>) -> QForm {
    let field = FieldSpec::Rationals;
    let mut entries: Vec<BigRational> = Vec::new();
    let current = |entries: &[BigRational]| rational_canonical(entries);
    // Fix residues from the largest prime down. Lifting a residue at p by
    // <p d> with 0 < d < p only disturbs primes below p, so this ends.
    loop {
        let Canonical::Rational { residues: cur, .. } = current(&entries) else { unreachable!() };
        let primes: BTreeSet<u64> = residues.keys().chain(cur.keys()).copied().collect();
        let wrong = primes.into_iter().rev().find(|p| {
            cur.get(p).copied().unwrap_or_default() != residues.get(p).copied().unwrap_or_default()
        });
        let Some(p) = wrong else { break };
        let have = cur.get(&p).copied().unwrap_or_default();
        let target = residues.get(&p).copied().unwrap_or_default();
        let diff = target.add(&have.neg(p), p);
        for d in diff.representative(p) {
            entries.push(BigRational::from_integer(BigInt::from(p) * BigInt::from(d)));
        }
    }
    let Canonical::Rational { two_adic: cur_two, .. } = current(&entries) else { unreachable!() };
    if cur_two != two_adic {
        entries.push(BigRational::from_integer(2.into()));
    }
    let sig_now = signature_of(&entries);
    for u in sign_units(signature - sig_now) {
        entries.push(BigRational::from_integer(u.into()));
    }
    QForm { field, entries }
}

impl fmt::Display for WittClass {
    /// Integers for multiples of `<1>` over the real fields, otherwise the
    /// canonical literal.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(s) = self.signature() {
            if self.torsion_part().is_zero() {
                return write!(f, "{s}");
            }
        }
        write!(f, "{}", self.to_literal())
    }
}

impl Add for &WittClass {
    type Output = WittClass;
    fn add(self, rhs: &WittClass) -> WittClass {
        self.try_add(rhs).expect("witt classes over different fields")
    }
}

impl Sub for &WittClass {
    type Output = WittClass;
    fn sub(self, rhs: &WittClass) -> WittClass {
        self.try_sub(rhs).expect("witt classes over different fields")
    }
}

impl Mul for &WittClass {
    type Output = WittClass;
    fn mul(self, rhs: &WittClass) -> WittClass {
        self.try_mul(rhs).expect("witt classes over different fields")
    }
}

impl Neg for &WittClass {
    type Output = WittClass;
    fn neg(self) -> WittClass {
        self.negated()
    }
}

pub fn witt_add(a: &WittClass, b: &WittClass) -> Result<WittClass, WittError> {
    a.try_add(b)
}

pub fn witt_mul(a: &WittClass, b: &WittClass) -> Result<WittClass, WittError> {
    a.try_mul(b)
}

/// The trace form of `k(sqrt d)/k`, `Tr((x + y t)^2) = 2x^2 + 2d y^2`,
/// as the class of `<2, 2d>`.
pub fn trace_form(field: FieldSpec, d: &BigRational) -> Result<WittClass, WittError> {
    if d.is_zero() {
        return Err(WittError::ZeroElement);
    }
    let two = BigRational::from_integer(2.into());
    let form = QForm::new(field, vec![two.clone(), two * d])?;
    Ok(witt_class(&form))
}

/// Second residue homomorphism `W(Q) -> W(F_p)` at an odd prime.
pub fn second_residue(a: &WittClass, p: u64) -> Result<WittClass, WittError> {
    let Canonical::Rational { residues, .. } = &a.canon else {
        return Err(WittError::WrongField { expected: "Q", actual: a.field });
    };
    let field = FieldSpec::finite_prime(p)?;
    let c = residues.get(&p).copied().unwrap_or_default();
    Ok(WittClass { field, canon: Canonical::Finite(c) })
}

/// Residue at 2, valued in `W(F_2) = Z/2`.
pub fn residue_at_two(a: &WittClass) -> Result<bool, WittError> {
    match &a.canon {
        Canonical::Rational { two_adic, .. } => Ok(*two_adic),
        _ => Err(WittError::WrongField { expected: "Q", actual: a.field }),
    }
}

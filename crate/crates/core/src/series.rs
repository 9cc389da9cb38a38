//! Truncated power series in `e` with Witt-ring coefficients.

use std::fmt;

use crate::witt::{FieldSpec, WittClass};

/// Default number of known coefficients.
pub const DEFAULT_TRUNCATION: usize = 16;

/// `sum_{i < T} a_i e^i`; coefficients of `e^i` with `i >= T` are unknown.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PowerSeries {
    field: FieldSpec,
    coeffs: Vec<WittClass>,
}

impl PowerSeries {
    pub fn zero(field: FieldSpec, truncation: usize) -> Self {
        assert!(truncation >= 1, "truncation must be at least 1");
        PowerSeries { field, coeffs: vec![WittClass::zero(field); truncation] }
    }

    pub fn constant(c: WittClass, truncation: usize) -> Self {
        Self::monomial(c, 0, truncation)
    }

    /// `c e^i`, which is zero when `i` is beyond the truncation.
    pub fn monomial(c: WittClass, i: usize, truncation: usize) -> Self {
        let mut s = Self::zero(c.field(), truncation);
        if i < truncation {
            s.coeffs[i] = c;
        }
        s
    }

    /// Builds a series from `(exponent, coefficient)` pairs.
    pub fn from_terms(field: FieldSpec, terms: &[(usize, WittClass)], truncation: usize) -> Self {
        let mut s = Self::zero(field, truncation);
        for (i, c) in terms {
            if *i < truncation {
                s.coeffs[*i] = &s.coeffs[*i] + c;
            }
        }
        s
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, i: usize) -> Option<&WittClass> {
        self.coeffs.get(i)
    }

    pub fn coeffs(&self) -> &[WittClass] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(WittClass::is_zero)
    }

    /// Indices of the nonzero coefficients.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i)
    }

    pub fn truncate(&self, truncation: usize) -> Self {
        let t = truncation.min(self.truncation());
        PowerSeries { field: self.field, coeffs: self.coeffs[..t].to_vec() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let t = self.truncation().min(other.truncation());
        let coeffs = (0..t).map(|i| &self.coeffs[i] + &other.coeffs[i]).collect();
        PowerSeries { field: self.field, coeffs }
    }

    pub fn neg(&self) -> Self {
        PowerSeries { field: self.field, coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &WittClass) -> Self {
        PowerSeries { field: self.field, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let t = self.truncation().min(other.truncation());
        let mut coeffs = vec![WittClass::zero(self.field); t];
        for (i, a) in self.coeffs.iter().enumerate().take(t) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(t - i) {
                if b.is_zero() {
                    continue;
                }
                coeffs[i + j] = &coeffs[i + j] + &(a * b);
            }
        }
        PowerSeries { field: self.field, coeffs }
    }

    /// The series with its constant term removed, `f - f(0)`.
    pub fn without_constant(&self) -> Self {
        let mut s = self.clone();
        s.coeffs[0] = WittClass::zero(self.field);
        s
    }

    /// Sets every coefficient of `e^i` with `i >= k` to zero, keeping the
    /// truncation.
    pub fn kill_from(&self, k: usize) -> Self {
        let mut s = self.clone();
        for c in s.coeffs.iter_mut().skip(k) {
            *c = WittClass::zero(self.field);
        }
        s
    }
}

pub(crate) fn write_terms(f: &mut fmt::Formatter<'_>, terms: &[(WittClass, String)]) -> fmt::Result {
    let nonzero: Vec<_> = terms.iter().filter(|(c, _)| !c.is_zero()).collect();
    if nonzero.is_empty() {
        return write!(f, "0");
    }
    for (k, (c, mono)) in nonzero.iter().enumerate() {
        let coef = c.to_string();
        let (negative, mag) = match coef.strip_prefix('-') {
            Some(m) => (true, m),
            None => (false, coef.as_str()),
        };
        match (k, negative) {
            (0, true) => write!(f, "-")?,
            (0, false) => {}
            (_, true) => write!(f, " - ")?,
            (_, false) => write!(f, " + ")?,
        }
        match (mag, mono.is_empty()) {
            (_, true) => write!(f, "{mag}")?,
            ("1", false) => write!(f, "{mono}")?,
            _ => write!(f, "{mag}*{mono}")?,
        }
    }
    Ok(())
}

pub(crate) fn e_power(i: usize) -> String {
    match i {
        0 => String::new(),
        1 => "e".to_string(),
        _ => format!("e^{i}"),
    }
}

impl fmt::Display for PowerSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<_> = self.coeffs.iter().enumerate().map(|(i, c)| (c.clone(), e_power(i))).collect();
        write_terms(f, &terms)
    }
}

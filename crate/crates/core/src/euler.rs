//! Euler classes of the rank-two representations `Õ^±(m)` of `N`.
//!
//! The built-in tables give `ẽ^+(m) = m e` for odd `m` and
//! `ẽ^+(2n) = n ẽ` with `ẽ^2 = -4e`. Higher-order corrections vanish for
//! Witt-sheaf cohomology by degree reasons; the KW table uses the same
//! leading terms and sets every correction to zero, which is a modelling
//! choice rather than a computed fact.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde_json::Value;
use thiserror::Error;

use crate::bn::{BNElem, CoeffTheory, DegreeSet, TwistedElem};
use crate::expr;
use crate::localized::{LocalError, LocalizedClass, LocalizedRing, Twist};
use crate::scalar::LocScalar;
use crate::series::PowerSeries;
use crate::witt::{FieldSpec, WittClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EulerError {
    #[error("no Euler class for {0} in this table")]
    MissingEntry(RepLabel),
    #[error("{0} has rank one; its Euler class vanishes")]
    RankOne(RepLabel),
    #[error("invalid representation label {0:?}")]
    BadLabel(String),
    #[error("invalid case: {0}")]
    BadCase(String),
    #[error("invalid Euler table: {0}")]
    BadTable(String),
    #[error(transparent)]
    Local(#[from] LocalError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

impl FromStr for Sign {
    type Err = EulerError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "+" => Ok(Sign::Plus),
            "-" | "−" => Ok(Sign::Minus),
            other => Err(EulerError::BadLabel(other.to_string())),
        }
    }
}

/// The representation `Õ^sign(weight)`; rank one when the weight is zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RepLabel {
    pub weight: u32,
    pub sign: Sign,
}

impl RepLabel {
    pub fn plus(weight: u32) -> Self {
        RepLabel { weight, sign: Sign::Plus }
    }

    pub fn minus(weight: u32) -> Self {
        RepLabel { weight, sign: Sign::Minus }
    }

    pub fn rank(&self) -> u32 {
        if self.weight == 0 {
            1
        } else {
            2
        }
    }

    /// Twist parity of the Euler class: twisted exactly for even weights.
    pub fn twist(&self) -> Twist {
        Twist::from_parity(self.weight % 2 == 0)
    }
}

impl fmt::Display for RepLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.weight, self.sign)
    }
}

impl FromStr for RepLabel {
    type Err = EulerError;

    /// Parses `"m,+"` or `"(m,-)"`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || EulerError::BadLabel(s.to_string());
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let (m, sign) = inner.split_once(',').ok_or_else(bad)?;
        let weight = m.trim().parse().map_err(|_| bad())?;
        Ok(RepLabel { weight, sign: sign.parse().map_err(|_| bad())? })
    }
}

/// Type of a homogeneous component `N/H`, which decides the Euler class
/// that vanishes there.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CaseType {
    A(u32),
    B(u32),
    CPlus(u32),
    CMinus(u32),
}

impl CaseType {
    /// Validates the weight parity: even in cases b and c+, odd in c−.
    pub fn new(kind: &str, m: u32) -> Result<Self, EulerError> {
        let case = match kind {
            "a" => CaseType::A(m),
            "b" => CaseType::B(m),
            "c+" => CaseType::CPlus(m),
            "c-" | "c−" => CaseType::CMinus(m),
            other => return Err(EulerError::BadCase(format!("unknown case type {other:?}"))),
        };
        if m == 0 {
            return Err(EulerError::BadCase(format!("case {kind} needs m >= 1")));
        }
        match case {
            CaseType::B(m) | CaseType::CPlus(m) if m % 2 == 1 => {
                Err(EulerError::BadCase(format!("case {} requires even m, got {m}", case.name())))
            }
            CaseType::CMinus(m) if m % 2 == 0 => {
                Err(EulerError::BadCase(format!("case c- requires odd m, got {m}")))
            }
            _ => Ok(case),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            CaseType::A(_) => "a",
            CaseType::B(_) => "b",
            CaseType::CPlus(_) => "c+",
            CaseType::CMinus(_) => "c-",
        }
    }

    pub fn weight(&self) -> u32 {
        match *self {
            CaseType::A(m) | CaseType::B(m) | CaseType::CPlus(m) | CaseType::CMinus(m) => m,
        }
    }
}

impl fmt::Display for CaseType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(m={})", self.name(), self.weight())
    }
}

/// The representation whose Euler class restricts to zero on a component
/// of the given type.
pub fn annihilator(case: CaseType) -> RepLabel {
    match case {
        CaseType::A(_) => RepLabel::plus(1),
        CaseType::B(m) | CaseType::CPlus(m) => RepLabel::plus(m),
        CaseType::CMinus(m) => RepLabel::plus(2 * m),
    }
}

/// An Euler class as an exact polynomial in `e`: the class itself when
/// untwisted, or the cofactor `g` of `g(e) ẽ` when twisted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerEntry {
    field: FieldSpec,
    tag: Twist,
    poly: BTreeMap<u32, WittClass>,
}

impl EulerEntry {
    pub fn new(field: FieldSpec, tag: Twist, terms: impl IntoIterator<Item = (u32, WittClass)>) -> Self {
        let mut poly: BTreeMap<u32, WittClass> = BTreeMap::new();
        for (i, c) in terms {
            let sum = match poly.get(&i) {
                Some(x) => x + &c,
                None => c,
            };
            poly.insert(i, sum);
        }
        poly.retain(|_, c| !c.is_zero());
        EulerEntry { field, tag, poly }
    }

    pub fn tag(&self) -> Twist {
        self.tag
    }

    pub fn terms(&self) -> impl Iterator<Item = (u32, &WittClass)> {
        self.poly.iter().map(|(i, c)| (*i, c))
    }

    pub fn coeff(&self, i: u32) -> WittClass {
        self.poly.get(&i).cloned().unwrap_or_else(|| WittClass::zero(self.field))
    }

    fn negated(&self) -> Self {
        EulerEntry::new(self.field, self.tag, self.poly.iter().map(|(i, c)| (*i, -c)))
    }

    fn series(&self, truncation: usize) -> PowerSeries {
        let terms: Vec<_> = self.poly.iter().map(|(i, c)| (*i as usize, c.clone())).collect();
        PowerSeries::from_terms(self.field, &terms, truncation)
    }

    fn natural_truncation(&self) -> usize {
        self.poly.keys().next_back().map_or(1, |i| *i as usize + 1)
    }

    /// The class in `A(BN)`, or in the twisted module when twisted.
    pub fn to_element(&self, theory: &CoeffTheory, truncation: usize) -> EulerElement {
        let s = self.series(truncation);
        match self.tag {
            Twist::Untwisted => EulerElement::Untwisted(BNElem::new(s, WittClass::zero(self.field), theory.clone())),
            Twist::Gamma => EulerElement::Twisted(TwistedElem::new(s, WittClass::zero(self.field), theory.clone())),
        }
    }

    /// Exact image in the localized ring over `W(k)[1/M]`.
    pub fn localized(&self, modulus: u64) -> LocalizedClass {
        let two = modulus % 2 == 0;
        let terms = self.poly.iter().map(|(i, c)| (*i as i64, LocScalar::from_witt(c, two)));
        LocalizedClass::from_terms(self.field, modulus, self.tag, terms, None)
    }
}

impl fmt::Display for EulerEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let t = self.natural_truncation();
        match self.to_element(&CoeffTheory::HW, t) {
            EulerElement::Untwisted(x) => write!(f, "{x}"),
            EulerElement::Twisted(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EulerElement {
    Untwisted(BNElem),
    Twisted(TwistedElem),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Builtin {
    HW,
    KW,
}

/// Euler classes per representation together with the value of `ẽ^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EulerTable {
    field: FieldSpec,
    theory: CoeffTheory,
    builtin: Option<Builtin>,
    entries: BTreeMap<RepLabel, EulerEntry>,
    etilde_square: EulerEntry,
    sign_flip: bool,
}

impl EulerTable {
    fn builtin(field: FieldSpec, which: Builtin) -> Self {
        let theory = match which {
            Builtin::HW => CoeffTheory::HW,
            Builtin::KW => CoeffTheory::KW,
        };
        EulerTable {
            field,
            theory,
            builtin: Some(which),
            entries: BTreeMap::new(),
            etilde_square: EulerEntry::new(field, Twist::Untwisted, [(1, WittClass::from_integer(field, -4))]),
            sign_flip: false,
        }
    }

    /// Witt-sheaf cohomology: `ẽ^+(m) = m e` (odd m), `ẽ^+(2n) = n ẽ`.
    pub fn hw(field: FieldSpec) -> Self {
        Self::builtin(field, Builtin::HW)
    }

    /// Witt K-theory with the same leading terms and no corrections.
    pub fn kw(field: FieldSpec) -> Self {
        Self::builtin(field, Builtin::KW)
    }

    /// The built-in table for `theory`, if there is one.
    pub fn for_theory(field: FieldSpec, theory: &CoeffTheory) -> Option<Self> {
        match theory {
            CoeffTheory::HW => Some(Self::hw(field)),
            CoeffTheory::KW => Some(Self::kw(field)),
            CoeffTheory::Custom { .. } => None,
        }
    }

    /// Negates every Euler class (the opposite global orientation sign).
    /// `ẽ^2` is unchanged.
    pub fn with_sign_flip(mut self, flip: bool) -> Self {
        self.sign_flip = flip;
        self
    }

    pub fn sign_flip(&self) -> bool {
        self.sign_flip
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn theory(&self) -> &CoeffTheory {
        &self.theory
    }

    pub fn is_builtin(&self) -> bool {
        self.builtin.is_some()
    }

    /// Labels with explicit entries (empty for the built-in tables, which
    /// cover every `(m, +)` with `m >= 1`).
    pub fn explicit_labels(&self) -> impl Iterator<Item = &RepLabel> {
        self.entries.keys()
    }

    pub fn entry(&self, rep: RepLabel) -> Result<EulerEntry, EulerError> {
        if rep.weight == 0 {
            return Err(EulerError::RankOne(rep));
        }
        let base = match (self.entries.get(&rep), self.builtin) {
            (Some(e), _) => e.clone(),
            (None, Some(_)) if rep.sign == Sign::Plus => {
                let m = rep.weight as i64;
                if m % 2 == 1 {
                    EulerEntry::new(self.field, Twist::Untwisted, [(1, WittClass::from_integer(self.field, m))])
                } else {
                    EulerEntry::new(self.field, Twist::Gamma, [(0, WittClass::from_integer(self.field, m / 2))])
                }
            }
            _ => return Err(EulerError::MissingEntry(rep)),
        };
        Ok(if self.sign_flip { base.negated() } else { base })
    }

    pub fn etilde_square(&self) -> &EulerEntry {
        &self.etilde_square
    }

    /// `ẽ^2` as an element of `A(BN)`.
    pub fn etilde_square_element(&self, truncation: usize) -> BNElem {
        match self.etilde_square.to_element(&self.theory, truncation) {
            EulerElement::Untwisted(x) => x,
            EulerElement::Twisted(_) => unreachable!("ẽ^2 is untwisted"),
        }
    }

    /// The localized ring over `W(k)[1/M]` with this table's `ẽ^2`.
    pub fn ring(&self, modulus: u64, truncation: usize) -> LocalizedRing {
        LocalizedRing::new(self.field, modulus, truncation, Some(self.etilde_square.localized(modulus)))
    }

    /// Loads a table from JSON text:
    ///
    /// ```json
    /// {"name": "toy", "entries": {"3,+": [[1, "3"], [2, "<1,1>"]]},
    ///  "etilde_square": [[1, "-4"]]}
    /// ```
    ///
    /// Optional `"degrees": {"modulus": 4, "residues": [0]}` gives the
    /// coefficient degrees. Entries for `(m, +)` must start with `±m e`
    /// (odd m) or `±n ẽ` (m = 2n).
    pub fn from_json(text: &str, field: FieldSpec, default_name: &str) -> Result<Self, EulerError> {
        let bad = |msg: String| EulerError::BadTable(msg);
        let v: Value = serde_json::from_str(text).map_err(|e| bad(format!("not valid JSON: {e}")))?;
        let obj = v.as_object().ok_or_else(|| bad("top level must be an object".into()))?;
        for k in obj.keys() {
            if !["name", "entries", "etilde_square", "degrees"].contains(&k.as_str()) {
                return Err(bad(format!("unknown key {k:?}")));
            }
        }
        let name = match obj.get("name") {
            None => default_name.to_string(),
            Some(Value::String(s)) => s.clone(),
            Some(_) => return Err(bad("\"name\" must be a string".into())),
        };
        let degrees = match obj.get("degrees") {
            None => DegreeSet { modulus: 0, residues: vec![0] },
            Some(d) => parse_degrees(d).map_err(bad)?,
        };
        let entries_v = obj.get("entries").and_then(Value::as_object).ok_or_else(|| bad("missing object \"entries\"".into()))?;
        let mut entries = BTreeMap::new();
        for (key, terms) in entries_v {
            let rep: RepLabel = key.parse()?;
            if rep.weight == 0 {
                return Err(EulerError::RankOne(rep));
            }
            let poly = parse_terms(terms, field).map_err(|m| bad(format!("entry {key:?}: {m}")))?;
            let entry = EulerEntry::new(field, rep.twist(), poly);
            validate_entry(rep, &entry).map_err(|m| bad(format!("entry {key:?}: {m}")))?;
            if entries.insert(rep, entry).is_some() {
                return Err(bad(format!("duplicate entry {key:?}")));
            }
        }
        let sq = obj.get("etilde_square").ok_or_else(|| bad("missing \"etilde_square\"".into()))?;
        let sq_terms = parse_terms(sq, field).map_err(|m| bad(format!("etilde_square: {m}")))?;
        Ok(EulerTable {
            field,
            theory: CoeffTheory::Custom { name, degrees },
            builtin: None,
            entries,
            etilde_square: EulerEntry::new(field, Twist::Untwisted, sq_terms),
            sign_flip: false,
        })
    }
}

fn parse_degrees(v: &Value) -> Result<DegreeSet, String> {
    let o = v.as_object().ok_or("\"degrees\" must be an object")?;
    let modulus = o.get("modulus").and_then(Value::as_u64).ok_or("\"degrees.modulus\" must be a nonnegative integer")?;
    let residues = o
        .get("residues")
        .and_then(Value::as_array)
        .ok_or("\"degrees.residues\" must be a list")?
        .iter()
        .map(|r| r.as_i64().ok_or("residues must be integers"))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(DegreeSet { modulus: modulus as u32, residues })
}

fn parse_terms(v: &Value, field: FieldSpec) -> Result<Vec<(u32, WittClass)>, String> {
    let arr = v.as_array().ok_or("expected a list of [exponent, literal] pairs")?;
    arr.iter()
        .map(|t| {
            let pair = t.as_array().filter(|p| p.len() == 2).ok_or("expected [exponent, literal]")?;
            let exp = pair[0].as_u64().ok_or("exponent must be a nonnegative integer")?;
            let lit = pair[1].as_str().ok_or("coefficient must be a string literal")?;
            let c = expr::parse_witt(lit, field).map_err(|e| e.to_string())?;
            Ok((exp as u32, c))
        })
        .collect()
}

/// Structural constraint on the leading term of a `(m, +)` entry.
fn validate_entry(rep: RepLabel, entry: &EulerEntry) -> Result<(), String> {
    if rep.sign == Sign::Minus {
        return Ok(());
    }
    let field = entry.field;
    let m = rep.weight as i64;
    let (lead_exp, target) = if m % 2 == 1 { (1, m) } else { (0, m / 2) };
    let lowest = entry.terms().next().map(|(i, _)| i);
    if m % 2 == 1 && entry.poly.contains_key(&0) {
        return Err("odd-weight Euler classes have no constant term".into());
    }
    let lead = entry.coeff(lead_exp);
    let plus = WittClass::from_integer(field, target);
    let minus = WittClass::from_integer(field, -target);
    if lowest != Some(lead_exp) || (lead != plus && lead != minus) {
        return Err(format!("leading coefficient at e^{lead_exp} must be ±{target}<1>, got {lead}"));
    }
    Ok(())
}

/// Looks up the Euler class of `rep`.
pub fn euler_class(rep: RepLabel, table: &EulerTable) -> Result<EulerEntry, EulerError> {
    table.entry(rep)
}

/// Euler class of a direct sum in the localized ring over `W(k)[1/M]`.
/// Rank-one summands have vanishing Euler class, so they make the product
/// zero. The result is exact.
pub fn euler_of_sum(reps: &[RepLabel], table: &EulerTable, modulus: u64) -> Result<LocalizedClass, EulerError> {
    let field = table.field;
    if reps.iter().any(|r| r.weight == 0) {
        let tag = reps.iter().filter(|r| r.weight > 0).fold(Twist::Untwisted, |t, r| t.combine(r.twist()));
        return Ok(LocalizedClass::zero(field, modulus, None).with_tag(tag));
    }
    let mut acc = LocalizedClass::one(field, modulus);
    let mut pending: Option<LocalizedClass> = None;
    for rep in reps {
        let x = table.entry(*rep)?.localized(modulus);
        match (x.tag(), pending.take()) {
            (Twist::Untwisted, p) => {
                acc = acc.try_mul(&x)?;
                pending = p;
            }
            (Twist::Gamma, None) => pending = Some(x),
            (Twist::Gamma, Some(y)) => {
                let sq = table.etilde_square.localized(modulus);
                let pair = y.with_tag(Twist::Untwisted).try_mul(&x.with_tag(Twist::Untwisted))?.try_mul(&sq)?;
                acc = acc.try_mul(&pair)?;
            }
        }
    }
    if let Some(y) = pending {
        acc = acc.try_mul(&y)?;
    }
    Ok(acc)
}

/// What has to be inverted for localization to work.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalizingInput {
    Case(CaseType),
    Rep(RepLabel),
}

fn weight_factors(m: u32, out: &mut BTreeSet<u64>) {
    if m == 0 {
        return;
    }
    if m % 2 == 1 {
        out.insert(m as u64);
    } else {
        // n ẽ is a unit only once n and ẽ^2 = -4e are.
        out.insert((m / 2) as u64);
        out.insert(2);
    }
}

/// Product of the distinct integers that must be inverted: the
/// characteristic, the odd weights `m`, and for even weights `2n` both `n`
/// and 2. Case (a) components only require `e` to be inverted.
pub fn localizing_integer(inputs: &[LocalizingInput], char_p: u64) -> u64 {
    let mut factors = BTreeSet::new();
    if char_p > 1 {
        factors.insert(char_p);
    }
    for input in inputs {
        match input {
            LocalizingInput::Case(CaseType::A(_)) => {}
            LocalizingInput::Case(c) => weight_factors(annihilator(*c).weight, &mut factors),
            LocalizingInput::Rep(r) => weight_factors(r.weight, &mut factors),
        }
    }
    factors.remove(&1);
    factors.into_iter().product()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localized::integer_scalar;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn poly(m: u64, tag: Twist, terms: &[(i64, i64)]) -> LocalizedClass {
        LocalizedClass::from_terms(Q, m, tag, terms.iter().map(|&(i, c)| (i, integer_scalar(Q, c, m))), None)
    }

    #[test]
    fn builtin_entries() {
        let t = EulerTable::hw(Q);
        assert_eq!(euler_class(RepLabel::plus(3), &t).unwrap().to_string(), "3*e");
        let two = euler_class(RepLabel::plus(2), &t).unwrap();
        assert_eq!((two.tag(), two.to_string()), (Twist::Gamma, "et".to_string()));
        assert_eq!(euler_class(RepLabel::plus(4), &t).unwrap().to_string(), "2*et");
        assert_eq!(euler_class(RepLabel::minus(3), &t), Err(EulerError::MissingEntry(RepLabel::minus(3))));
        assert_eq!(euler_class(RepLabel::plus(0), &t), Err(EulerError::RankOne(RepLabel::plus(0))));
        let f = t.with_sign_flip(true);
        assert_eq!(euler_class(RepLabel::plus(3), &f).unwrap().to_string(), "-3*e");
    }

    #[test]
    fn sums() {
        let t = EulerTable::hw(Q);
        let p = |m| RepLabel::plus(m);
        assert_eq!(euler_of_sum(&[p(3), p(5)], &t, 1).unwrap(), poly(1, Twist::Untwisted, &[(2, 15)]));
        assert_eq!(euler_of_sum(&[p(2), p(2)], &t, 1).unwrap(), poly(1, Twist::Untwisted, &[(1, -4)]));
        assert_eq!(euler_of_sum(&[], &t, 1).unwrap(), LocalizedClass::one(Q, 1));
        assert_eq!(euler_of_sum(&[p(2), p(3)], &t, 1).unwrap(), poly(1, Twist::Gamma, &[(1, 3)]));
        assert!(euler_of_sum(&[p(0), p(3)], &t, 1).unwrap().is_zero());
    }

    #[test]
    fn annihilators_and_modulus() {
        assert_eq!(annihilator(CaseType::new("a", 1).unwrap()), RepLabel::plus(1));
        assert_eq!(annihilator(CaseType::new("b", 4).unwrap()), RepLabel::plus(4));
        assert_eq!(annihilator(CaseType::new("c-", 3).unwrap()), RepLabel::plus(6));
        assert!(CaseType::new("c-", 2).is_err());
        assert!(CaseType::new("b", 3).is_err());
        assert!(CaseType::new("c+", 5).is_err());
        use LocalizingInput::*;
        assert_eq!(localizing_integer(&[Case(CaseType::A(1))], 0), 1);
        assert_eq!(localizing_integer(&[Rep(RepLabel::plus(3))], 0), 3);
        assert_eq!(localizing_integer(&[Rep(RepLabel::plus(3)), Rep(RepLabel::plus(4))], 5), 30);
    }

    #[test]
    fn custom_tables() {
        let ok = r#"{"name":"toy","entries":{"3,+":[[1,"-3"],[2,"<1,1>"]],"2,-":[[0,"<2>"]]},"etilde_square":[[1,"-4"]]}"#;
        let t = EulerTable::from_json(ok, Q, "x").unwrap();
        assert_eq!(t.entry(RepLabel::plus(3)).unwrap().coeff(2), WittClass::from_integer(Q, 2));
        assert_eq!(t.entry(RepLabel::minus(2)).unwrap().tag(), Twist::Gamma);
        assert!(matches!(t.entry(RepLabel::plus(5)), Err(EulerError::MissingEntry(_))));
        let wrong_lead = r#"{"entries":{"3,+":[[1,"2"]]},"etilde_square":[[1,"-4"]]}"#;
        assert!(matches!(EulerTable::from_json(wrong_lead, Q, "x"), Err(EulerError::BadTable(_))));
        let even = r#"{"entries":{"4,+":[[0,"-2"],[1,"5"]]},"etilde_square":[[1,"-4"]]}"#;
        assert!(EulerTable::from_json(even, Q, "x").is_ok());
        let unknown = r#"{"entries":{},"etilde_square":[],"extra":1}"#;
        assert!(EulerTable::from_json(unknown, Q, "x").is_err());
    }
}

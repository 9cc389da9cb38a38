//! Fixed-point localization: Atiyah–Bott sums, virtual normal bundles,
//! self-intersection and the Bott-residue inverse.
//!
//! Each fixed component contributes `class · e(N)^{-1}` in the localized
//! ring; components induced from a proper subgroup contribute nothing
//! because their localized homology vanishes. Pushforwards into the ambient
//! space are modelled as a plain sum.

use std::collections::BTreeMap;
use std::thread;

use thiserror::Error;

use crate::bn::CoeffTheory;
use crate::euler::{euler_of_sum, localizing_integer, CaseType, EulerError, EulerTable, LocalizingInput, RepLabel};
use crate::localized::{LocalError, LocalizedClass, LocalizedRing, Twist};
use crate::scalar::LocScalar;
use crate::series::DEFAULT_TRUNCATION;
use crate::witt::{FieldSpec, WittClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EngineError {
    #[error(transparent)]
    Euler(#[from] EulerError),
    #[error(transparent)]
    Local(#[from] LocalError),
    #[error("pole of order {order} at e = 0 (coefficient {coeff} at e^{exponent}): the residues do not assemble to a global class")]
    PolePresent { order: i64, exponent: i64, coeff: String },
    #[error("degree of a γ-twisted class is not defined")]
    TwistedInput,
    #[error("the constant term is beyond the known precision")]
    InsufficientPrecision,
    #[error("no restriction supplied for component {0:?}")]
    MissingRestriction(String),
    #[error("contributions of {first} and {second} have different twist parities")]
    TagMismatch { first: String, second: String },
    #[error("a localization problem needs at least one component")]
    EmptyProblem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentKind {
    /// Fixed by all of `N`.
    NFixed,
    /// A pair of torus-fixed components swapped by `σ`.
    FreePair,
    /// Induced from a proper subgroup; vanishes after localization.
    Induced(CaseType),
}

/// Moving parts of a two-term obstruction theory on a component.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct VirtualData {
    pub e0: Vec<RepLabel>,
    pub e1: Vec<RepLabel>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedComponent {
    pub id: String,
    pub kind: ComponentKind,
    /// Fundamental (or virtual) class of the component, as a Laurent
    /// polynomial in `e`.
    pub local_class: LocalizedClass,
    /// Moving part of the tangent bundle, i.e. the normal bundle.
    pub tangent_moving: Vec<RepLabel>,
    /// When present, replaces `tangent_moving` for the normal Euler class.
    pub virtual_data: Option<VirtualData>,
}

impl FixedComponent {
    pub fn is_induced(&self) -> bool {
        matches!(self.kind, ComponentKind::Induced(_))
    }

    /// Representations whose Euler classes are inverted for this component.
    fn denominators(&self) -> &[RepLabel] {
        match &self.virtual_data {
            Some(v) => &v.e1,
            None => &self.tangent_moving,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalizationProblem {
    pub field: FieldSpec,
    pub theory: CoeffTheory,
    pub components: Vec<FixedComponent>,
    pub truncation: usize,
    pub char_p: u64,
    pub expected_degree: Option<WittClass>,
}

impl LocalizationProblem {
    pub fn new(field: FieldSpec, theory: CoeffTheory, components: Vec<FixedComponent>) -> Self {
        LocalizationProblem {
            field,
            theory,
            components,
            truncation: DEFAULT_TRUNCATION,
            char_p: field.characteristic(),
            expected_degree: None,
        }
    }

    /// The integer `M` to invert: the characteristic, the weights of every
    /// inverted Euler class, the annihilators of induced components, and
    /// `extra`.
    pub fn localizing_modulus(&self, extra: u64) -> u64 {
        let mut inputs = Vec::new();
        for c in &self.components {
            match c.kind {
                ComponentKind::Induced(case) => inputs.push(LocalizingInput::Case(case)),
                _ => inputs.extend(c.denominators().iter().map(|r| LocalizingInput::Rep(*r))),
            }
        }
        let m = localizing_integer(&inputs, self.char_p);
        crate::arith::lcm_u64(m, extra.max(1))
    }
}

/// `e(E0) · e(E1)^{-1}`.
pub fn virtual_normal_euler(
    e0: &[RepLabel],
    e1: &[RepLabel],
    table: &EulerTable,
    ring: &LocalizedRing,
) -> Result<LocalizedClass, EngineError> {
    let m = ring.modulus();
    let num = euler_of_sum(e0, table, m)?;
    let den = euler_of_sum(e1, table, m)?;
    Ok(ring.mul(&num, &ring.invert(&den)?)?)
}

/// Euler class of the (virtual) normal bundle of a component.
pub fn normal_euler(comp: &FixedComponent, table: &EulerTable, ring: &LocalizedRing) -> Result<LocalizedClass, EngineError> {
    Ok(match &comp.virtual_data {
        Some(v) => virtual_normal_euler(&v.e0, &v.e1, table, ring)?,
        None => euler_of_sum(&comp.tangent_moving, table, ring.modulus())?,
    })
}

/// Inverse of the normal Euler class. For a virtual normal bundle this is
/// `e(E1) · e(E0)^{-1}`.
fn inverse_normal_euler(comp: &FixedComponent, table: &EulerTable, ring: &LocalizedRing) -> Result<LocalizedClass, EngineError> {
    Ok(match &comp.virtual_data {
        Some(v) => virtual_normal_euler(&v.e1, &v.e0, table, ring)?,
        None => ring.invert(&euler_of_sum(&comp.tangent_moving, table, ring.modulus())?)?,
    })
}

/// `class · e(N)^{-1}`, or exactly zero for an induced component.
pub fn component_contribution(
    comp: &FixedComponent,
    table: &EulerTable,
    ring: &LocalizedRing,
) -> Result<LocalizedClass, EngineError> {
    if comp.is_induced() {
        return Ok(LocalizedClass::zero(ring.field(), ring.modulus(), None));
    }
    let inv = inverse_normal_euler(comp, table, ring)?;
    Ok(ring.mul(&comp.local_class, &inv)?)
}

/// Result of summing the fixed-point contributions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assembly {
    pub modulus: u64,
    pub contributions: Vec<(String, LocalizedClass)>,
    pub total: LocalizedClass,
}

/// Sums the contributions of all components after inverting
/// `problem.localizing_modulus(extra_invert)`. Contributions are computed
/// on worker threads when there are several components; the sum is formed
/// in input order, so the result does not depend on scheduling.
pub fn assemble(problem: &LocalizationProblem, table: &EulerTable, extra_invert: u64) -> Result<Assembly, EngineError> {
    if problem.components.is_empty() {
        return Err(EngineError::EmptyProblem);
    }
    let modulus = problem.localizing_modulus(extra_invert);
    let ring = table.ring(modulus, problem.truncation);
    let results: Vec<Result<LocalizedClass, EngineError>> = if problem.components.len() < 4 {
        problem.components.iter().map(|c| component_contribution(c, table, &ring)).collect()
    } else {
        thread::scope(|s| {
            let handles: Vec<_> = problem
                .components
                .iter()
                .map(|c| s.spawn(|| component_contribution(c, table, &ring)))
                .collect();
            handles.into_iter().map(|h| h.join().expect("contribution worker panicked")).collect()
        })
    };
    let mut contributions = Vec::with_capacity(results.len());
    let mut total = LocalizedClass::zero(problem.field, modulus, None);
    let mut tag_source: Option<String> = None;
    for (comp, r) in problem.components.iter().zip(results) {
        let x = r?;
        total = total.add(&x).map_err(|e| match e {
            LocalError::TagMismatch => EngineError::TagMismatch {
                first: tag_source.clone().unwrap_or_default(),
                second: comp.id.clone(),
            },
            other => EngineError::Local(other),
        })?;
        if !x.is_zero() && tag_source.is_none() {
            tag_source = Some(comp.id.clone());
        }
        contributions.push((comp.id.clone(), x));
    }
    Ok(Assembly { modulus, contributions, total })
}

/// Constant term of a pole-free untwisted class.
pub fn degree(x: &LocalizedClass) -> Result<LocScalar, EngineError> {
    if x.tag() == Twist::Gamma && !x.is_zero() {
        return Err(EngineError::TwistedInput);
    }
    if let Some((i, c)) = x.terms().next().filter(|(i, _)| *i < 0) {
        return Err(EngineError::PolePresent { order: -i, exponent: i, coeff: c.to_string() });
    }
    x.coeff(0).ok_or(EngineError::InsufficientPrecision)
}

/// Restriction of a pushed-forward class back to its component:
/// multiplication by the normal Euler class.
pub fn self_intersection(
    y: &LocalizedClass,
    normal: &[RepLabel],
    table: &EulerTable,
    ring: &LocalizedRing,
) -> Result<LocalizedClass, EngineError> {
    let e = euler_of_sum(normal, table, ring.modulus())?;
    Ok(ring.mul(y, &e)?)
}

/// Reconstructs component classes from restrictions of a global class:
/// `x_j = r_j · e(N_j)^{-1}` for every non-induced component.
pub fn bott_inverse(
    restrictions: &BTreeMap<String, LocalizedClass>,
    problem: &LocalizationProblem,
    table: &EulerTable,
    ring: &LocalizedRing,
) -> Result<BTreeMap<String, LocalizedClass>, EngineError> {
    let mut out = BTreeMap::new();
    for comp in problem.components.iter().filter(|c| !c.is_induced()) {
        let r = restrictions.get(&comp.id).ok_or_else(|| EngineError::MissingRestriction(comp.id.clone()))?;
        let inv = inverse_normal_euler(comp, table, ring)?;
        out.insert(comp.id.clone(), ring.mul(r, &inv)?);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localized::{integer_scalar, rational_scalar};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn poly(m: u64, terms: &[(i64, i64)]) -> LocalizedClass {
        LocalizedClass::from_terms(Q, m, Twist::Untwisted, terms.iter().map(|&(i, c)| (i, integer_scalar(Q, c, m))), None)
    }

    fn point(id: &str, class: LocalizedClass, tangent: &[RepLabel]) -> FixedComponent {
        FixedComponent {
            id: id.into(),
            kind: ComponentKind::NFixed,
            local_class: class,
            tangent_moving: tangent.to_vec(),
            virtual_data: None,
        }
    }

    fn problem(components: Vec<FixedComponent>) -> LocalizationProblem {
        LocalizationProblem::new(Q, CoeffTheory::HW, components)
    }

    #[test]
    fn virtual_normal_examples() {
        let t = EulerTable::hw(Q);
        let p = RepLabel::plus;
        let r3 = t.ring(3, 16);
        assert_eq!(virtual_normal_euler(&[p(3)], &[], &t, &r3).unwrap(), poly(3, &[(1, 3)]));
        assert_eq!(virtual_normal_euler(&[p(3)], &[p(1)], &t, &r3).unwrap(), poly(3, &[(0, 3)]));
        assert_eq!(virtual_normal_euler(&[], &[], &t, &r3).unwrap(), poly(3, &[(0, 1)]));
    }

    #[test]
    fn contributions_and_assembly() {
        let t = EulerTable::hw(Q);
        let p = RepLabel::plus;
        let single = problem(vec![point("x", poly(1, &[(1, 1)]), &[p(1)])]);
        let a = assemble(&single, &t, 1).unwrap();
        assert_eq!(a.total, poly(1, &[(0, 1)]));
        assert_eq!(degree(&a.total).unwrap().to_witt().unwrap(), WittClass::one(Q));

        let two = problem(vec![point("x", poly(1, &[(1, 1)]), &[p(1)]), point("y", poly(1, &[(1, -1)]), &[p(1)])]);
        assert!(assemble(&two, &t, 1).unwrap().total.is_zero());

        let induced = FixedComponent {
            id: "z".into(),
            kind: ComponentKind::Induced(CaseType::A(1)),
            local_class: poly(1, &[(0, 5)]),
            tangent_moving: vec![],
            virtual_data: None,
        };
        let mixed = problem(vec![point("x", poly(1, &[(0, 1)]), &[p(3)]), induced]);
        let a = assemble(&mixed, &t, 1).unwrap();
        assert_eq!(a.modulus, 3);
        let third = LocalizedClass::monomial(rational_scalar(Q, 1, 3, 3), -1, 3, Twist::Untwisted);
        assert_eq!(a.total, third);
        assert!(matches!(degree(&a.total), Err(EngineError::PolePresent { order: 1, .. })));
    }

    #[test]
    fn degree_examples() {
        let d = degree(&poly(1, &[(0, 2), (1, 3)])).unwrap();
        assert_eq!(d.to_witt().unwrap(), WittClass::from_integer(Q, 2));
        assert!(degree(&poly(1, &[])).unwrap().is_zero());
        assert!(matches!(degree(&poly(1, &[(0, 1)]).with_tag(Twist::Gamma)), Err(EngineError::TwistedInput)));
        assert_eq!(degree(&poly(1, &[(0, 1)]).truncated(0)), Err(EngineError::InsufficientPrecision));
    }

    #[test]
    fn bott_round_trip() {
        let t = EulerTable::hw(Q);
        let p = RepLabel::plus;
        let ring = t.ring(3, 16);
        assert_eq!(self_intersection(&poly(3, &[(0, 1)]), &[p(3)], &t, &ring).unwrap(), poly(3, &[(1, 3)]));
        assert_eq!(self_intersection(&poly(3, &[(-1, 1)]), &[p(1)], &t, &ring).unwrap(), poly(3, &[(0, 1)]));
        let prob = problem(vec![point("x", poly(3, &[]), &[p(3)]), point("y", poly(3, &[]), &[p(1)])]);
        let mut r = BTreeMap::new();
        r.insert("x".to_string(), poly(3, &[(1, 3)]));
        r.insert("y".to_string(), poly(3, &[(1, 1)]));
        let x = bott_inverse(&r, &prob, &t, &ring).unwrap();
        assert_eq!(x["x"], poly(3, &[(0, 1)]));
        assert_eq!(x["y"], poly(3, &[(0, 1)]));
        r.remove("y");
        assert_eq!(bott_inverse(&r, &prob, &t, &ring), Err(EngineError::MissingRestriction("y".into())));
    }

    #[test]
    fn twist_mismatch() {
        let t = EulerTable::hw(Q);
        let p = RepLabel::plus;
        let prob = problem(vec![point("x", poly(1, &[(1, 1)]), &[p(1)]), point("y", poly(1, &[(1, 1)]), &[p(2)])]);
        assert!(matches!(assemble(&prob, &t, 1), Err(EngineError::TagMismatch { .. })));
    }
}

//! Randomized invariant checks behind `witt-loc selfcheck`.
//!
//! Every run is reproducible from its seed. The `A(BN)` product is
//! compared against a naive evaluator that multiplies monomials
//! `q0^a e^i` freely and then rewrites with `q0^2 = 1`, `q0 e = -e`.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bn::{bn_mul, BNElem, CoeffTheory};
use crate::engine::{bott_inverse, self_intersection, ComponentKind, FixedComponent, LocalizationProblem};
use crate::euler::{EulerTable, RepLabel};
use crate::localized::{localize, LocalizedClass, Twist};
use crate::scalar::LocScalar;
use crate::series::PowerSeries;
use crate::witt::{witt_class, FieldSpec, QForm, WittClass};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    /// First failing case, if any.
    pub example: Option<String>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

const FIELDS: [FieldSpec; 6] = [
    FieldSpec::Rationals,
    FieldSpec::Reals,
    FieldSpec::FinitePrime(3),
    FieldSpec::FinitePrime(5),
    FieldSpec::FinitePrime(7),
    FieldSpec::QuadraticallyClosed,
];

fn random_form(rng: &mut ChaCha8Rng, field: FieldSpec) -> QForm {
    let n = rng.gen_range(0..4);
    let pool = [1i64, -1, 2, -2, 3, -3, 5, 6, -7, 10, 11, 13];
    let entries: Vec<i64> = (0..n)
        .map(|_| loop {
            let a = pool[rng.gen_range(0..pool.len())];
            if field.characteristic() == 0 || a.rem_euclid(field.characteristic() as i64) != 0 {
                break a;
            }
        })
        .collect();
    QForm::diagonal(field, &entries).expect("nonzero entries")
}

fn random_witt(rng: &mut ChaCha8Rng, field: FieldSpec) -> WittClass {
    witt_class(&random_form(rng, field))
}

fn representatives(rng: &mut ChaCha8Rng, cases: usize) -> CheckResult {
    let mut t = Tally::new("canonical representatives");
    for field in FIELDS {
        for _ in 0..cases {
            let a = &random_witt(rng, field) + &random_witt(rng, field);
            t.record(witt_class(&a.representative()) == a, || format!("{field}: {a:?}"));
        }
    }
    t.done()
}

fn random_bn(rng: &mut ChaCha8Rng, field: FieldSpec, t: usize) -> BNElem {
    let mut terms: Vec<(usize, WittClass)> = Vec::new();
    for i in 0..t {
        if rng.gen_bool(0.4) {
            terms.push((i, random_witt(rng, field)));
        }
    }
    let c = if rng.gen_bool(0.5) { random_witt(rng, field) } else { WittClass::zero(field) };
    BNElem::new(PowerSeries::from_terms(field, &terms, t), c, CoeffTheory::HW)
}

/// `a * b` by expanding into monomials `q0^a e^i` and rewriting.
pub fn rewrite_product(a: &BNElem, b: &BNElem) -> BNElem {
    let field = a.field();
    let t = a.truncation().min(b.truncation());
    let monomials = |x: &BNElem| {
        let mut out: Vec<((u8, usize), WittClass)> =
            x.e_part().coeffs().iter().enumerate().map(|(i, c)| ((0, i), c.clone())).collect();
        out.push(((1, 0), x.q0_part().clone()));
        out
    };
    let mut acc: BTreeMap<(u8, usize), WittClass> = BTreeMap::new();
    for ((qa, i), x) in monomials(a) {
        for ((qb, j), y) in monomials(b) {
            if x.is_zero() || y.is_zero() || i + j >= t {
                continue;
            }
            let mut q = (qa + qb) % 2;
            let mut c = &x * &y;
            if q == 1 && i + j >= 1 {
                q = 0;
                c = -&c;
            }
            let slot = acc.entry((q, i + j)).or_insert_with(|| WittClass::zero(field));
            *slot = &*slot + &c;
        }
    }
    let e_terms: Vec<(usize, WittClass)> = acc.iter().filter(|((q, _), _)| *q == 0).map(|((_, i), c)| (*i, c.clone())).collect();
    let c = acc.get(&(1, 0)).cloned().unwrap_or_else(|| WittClass::zero(field));
    BNElem::new(PowerSeries::from_terms(field, &e_terms, t), c, a.theory().clone())
}

struct Tally {
    name: &'static str,
    cases: usize,
    failures: usize,
    example: Option<String>,
}

impl Tally {
    fn new(name: &'static str) -> Self {
        Tally { name, cases: 0, failures: 0, example: None }
    }

    fn record(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures += 1;
            if self.example.is_none() {
                self.example = Some(describe());
            }
        }
    }

    fn done(self) -> CheckResult {
        CheckResult { name: self.name, cases: self.cases, failures: self.failures, example: self.example }
    }
}

fn witt_laws(rng: &mut ChaCha8Rng, cases: usize) -> CheckResult {
    let mut t = Tally::new("witt ring laws");
    for field in FIELDS {
        for _ in 0..cases {
            let (fa, fb, fc) = (random_form(rng, field), random_form(rng, field), random_form(rng, field));
            let (a, b, c) = (witt_class(&fa), witt_class(&fb), witt_class(&fc));
            let ok = &(&a + &b) + &c == &a + &(&b + &c)
                && &a * &b == &b * &a
                && &(&a * &b) * &c == &a * &(&b * &c)
                && &a * &(&b + &c) == &(&a * &b) + &(&a * &c)
                && (&a + &(-&a)).is_zero()
                && &a * &WittClass::one(field) == a;
            t.record(ok, || format!("{field}: a={fa}, b={fb}, c={fc}"));
        }
    }
    t.done()
}

fn ring_product(rng: &mut ChaCha8Rng, cases: usize) -> CheckResult {
    let mut t = Tally::new("A(BN) product vs rewriting");
    for _ in 0..cases {
        let field = FIELDS[rng.gen_range(0..FIELDS.len())];
        let (a, b) = (random_bn(rng, field, 8), random_bn(rng, field, 8));
        let ok = bn_mul(&a, &b).ok().as_ref() == Some(&rewrite_product(&a, &b));
        t.record(ok, || format!("{field}: ({a}) * ({b})"));
    }
    t.done()
}

fn localization_homomorphism(rng: &mut ChaCha8Rng, cases: usize) -> CheckResult {
    let mut t = Tally::new("localization is multiplicative");
    for _ in 0..cases {
        let field = FIELDS[rng.gen_range(0..FIELDS.len())];
        let (a, b) = (random_bn(rng, field, 8), random_bn(rng, field, 8));
        let lhs = localize(&bn_mul(&a, &b).expect("same theory"), 1);
        let rhs = localize(&a, 1).try_mul(&localize(&b, 1)).expect("untwisted");
        t.record(lhs.agrees_with(&rhs), || format!("{field}: a={a}, b={b}"));
    }
    t.done()
}

fn random_reps(rng: &mut ChaCha8Rng) -> Vec<RepLabel> {
    (0..rng.gen_range(0..4)).map(|_| RepLabel::plus(rng.gen_range(1..8))).collect()
}

fn bott_round_trip(rng: &mut ChaCha8Rng, cases: usize) -> CheckResult {
    let mut t = Tally::new("Bott round trip");
    let field = FieldSpec::Rationals;
    let table = EulerTable::hw(field);
    for _ in 0..cases {
        let n = rng.gen_range(1..4);
        let components: Vec<FixedComponent> = (0..n)
            .map(|i| FixedComponent {
                id: format!("c{i}"),
                kind: ComponentKind::NFixed,
                local_class: LocalizedClass::zero(field, 1, None),
                tangent_moving: random_reps(rng),
                virtual_data: None,
            })
            .collect();
        let problem = LocalizationProblem::new(field, CoeffTheory::HW, components);
        let m = problem.localizing_modulus(1);
        let ring = table.ring(m, 16);
        let mut restrictions = BTreeMap::new();
        for c in &problem.components {
            let terms: Vec<(i64, LocScalar)> =
                (0..3).map(|i| (i, LocScalar::from_integer(field, rng.gen_range(-5..6), m % 2 == 0))).collect();
            let tag = Twist::from_parity(rng.gen_bool(0.5));
            restrictions.insert(c.id.clone(), LocalizedClass::from_terms(field, m, tag, terms, None));
        }
        let ok = match bott_inverse(&restrictions, &problem, &table, &ring) {
            Ok(x) => problem.components.iter().all(|c| {
                self_intersection(&x[&c.id], &c.tangent_moving, &table, &ring)
                    .is_ok_and(|r| r.agrees_with(&restrictions[&c.id]))
            }),
            Err(_) => false,
        };
        t.record(ok, || format!("M={m}, restrictions {restrictions:?}"));
    }
    t.done()
}

/// Runs every suite with `cases` random cases each.
pub fn run(seed: u64, cases: usize) -> Vec<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    vec![
        representatives(&mut rng, cases),
        witt_laws(&mut rng, cases),
        ring_product(&mut rng, cases),
        localization_homomorphism(&mut rng, cases),
        bott_round_trip(&mut rng, cases),
    ]
}

mod common;

use common::{rewrite_mul, FIELDS};
use proptest::prelude::*;
use witt_loc::bn::{bn_add, bn_mul, finite_level, grading_check, twisted_product, BNElem, CoeffTheory, TwistedElem};
use witt_loc::euler::{euler_of_sum, EulerTable, RepLabel};
use witt_loc::localized::{localize, Twist};
use witt_loc::series::PowerSeries;
use witt_loc::witt::{witt_class, FieldSpec, QForm, WittClass};

const T: usize = 8;

fn witt(field: FieldSpec, v: &[i64]) -> WittClass {
    let p = field.characteristic() as i64;
    let v: Vec<i64> = v.iter().copied().filter(|a| p == 0 || a.rem_euclid(p) != 0).collect();
    witt_class(&QForm::diagonal(field, &v).unwrap())
}

fn coeff() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(prop_oneof![-12i64..=-1, 1i64..=12], 0..3)
}

fn elem(field: FieldSpec) -> impl Strategy<Value = BNElem> {
    (prop::collection::vec(prop::option::weighted(0.5, coeff()), T), coeff()).prop_map(move |(fs, c)| {
        let terms: Vec<(usize, WittClass)> =
            fs.iter().enumerate().filter_map(|(i, x)| x.as_ref().map(|x| (i, witt(field, x)))).collect();
        BNElem::new(PowerSeries::from_terms(field, &terms, T), witt(field, &c), CoeffTheory::HW)
    })
}

fn any_field() -> impl Strategy<Value = FieldSpec> {
    prop::sample::select(FIELDS.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn product_matches_rewriting((a, b) in any_field().prop_flat_map(|f| (elem(f), elem(f)))) {
        prop_assert_eq!(bn_mul(&a, &b).unwrap(), rewrite_mul(&a, &b));
    }

    #[test]
    fn product_is_associative_and_distributive((a, b, c) in any_field().prop_flat_map(|f| (elem(f), elem(f), elem(f)))) {
        let ab_c = bn_mul(&bn_mul(&a, &b).unwrap(), &c).unwrap();
        let a_bc = bn_mul(&a, &bn_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c, a_bc);
        let lhs = bn_mul(&a, &bn_add(&b, &c).unwrap()).unwrap();
        let rhs = bn_add(&bn_mul(&a, &b).unwrap(), &bn_mul(&a, &c).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn localization_is_a_ring_map((a, b) in any_field().prop_flat_map(|f| (elem(f), elem(f)))) {
        let lhs = localize(&bn_mul(&a, &b).unwrap(), 1);
        let rhs = localize(&a, 1).try_mul(&localize(&b, 1)).unwrap();
        prop_assert!(lhs.agrees_with(&rhs));
        let sum = localize(&bn_add(&a, &b).unwrap(), 1);
        prop_assert!(sum.agrees_with(&localize(&a, 1).add(&localize(&b, 1)).unwrap()));
    }

    #[test]
    fn homogeneous_products_add_degrees(i in 0usize..4, j in 0usize..4, x in coeff(), y in coeff()) {
        for theory in [CoeffTheory::HW, CoeffTheory::KW] {
            let f = FieldSpec::Rationals;
            let a = BNElem::e_power(witt(f, &x), i, theory.clone(), T);
            let b = BNElem::e_power(witt(f, &y), j, theory.clone(), T);
            let p = bn_mul(&a, &b).unwrap();
            prop_assert!(grading_check(&a, 2 * i as i64));
            prop_assert!(grading_check(&p, 2 * (i + j) as i64));
        }
    }

    #[test]
    fn twist_parity_is_additive(reps in prop::collection::vec((1u32..9, any::<bool>()), 1..5)) {
        let table = EulerTable::hw(FieldSpec::Rationals);
        let labels: Vec<RepLabel> = reps.iter().map(|(m, _)| RepLabel::plus(*m)).collect();
        let expected = labels.iter().fold(false, |t, r| t ^ (r.weight % 2 == 0));
        let x = euler_of_sum(&labels, &table, 2).unwrap();
        prop_assert_eq!(x.tag(), Twist::from_parity(expected));
    }
}

#[test]
fn defining_relations() {
    for f in FIELDS {
        let e = BNElem::e(f, CoeffTheory::HW, T);
        let q0 = BNElem::q0(f, CoeffTheory::HW, T);
        let one = BNElem::integer(f, 1, CoeffTheory::HW, T);
        assert_eq!(bn_mul(&q0, &q0).unwrap(), one);
        assert!(bn_mul(&bn_add(&one, &q0).unwrap(), &e).unwrap().is_zero());
        assert_eq!(rewrite_mul(&q0, &e), bn_mul(&q0, &e).unwrap());
    }
    let f = FieldSpec::Rationals;
    let et = TwistedElem::etilde(f, CoeffTheory::HW, T);
    let sq = EulerTable::hw(f).etilde_square_element(T);
    assert_eq!(twisted_product(&et, &et, &sq).unwrap(), BNElem::e_power(witt(f, &[-1, -1, -1, -1]), 1, CoeffTheory::HW, T));
}

#[test]
fn finite_levels_kill_exactly_high_powers() {
    let f = FieldSpec::Rationals;
    for m in [3i64, 5, 7] {
        for i in 0..=10usize {
            let x = BNElem::e_power(witt(f, &[1, 2]), i, CoeffTheory::HW, 12);
            let y = finite_level(&x, m).unwrap();
            assert_eq!(y.is_zero(), i as i64 >= m - 1, "m = {m}, e^{i}");
            if (i as i64) < m - 1 {
                assert_eq!(y, x);
            }
        }
        let q0 = BNElem::q0(f, CoeffTheory::HW, 12);
        assert_eq!(finite_level(&q0, m).unwrap(), q0);
    }
    assert!(finite_level(&BNElem::e(f, CoeffTheory::HW, 4), 4).is_err());
}

mod common;

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::Zero;
use proptest::prelude::*;

use pinv::engine::{
    self, basic_classes, binomial, blowup_transform, compute, duality_check, hilbert_components,
    modified_segre, poincare_elliptic, poincare_ruled, wall_crossing_difference, wall_crossing_fibered,
    EngineError,
};
use pinv::exterior::{ExtElement, SkewForm};
use pinv::surface::{
    build_log_transform, DivisorClass, EllipticModel, LogFiber, RuledClass, SpecialClass, SurfaceModel,
    SymbolicClass,
};

fn log_transform(fibers: &[(i64, i64, i64)]) -> EllipticModel {
    let fibers: Vec<LogFiber> = fibers.iter().map(|&(n, u, v)| LogFiber { n, u, v }).collect();
    match build_log_transform(&fibers).unwrap() {
        SurfaceModel::Elliptic(m) => m,
        other => panic!("unexpected {other:?}"),
    }
}

fn four_fiber() -> EllipticModel {
    log_transform(&[(3, 1, 1), (3, 1, 0), (3, 1, 0), (3, -3, -1)])
}

#[test]
fn classical_invariants() {
    let k3 = SurfaceModel::k3().invariants();
    assert_eq!((k3.chi, k3.q, k3.p_g), (2, 0, 1));
    let ruled = SurfaceModel::ruled(2).unwrap().invariants();
    assert_eq!((ruled.chi, ruled.q, ruled.p_g), (-1, 2, 0));
    let m = SurfaceModel::Elliptic(four_fiber()).invariants();
    assert_eq!((m.chi, m.q, m.p_g), (0, 1, 0));
    let blown = SurfaceModel::blow_up(SurfaceModel::k3(), 2).unwrap().invariants();
    assert_eq!((blown.chi, blown.q, blown.p_g), (2, 0, 1));
    for model in [
        SurfaceModel::abelian(),
        SurfaceModel::enriques(),
        SurfaceModel::bielliptic(),
        SurfaceModel::general_type(4, 2).unwrap(),
    ] {
        let i = model.invariants();
        assert_eq!(i.chi, 1 - i.q + i.p_g);
    }
}

#[test]
fn canonical_classes() {
    let m = four_fiber();
    assert_eq!(m.canonical_vector(), vec![-2, 2, 2, 2, 2]);
    let plain = EllipticModel::new(1, 0, 1, vec![], vec![]).unwrap();
    assert_eq!(plain.canonical_vector(), vec![0]);
    let rational = EllipticModel::new(0, 2, 0, vec![], vec![]).unwrap();
    assert_eq!(rational.canonical_vector(), vec![0]);
    assert!(SurfaceModel::ruled(1).unwrap().canonical_class().is_err());
    assert_eq!(
        SurfaceModel::k3().canonical_class().unwrap(),
        DivisorClass::Symbolic(SymbolicClass::Canonical)
    );
}

#[test]
fn log_transform_presentations() {
    let m = four_fiber();
    assert_eq!(m.presentation().relations().len(), 6);
    assert_eq!(m.presentation().n_generators(), 5);
    let product = log_transform(&[]);
    assert_eq!((product.chi(), product.q(), product.base_genus()), (0, 1, 0));
    assert!(product.multiplicities().is_empty());
    let bad = build_log_transform(&[LogFiber { n: 3, u: 1, v: 0 }, LogFiber { n: 3, u: 1, v: 0 }]);
    assert!(bad.unwrap_err().to_string().contains("sum of zeta_i"));
}

#[test]
fn albanese_pairings() {
    let m = four_fiber();
    let k = m.canonical_vector();
    assert_eq!(m.twist_index().unwrap(), BigInt::from(9));
    let minus_k: Vec<i64> = k.iter().map(|x| -x).collect();
    let half = m.albanese_fiber_pairing(&minus_k).unwrap() / BigInt::from(2);
    assert_eq!(half, Ratio::from_integer(BigInt::from(-3)));
    assert_eq!(
        log_transform(&[]).albanese_fiber_pairing(&[1]).unwrap(),
        Ratio::from_integer(BigInt::from(1))
    );
    for n in 2..=7 {
        let q = log_transform(&[(n, 1, 0), (n, -1, 0)]);
        assert_eq!(q.twist_index().unwrap(), BigInt::from(n));
    }
}

#[test]
fn quotient_surface_sections() {
    for n in 2..=7i64 {
        let m = log_transform(&[(n, 1, 0), (n, -1, 0)]);
        let pair = poincare_elliptic(&m, &[1, 0, 0]).unwrap();
        assert_eq!(pair.p_plus.numeric_degree(), BigInt::from(n + 1));
        let comps = hilbert_components(&m, &[1, 0, 0]).unwrap();
        assert_eq!(comps.len() as i64, n);
        assert_eq!(comps.iter().filter(|c| !c.empty && c.d == 1).count(), 1);
        assert_eq!(comps.iter().filter(|c| !c.empty && c.d == 0).count() as i64, n - 1);
        for c in comps.iter().filter(|c| c.d == 0) {
            assert_eq!(c.a.iter().sum::<i64>(), n);
        }
    }
}

#[test]
fn elliptic_product_without_multiple_fibers() {
    let m = EllipticModel::new(1, 0, 1, vec![], vec![]).unwrap();
    let pair = poincare_elliptic(&m, &[0]).unwrap();
    assert_eq!(pair.numeric_degrees(), (BigInt::from(1), BigInt::from(1)));
    assert_eq!(pair.rank(), 2);
}

#[test]
fn four_fiber_duality_and_zero_system() {
    let m = four_fiber();
    let zero = poincare_elliptic(&m, &[0; 5]).unwrap();
    let k = poincare_elliptic(&m, &m.canonical_vector()).unwrap();
    assert!(duality_check(&zero, &k, 0).unwrap());
    assert_eq!(
        zero.difference(),
        wall_crossing_fibered(1, 0, &BigInt::from(-3)).unwrap()
    );
    let comps = hilbert_components(&m, &[0; 5]).unwrap();
    let nonempty: Vec<_> = comps.iter().filter(|c| !c.empty).collect();
    assert_eq!(nonempty.len(), 1);
    assert_eq!((nonempty[0].d, nonempty[0].a.clone()), (0, vec![0, 0, 0, 0]));
}

#[test]
fn json_shape_of_pairs() {
    let pair = poincare_elliptic(&four_fiber(), &[0; 5]).unwrap();
    let j = pair.to_json();
    assert_eq!(j["numeric_degrees"], serde_json::json!([1, 4]));
    assert_eq!(j["provenance"], "elliptic_fiber_sum");
    assert_eq!(j["p_minus"], serde_json::json!([["", 4]]));
}

#[test]
fn blowup_of_a_k3_keeps_simple_type() {
    let model = SurfaceModel::blow_up(SurfaceModel::k3(), 2).unwrap();
    let report = basic_classes(&model).unwrap();
    assert_eq!(report.classes.len(), 4);
    assert!(report.simple_type);
    for (class, _) in &report.classes {
        assert_eq!(model.m_m_minus_k(class).unwrap(), 0);
    }
    let off = DivisorClass::BlowUp {
        base: Box::new(DivisorClass::Symbolic(SymbolicClass::Zero)),
        l: vec![2, 0],
    };
    assert!(compute(&model, &off).unwrap().is_zero());
}

#[test]
fn special_surfaces() {
    let e = SurfaceModel::enriques();
    let nonempty = SpecialClass { nu: 0, hilb_nonempty: true, c_half: None };
    let pair = compute(&e, &DivisorClass::Special(nonempty)).unwrap();
    assert_eq!(pair.numeric_degrees(), (BigInt::from(1), BigInt::zero()));
    let empty = SpecialClass { hilb_nonempty: false, ..nonempty };
    let pair = compute(&e, &DivisorClass::Special(empty)).unwrap();
    assert_eq!(pair.numeric_degrees(), (BigInt::zero(), BigInt::from(-1)));
    let b = SurfaceModel::bielliptic();
    let class = DivisorClass::Special(SpecialClass { nu: 0, hilb_nonempty: true, c_half: Some(2) });
    assert_eq!(compute(&b, &class).unwrap().p_plus, ExtElement::scalar(2, 2));
    let wc = engine::wallcheck(&b, &class).unwrap();
    assert!(wc.agree());
    assert!(matches!(basic_classes(&e), Err(EngineError::InfiniteBasicClasses)));
}

#[test]
fn wallcheck_rejects_positive_geometric_genus() {
    let class = DivisorClass::Symbolic(SymbolicClass::Zero);
    assert!(matches!(
        engine::wallcheck(&SurfaceModel::k3(), &class),
        Err(EngineError::Unsupported(_))
    ));
}

#[test]
fn class_type_mismatch() {
    let err = compute(&SurfaceModel::k3(), &DivisorClass::Fiber(vec![0])).unwrap_err();
    assert!(matches!(err, EngineError::Surface(_)));
}

fn ruled_class() -> impl Strategy<Value = (usize, i64, i64)> {
    (0usize..=4, -5i64..=5, 0i64..=6)
}

proptest! {
    #[test]
    fn ruled_difference_is_wall_crossing((g, p, nu) in ruled_class()) {
        prop_assume!(p >= -1);
        let pair = poincare_ruled(g, &RuledClass { fiber_pairing: p, nu }).unwrap();
        let wall = wall_crossing_fibered(g, nu, &BigInt::from(p + 1)).unwrap();
        prop_assert_eq!(pair.difference(), wall.clone());
        if let Some((plus, minus)) = &pair.branch_conflict {
            prop_assert_eq!(plus.checked_sub(minus).unwrap(), wall);
        }
    }

    #[test]
    fn ruled_wall_crossing_for_negative_pairings((g, p, nu) in ruled_class()) {
        prop_assume!(p <= -2);
        let pair = poincare_ruled(g, &RuledClass { fiber_pairing: p, nu }).unwrap();
        prop_assert_eq!(pair.difference(), wall_crossing_fibered(g, nu, &BigInt::from(p + 1)).unwrap());
        prop_assert!(pair.p_plus.is_zero());
    }

    #[test]
    fn fibered_is_difference_with_scaled_standard_form(q in 0usize..=4, nu in 0i64..=5, c in -4i64..=4) {
        let theta = SkewForm::standard(q).scaled(c).two_form();
        prop_assert_eq!(
            wall_crossing_fibered(q, nu, &BigInt::from(c)).unwrap(),
            wall_crossing_difference(q, nu, &theta).unwrap()
        );
    }

    #[test]
    fn segre_equals_wall_crossing(q in 0usize..=3, nu in 0i64..=5, upper in prop::collection::vec(-3i64..=3, 15)) {
        let n = 2 * q;
        let theta = SkewForm::from_upper(q, &upper[..n * n.saturating_sub(1) / 2]).unwrap().two_form();
        let exp = theta.exp_two_form().unwrap();
        prop_assert_eq!(
            modified_segre(1 - q as i64 + nu, &exp, q).unwrap(),
            wall_crossing_difference(q, nu, &theta).unwrap()
        );
    }

    #[test]
    fn blowup_coherence((g, p, nu) in ruled_class(), l in -3i64..=4) {
        let pair = poincare_ruled(g, &RuledClass { fiber_pairing: p, nu }).unwrap();
        let mmk = 2 * nu;
        let via_zero = blowup_transform(&blowup_transform(&pair, mmk, 0), mmk, l);
        prop_assert_eq!(via_zero, blowup_transform(&pair, mmk, l));
    }

    #[test]
    fn generalized_binomial_matches_oracle(n in -20i64..=20, d in -2i64..=12) {
        prop_assert_eq!(binomial(n, d), common::binomial_oracle(n, d));
    }
}

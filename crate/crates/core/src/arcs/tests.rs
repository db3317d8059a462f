use proptest::prelude::*;

use super::*;
use crate::desing::{build_model, Certificate, SmoothModel};
use crate::polyring::{Namespaces, Poly};
use crate::ring::{Ctx, Series};
use crate::rng::SplitMix64;
use crate::testutil::{cusp_beta_in, e1, e1_in, e3, e3_in, f5, parabola_in, ser, ser_in};

fn e1_model() -> SmoothModel {
    build_model(&e1()).unwrap()
}

fn reference(m: &SmoothModel) -> LiftResult {
    make_lift(m, &vec![Series::zero(m.ctx()); m.param_count()]).unwrap()
}

#[test]
fn hensel_exact_root_needs_no_steps() {
    let m = e1_model();
    let out = hensel_solve(&m, &[ser("0")], &[ser("0")], 32).unwrap();
    assert!(out.t[0].is_zero_at_prec());
    assert_eq!(out.iterations, 0);
}

#[test]
fn hensel_e1_leading_term() {
    let m = e1_model();
    let out = hensel_solve(&m, &[ser("x^9")], &[ser("0")], 32).unwrap();
    assert_eq!(out.t[0].to_string(), "3*x^28 + O(x^32)");
    assert!(out.iterations <= 7);
}

#[test]
fn hensel_e3_matches_closed_form() {
    // T1 (1 + x^7) = x^10
    let m = build_model(&e3()).unwrap();
    let out = hensel_solve(&m, &[ser("x")], &[ser("0")], 30).unwrap();
    assert_eq!(out.t[0].to_string(), "x^10 - x^17 + x^24 + O(x^30)");
}

#[test]
fn hensel_rejects_bad_inputs() {
    let m = e1_model();
    assert!(matches!(
        hensel_solve(&m, &[ser("1 + x")], &[ser("0")], 10),
        Err(ArcError::NotInMaximalIdeal { index: 2, .. })
    ));
    assert!(matches!(
        hensel_solve(&m, &[ser("x")], &[ser("0")], 33),
        Err(ArcError::PrecisionExhausted {
            target: 33,
            attainable: 32
        })
    ));
    assert!(matches!(
        hensel_solve(&m, &[], &[ser("0")], 10),
        Err(ArcError::Arity {
            expected: 1,
            got: 0
        })
    ));
}

#[test]
fn lift_examples() {
    let m = e1_model();
    let r = reference(&m);
    assert_eq!(r.y[0].to_string(), "x^3 + O(x^37)");
    assert_eq!(r.y[1].to_string(), "x^2");
    assert!(r.strict);

    let l = make_lift(&m, &[ser("x^9")]).unwrap();
    assert_eq!(l.y[0].to_string(), "x^3 + 6*x^18 + 6*x^33 + O(x^37)");
    assert_eq!(l.y[1].to_string(), "x^2 + 4*x^17");
    assert!(l.strict);
    assert!(l.residual_f >= l.prec());
    assert_eq!(l.prec(), 37);

    let l = make_lift(&m, &[ser("x/2 + x^8/4")]).unwrap();
    assert!(l.strict);
    assert!(l.y[0].agrees_with(&ser("x^3 + 3*x^10 + 3*x^17 + x^24")));
    assert!(l.y[1].agrees_with(&ser("x^2 + 2*x^9 + x^16")));
}

#[test]
fn non_strict_lifts_are_flagged() {
    // every E1 lift is strict: ord(d*Gy*t) >= 9 for any t in xA'
    let m = e1_model();
    assert!(make_lift(&m, &[ser("x")]).unwrap().strict);

    let m = build_model(&parabola_in(Ctx::rational())).unwrap();
    let l = reference(&m);
    assert!(!l.strict);
    assert!(l.residual_f >= l.prec());
    assert!(matches!(
        extract_t(&m, &l.y),
        Err(ArcError::NotStrict { .. })
    ));
}

#[test]
fn extract_exact_cusp_arc() {
    let m = e1_model();
    let arc = [
        ser("x^3 + 3*x^10 + 3*x^17 + x^24"),
        ser("x^2 + 2*x^9 + x^16"),
    ];
    let t = extract_t(&m, &arc).unwrap();
    assert!(t[0].agrees_with(&ser("3/4*x^12 + 1/2*x^19")));
    assert!(t[1].agrees_with(&ser("1/2*x + 1/4*x^8")));
    assert_eq!(t[1].prec(), 32);

    let err = extract_t(&m, &[ser("x^3 + x^5"), ser("x^2")]).unwrap_err();
    assert!(matches!(
        err,
        ArcError::NotStrict {
            index: 1,
            need: 9,
            ..
        }
    ));

    let zero = extract_t(&m, &[ser("x^3"), ser("x^2")]).unwrap();
    assert!(zero.iter().all(Series::is_zero_at_prec));
}

#[test]
fn extract_rejects_points_off_the_curve() {
    let m = e1_model();
    let err = extract_t(&m, &[ser("x^3 + x^20"), ser("x^2")]).unwrap_err();
    assert!(matches!(err, ArcError::ResidualNonzero(_)));
}

#[test]
fn offset_examples() {
    let m = e1_model();
    let r = reference(&m);
    let same = offset_lift(&m, &r, &[ser("0")]).unwrap();
    assert!(same.y.iter().zip(&r.y).all(|(a, b)| a.agrees_with(b)));

    let one = offset_lift(&m, &r, &[ser("1")]).unwrap();
    assert_eq!(one.y[1].to_string(), "x^2 + 4*x^17");
    assert!(one.y[0].agrees_with(&ser("x^3 + 6*x^18 + 6*x^33")));

    let xz = offset_lift(&m, &r, &[ser("x")]).unwrap();
    assert_eq!(xz.y[1].to_string(), "x^2 + 4*x^18");
    assert!(xz.y[0].agrees_to(&ser("x^3 + 6*x^19"), 35));
}

#[test]
fn params_examples() {
    let m = e1_model();
    let r = reference(&m);
    let one = offset_lift(&m, &r, &[ser("1")]).unwrap();
    let z = extract_params(&m, &r, &one.y).unwrap();
    assert!(z[0].agrees_with(&ser("1")));
    assert_eq!(z[0].prec(), 23);

    let z = extract_params(&m, &r, &r.y).unwrap();
    assert!(z[0].is_zero_at_prec());

    let arc = [
        ser("x^3 + 3*x^10 + 3*x^17 + x^24"),
        ser("x^2 + 2*x^9 + x^16"),
    ];
    let err = extract_params(&m, &r, &arc).unwrap_err();
    assert!(matches!(
        err,
        ArcError::OutOfFamily {
            index: 2,
            need: 9,
            ..
        }
    ));
}

#[test]
fn offset_needs_a_strict_reference() {
    let m = build_model(&parabola_in(Ctx::rational())).unwrap();
    let loose = reference(&m);
    assert!(matches!(
        offset_lift(&m, &loose, &[ser("0")]),
        Err(ArcError::NotStrict { .. })
    ));
}

#[test]
fn reference_search_canonical() {
    for p in [e1(), e3()] {
        let m = build_model(&p).unwrap();
        match find_strict_reference(&m, 8) {
            ReferenceSearch::Found { lift, stage } => {
                assert_eq!(stage, SearchStage::Canonical);
                assert!(lift
                    .y
                    .iter()
                    .zip(m.y_prime())
                    .all(|(a, b)| a.agrees_with(b)));
            }
            other => panic!("{other:?}"),
        }
    }
}

#[test]
fn reference_search_layered() {
    for ctx in [Ctx::rational(), f5()] {
        let m = build_model(&parabola_in(ctx)).unwrap();
        assert!(!reference(&m).strict);
        match find_strict_reference(&m, 8) {
            ReferenceSearch::Found { lift, stage } => {
                assert_eq!(stage, SearchStage::Layered);
                assert!(lift.strict);
                let expect = ser_in("x^2 + x^5", ctx);
                assert!(lift.y[0].agrees_to(&expect, 5));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(
            find_strict_reference(&m, 0),
            ReferenceSearch::NotFound { depth: 0 }
        );
    }
}

#[test]
fn reference_search_reports_not_found() {
    for ctx in [Ctx::rational(), f5()] {
        let m = build_model(&cusp_beta_in(ctx)).unwrap();
        assert_eq!(
            find_strict_reference(&m, 8),
            ReferenceSearch::NotFound { depth: 8 }
        );
    }
    let oracle = oracle_enumerate(&cusp_beta_in(f5()), 10).unwrap();
    assert!(oracle.is_empty());
}

#[test]
fn oracle_trivial_and_budget() {
    let p = e1_in(f5());
    let only = oracle_enumerate(&p, 9).unwrap();
    assert_eq!(only.lines(), vec!["(x^3, x^2)".to_string()]);
    assert!(matches!(
        oracle_enumerate(&p, 30),
        Err(ArcError::BudgetExceeded { cells: 42, .. })
    ));
    assert!(matches!(
        oracle_enumerate(&p, 8),
        Err(ArcError::OracleLength { m: 8, min: 9 })
    ));
    assert_eq!(oracle_enumerate(&e1(), 10), Err(ArcError::FieldNotFinite));
}

#[test]
fn oracle_contains_lifts() {
    let p = e1_in(f5());
    let m = build_model(&p).unwrap();
    let set = oracle_enumerate(&p, 11).unwrap();
    assert!(!set.is_empty());
    let r = reference(&m);
    assert!(set.contains_arc(&r.y));
    for k in 0..5 {
        let l = offset_lift(&m, &r, &[Series::from_ints(m.ctx(), &[k, 1])]).unwrap();
        assert!(set.contains_arc(&l.y));
    }
    assert_eq!(set, oracle_enumerate(&p, 11).unwrap());
}

#[test]
fn certificate_scaling_gives_the_same_lifts() {
    let p1 = e1();
    let mut p2 = e1();
    let x = Poly::parse("x", p2.ctx, p2.space(), Namespaces::Y).unwrap();
    p2.certificate = Certificate {
        n: x.clone(),
        cofactors: vec![vec![x]],
    };
    p2.c = Some(5);
    let m1 = build_model(&p1).unwrap();
    let m2 = build_model(&p2).unwrap();
    let mut rng = SplitMix64::new(11);
    for _ in 0..10 {
        let t = rng.series(m1.ctx(), 1, 6);
        let l2 = make_lift(&m2, std::slice::from_ref(&t)).unwrap();
        let l1 = make_lift(&m1, &[t.mul_x_pow(2)]).unwrap();
        for i in 0..2 {
            assert!(l1.y[i].agrees_with(&l2.y[i]));
        }
    }
}

#[test]
fn batch_lifting_matches_sequential() {
    let m = e1_model();
    let mut rng = SplitMix64::new(7);
    let inputs: Vec<Vec<Series>> = (0..24).map(|_| vec![rng.series(m.ctx(), 1, 6)]).collect();
    let seq: Vec<_> = inputs.iter().map(|t| make_lift(&m, t)).collect();
    assert_eq!(lift_batch(&m, &inputs), seq);
    let again = std::thread::scope(|s| {
        let h = s.spawn(|| lift_batch(&m, &inputs));
        h.join().unwrap()
    });
    assert_eq!(again, seq);
}

fn model_for(idx: usize) -> SmoothModel {
    let p = match idx {
        0 => e1(),
        1 => e1_in(f5()),
        2 => e3(),
        _ => e3_in(f5()),
    };
    build_model(&p).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn lifts_are_sound_and_reconstructible(idx in 0usize..4, seed in any::<u64>()) {
        let m = model_for(idx);
        let t = SplitMix64::new(seed).series(m.ctx(), 1, 6);
        let l = make_lift(&m, &[t]).unwrap();
        prop_assert!(l.residual_f >= l.prec());
        prop_assert!(l.residual_i + m.c() >= l.prec());
        prop_assert!(l.iterations <= 7);
        if l.strict {
            let back = extract_t(&m, &l.y).unwrap();
            for (a, b) in back.iter().zip(&l.t) {
                prop_assert!(a.agrees_with(b));
            }
        }
    }

    #[test]
    fn offset_round_trip(idx in 0usize..4, seed in any::<u64>()) {
        let m = model_for(idx);
        let r = reference(&m);
        let z = SplitMix64::new(seed).series(m.ctx(), 0, 5);
        let l = offset_lift(&m, &r, std::slice::from_ref(&z)).unwrap();
        prop_assert!(l.strict);
        let back = extract_params(&m, &r, &l.y).unwrap();
        let contract = m.ctx().n_work - 4 * m.c() - 1;
        prop_assert!(back[0].agrees_to(&z, contract));
    }
}

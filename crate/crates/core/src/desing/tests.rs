use super::*;
use crate::polyring::{Namespaces, Poly, VarSpace};
use crate::ring::{Ctx, Series};
use crate::testutil::{e1, e1_in, e3, f5, parabola_in, problem, ser};

fn parabola() -> Problem {
    parabola_in(Ctx::rational())
}

#[test]
fn e1_validates_with_e_3() {
    let r = validate_problem(&e1());
    assert!(r.all_passed(), "{r}");
    assert_eq!(r.e, Some(3));
    assert_eq!(r.c, Some(4));
    assert_eq!(r.checks.len(), 3);
}

#[test]
fn order_condition_fails_for_c_3() {
    let mut p = e1();
    p.c = Some(3);
    let r = validate_problem(&p);
    assert!(!r.check(CHECK_ORDER).unwrap().passed);
    assert!(r.check(CHECK_COFACTOR).unwrap().passed);
    assert_eq!(r.failure(), Some(FailureKind::CertificateOrOrder));
}

#[test]
fn jet_check_is_modulo_x_2c_plus_1() {
    let mut p = e1();
    // f = -3x^8 - 3x^10 - x^12: order 8 < 9
    p.jet = vec![ser("x^3"), ser("x^2 + x^4")];
    let r = validate_problem(&p);
    assert!(!r.check(CHECK_JET).unwrap().passed);
    assert!(r.check(CHECK_ORDER).unwrap().passed);

    // f = -3x^9 - 3x^12 - x^15: order exactly 9
    p.jet = vec![ser("x^3"), ser("x^2 + x^5")];
    let r = validate_problem(&p);
    assert!(r.all_passed(), "{r}");
    assert_eq!(r.e, Some(3));

    p.jet = vec![ser("x^3 + x^5"), ser("x^2")];
    let r = validate_problem(&p);
    assert!(!r.check(CHECK_JET).unwrap().passed);
    assert_eq!(r.failure(), Some(FailureKind::Structural));
}

#[test]
fn omitted_c_becomes_e_plus_one() {
    let mut p = e1();
    p.c = None;
    let r = validate_problem(&p);
    assert_eq!(r.c, Some(4));
    assert!(r.all_passed());

    p.jet_prec = 8;
    let r = validate_problem(&p);
    assert_eq!(r.failure(), Some(FailureKind::Structural));
}

#[test]
fn degenerate_minor_value_is_an_order_failure() {
    let mut p = e1();
    p.jet = vec![ser("0"), ser("0")];
    let r = validate_problem(&p);
    let ch = r.check(CHECK_ORDER).unwrap();
    assert!(!ch.passed);
    assert!(ch.detail.contains("degenerate"));
    assert_eq!(r.e, None);
}

#[test]
fn structural_errors_are_collected() {
    let mut p = e1();
    p.minor_cols = vec![0, 0];
    p.jet.pop();
    let r = validate_problem(&p);
    assert!(r.structural.len() >= 2);
    assert!(r.checks.is_empty());

    let mut p = e3();
    p.mode = Mode::Variety;
    assert_eq!(
        validate_problem(&p).failure(),
        Some(FailureKind::Structural)
    );
}

#[test]
fn bad_certificate_fails_identity() {
    let mut p = e1();
    p.certificate.cofactors[0][0] = Poly::parse("2", p.ctx, p.space(), Namespaces::Y).unwrap();
    let r = validate_problem(&p);
    assert!(!r.check(CHECK_COFACTOR).unwrap().passed);
    assert_eq!(r.failure(), Some(FailureKind::CertificateOrOrder));
}

#[test]
fn normalization_examples() {
    let p = e1();
    let nm = normalize_certificate(&p, 3, 4).unwrap();
    assert_eq!(nm.certificate.n.to_string(), "x");
    assert_eq!(nm.p.to_string(), "2*x*Y1");
    assert_eq!(nm.d.to_string(), "2*x^4");
    assert_eq!(nm.certificate.cofactors[0][0].to_string(), "x");

    let nm = normalize_certificate(&e3(), 4, 5).unwrap();
    assert_eq!(nm.certificate.n.to_string(), "x");
    assert_eq!(nm.d.to_string(), "x^5");

    assert_eq!(
        normalize_certificate(&p, 3, 3),
        Err(DesingError::OrderTooHigh { e: 3, c: 3 })
    );
}

#[test]
fn border_examples() {
    let b = build_border(&e1()).unwrap();
    assert_eq!(b.h.to_string(), "[[2*Y1, -3*Y2^2], [0, 1]]");
    assert_eq!((b.perm.clone(), b.sign), (vec![0, 1], 1));
    let b = build_border(&e3()).unwrap();
    assert_eq!(b.h.to_string(), "[[Y2, Y1], [0, 1]]");

    let b = build_border(&parabola()).unwrap();
    assert_eq!(b.h.to_string(), "[[1, -2*Y2], [1, 0]]");
    assert_eq!((b.perm.clone(), b.sign), (vec![1, 0], -1));

    let toy = problem(Ctx::rational(), 1, &["Y1 - x"], &[0], &[0], None, &["x"]);
    let b = build_border(&toy).unwrap();
    assert_eq!(b.h.to_string(), "[[1]]");
}

#[test]
fn g_examples() {
    let p = e1();
    let nm = normalize_certificate(&p, 3, 4).unwrap();
    let b = build_border(&p).unwrap();
    let (g, gy) = compute_g(&b, &nm.certificate.n, &nm.p, &p.y_prime()).unwrap();
    assert_eq!(g.to_string(), "[[x, 3*x*Y2^2], [0, 2*x*Y1]]");
    assert_eq!(gy.to_string(), "[[x, 3*x^5], [0, 2*x^4]]");

    let p = e3();
    let nm = normalize_certificate(&p, 4, 5).unwrap();
    let b = build_border(&p).unwrap();
    let (_, gy) = compute_g(&b, &nm.certificate.n, &nm.p, &p.y_prime()).unwrap();
    assert_eq!(gy.to_string(), "[[x, -x^3], [0, x^5]]");
}

#[test]
fn identity_h_gives_identity_g() {
    let ctx = Ctx::rational();
    let space = VarSpace::new(2);
    let b = Border {
        h: crate::polyring::PolyMatrix::identity(ctx, space, 2),
        perm: vec![0, 1],
        sign: 1,
    };
    let one = Poly::one(ctx, space);
    let (g, _) = compute_g(&b, &one, &one, &[Series::one(ctx), Series::one(ctx)]).unwrap();
    assert_eq!(g.to_string(), "[[1, 0], [0, 1]]");
}

#[test]
fn taylor_examples() {
    let m = build_model(&e1()).unwrap();
    assert!(m.a()[0].is_zero_at_prec());
    assert_eq!(
        m.q()[0].to_string(),
        "x^2*T1^2 + 6*x^6*T1*T2 - 3*x^10*T2^2 - 16*x^16*T2^3"
    );

    let m = build_model(&e3()).unwrap();
    assert!(m.a()[0].is_zero_at_prec());
    assert_eq!(m.q()[0].to_string(), "x^6*T1*T2 - x^8*T2^2");

    let toy = problem(Ctx::rational(), 1, &["Y1 - x"], &[0], &[0], None, &["x"]);
    let m = build_model(&toy).unwrap();
    assert!(m.q()[0].is_zero());
}

#[test]
fn e1_model() {
    let m = build_model(&e1()).unwrap();
    assert_eq!(
        m.equations()[0].to_string(),
        "T1 + x^2*T1^2 + 6*x^6*T1*T2 - 3*x^10*T2^2 - 16*x^16*T2^3"
    );
    assert_eq!(m.loc_s().to_string(), "1 + 2*x^2*T1 + 6*x^6*T2");
    assert_eq!(m.loc_s_prime().to_string(), "1 + 2*x^2*T1 + 6*x^6*T2");
    assert_eq!(m.param_count(), 1);
    assert_eq!(m.precision(), 32);
    assert_eq!(m.hy().to_string(), "[[2*x^3, -3*x^4], [0, 1]]");
}

#[test]
fn e1_model_over_f5() {
    let m = build_model(&e1_in(f5())).unwrap();
    assert_eq!(
        m.q()[0].to_string(),
        "x^2*T1^2 + x^6*T1*T2 + 2*x^10*T2^2 + 4*x^16*T2^3"
    );
    assert!(verify_model(&m).all_passed());
}

#[test]
fn e3_model() {
    let m = build_model(&e3()).unwrap();
    assert_eq!(m.equations()[0].to_string(), "T1 + x^6*T1*T2 - x^8*T2^2");
    assert_eq!(m.loc_s().to_string(), "1 + x^6*T2");
    assert_eq!(m.param_count(), 1);
}

#[test]
fn parabola_model() {
    let m = build_model(&parabola()).unwrap();
    assert_eq!((m.e(), m.c()), (1, 2));
    assert_eq!(m.n_norm().to_string(), "x");
    assert_eq!(m.d().to_string(), "-2*x^2");
    assert_eq!(m.g_matrix().to_string(), "[[0, -2*x*Y2], [x, -x]]");
    assert_eq!(m.gy().to_string(), "[[0, -2*x^2], [x, -x]]");
    assert_eq!(m.free_cols(), vec![0]);
    assert!(verify_model(&m).all_passed());
}

#[test]
fn square_system_has_no_parameters() {
    let toy = problem(Ctx::rational(), 1, &["Y1 - x"], &[0], &[0], None, &["x"]);
    let m = build_model(&toy).unwrap();
    assert_eq!(m.param_count(), 0);
    assert!(verify_model(&m).all_passed());
}

#[test]
fn verify_accepts_models_and_rejects_tampering() {
    for p in [e1(), e3()] {
        let m = build_model(&p).unwrap();
        let rep = verify_model(&m);
        assert!(rep.all_passed(), "{rep}");
    }
    let m = build_model(&e1()).unwrap();
    let bad = Poly::parse(
        "2*x^2*T1^2 + 6*x^6*T1*T2 - 3*x^10*T2^2 - 16*x^16*T2^3",
        m.ctx(),
        m.space(),
        Namespaces::T,
    )
    .unwrap();
    let rep = verify_model(&m.with_q(vec![bad]));
    assert!(!rep.all_passed());
    assert!(
        !rep.check("f(y' + d*Gy*T) = d^2 (a + T + Q)")
            .unwrap()
            .passed
    );
}

#[test]
fn build_model_surfaces_validation_failures() {
    let mut p = e1();
    p.c = Some(3);
    match build_model(&p) {
        Err(err @ DesingError::Invalid { .. }) => assert!(!err.is_structural()),
        other => panic!("unexpected {other:?}"),
    }
}

use super::*;
use crate::half::Half;
use crate::presets::{self, LieData};
use crate::scalars::parse_scalar;

fn s(src: &str) -> Scalar {
    parse_scalar(src).unwrap()
}

fn cc(src: &str) -> CoordChange {
    CoordChange::parse(src).unwrap()
}

fn h(n: i64) -> Half {
    Half::from_int(n)
}

#[test]
fn zero_linear_term_is_rejected() {
    assert_eq!(CoordChange::parse("0, 1"), Err(Error::NonInvertibleLinearTerm));
    assert_eq!(CoordChange::new(vec![]), Err(Error::NonInvertibleLinearTerm));
}

#[test]
fn identity_and_scaling_charges() {
    let id = CoordChange::identity(5).decompose();
    assert!(id.v0().is_one());
    assert!(id.v.iter().skip(1).all(Scalar::is_zero));
    let two = CoordChange::scaling(Scalar::from_int(2), 4).unwrap().decompose();
    assert_eq!(two.v0(), &Scalar::from_int(2));
    assert!(two.v.iter().skip(1).all(Scalar::is_zero));
}

#[test]
fn single_field_flow_is_a_geometric_series() {
    // exp(a z^2 d/dz) z = z / (1 - a z)
    let v = vec![Scalar::zero(), s("a")];
    let e = series::exp_field_on_z(&v, 5, &Scalar::one());
    for (i, c) in e.iter().enumerate().skip(1) {
        assert_eq!(c, &Scalar::param("a").pow(i as i64 - 1).unwrap());
    }
}

#[test]
fn quadratic_change_charges() {
    let vc = cc("1, a").decompose();
    assert_eq!(vc.get(1), s("a"));
    // matching z^3 in z/(1 - a z) forces v_2 = -a^2
    let vc = cc("1, a, 0").decompose();
    assert_eq!(vc.get(1), s("a"));
    assert_eq!(vc.get(2), s("-a^2"));
}

#[test]
fn decompose_reconstruct_roundtrip() {
    for src in ["1", "2, 3", "1, a, b", "3, -1, 1/2, 5", "a, b, 1"] {
        let rho = cc(src);
        assert_eq!(rho.decompose().reconstruct().unwrap(), rho, "{src}");
    }
}

#[test]
fn inverse_and_composition() {
    let rho = cc("2, 1, -3, 1/2");
    let inv = rho.inverse().unwrap();
    assert_eq!(rho.compose(&inv).unwrap(), CoordChange::identity(4));
    assert_eq!(inv.compose(&rho).unwrap(), CoordChange::identity(4));
    assert_eq!(
        rho.compose(&cc("1, 1")),
        Err(Error::TruncationMismatch(4, 2))
    );
    // mu(rho(z)) for rho = 2z, mu = z + z^2
    assert_eq!(cc("2, 0").compose(&cc("1, 1")).unwrap(), cc("2, 4"));
}

#[test]
fn scaling_acts_by_inverse_degree_power() {
    let inst = presets::virasoro(s("c"));
    let rho = CoordChange::scaling(s("a"), 1).unwrap();
    for mono in inst.fock().basis_up_to(h(4)) {
        let v = crate::fock::State::from_monomial(mono.clone());
        let deg = inst.fock().degree(&mono).to_int().unwrap();
        let expected = v.scale(&Scalar::param("a").pow(-deg).unwrap());
        assert_eq!(r_apply(&inst, &rho, &v).unwrap(), expected);
        assert_eq!(r_inverse_apply(&inst, &rho, &expected).unwrap(), v);
    }
}

#[test]
fn quadratic_change_on_conformal_vector() {
    // v_1 = e, v_2 = -e^2; L_1 w = 0 and L_2 w = c/2 |0>
    let inst = presets::virasoro(s("c"));
    let w = inst.conformal_vector().unwrap().clone();
    let out = r_apply(&inst, &cc("1, e"), &w).unwrap();
    let expected = w.add(&State::vacuum().scale(&s("c*e^2/2")));
    assert_eq!(out, expected);
}

#[test]
fn action_is_a_homomorphism() {
    let inst = presets::heisenberg(s("lambda"));
    let d = 3;
    let rho = cc("2, 1, 0, 0");
    let mu = cc("1, 0, -1, 0");
    let prod = rho.compose(&mu).unwrap();
    for mono in inst.fock().basis_up_to(h(d)) {
        let v = State::from_monomial(mono);
        let lhs = r_apply(&inst, &prod, &v).unwrap();
        let rhs = r_apply(&inst, &rho, &r_apply(&inst, &mu, &v).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
}

#[test]
fn reversed_order_is_not_the_action() {
    let inst = presets::heisenberg(Scalar::zero());
    let rho = cc("2, 0");
    let mu = cc("1, 1");
    let prod = rho.compose(&mu).unwrap();
    let v = inst.parse("b(-2) |0>").unwrap();
    let reversed = r_apply(&inst, &mu, &r_apply(&inst, &rho, &v).unwrap()).unwrap();
    assert_ne!(r_apply(&inst, &prod, &v).unwrap(), reversed);
}

#[test]
fn transformation_law_for_identity_and_scaling() {
    let inst = presets::heisenberg(s("lambda"));
    let b = inst.parse("b(-1) |0>").unwrap();
    let bb = inst.parse("b(-1)^2 |0>").unwrap();
    for a in [&b, &bb] {
        let r = huang_check(&inst, a, &CoordChange::identity(3), h(3), &Truncation::Exact).unwrap();
        assert!(r.passed, "{}", r.summary());
        let r = huang_check(&inst, a, &cc("a"), h(3), &Truncation::Exact).unwrap();
        assert!(r.passed, "{}", r.summary());
    }
}

#[test]
fn transformation_law_first_order() {
    let inst = presets::heisenberg(Scalar::zero());
    let b = inst.parse("b(-1) |0>").unwrap();
    let trunc = Truncation::FirstOrder("e".into());
    let r = huang_check(&inst, &b, &cc("1, e"), h(3), &trunc).unwrap();
    assert!(r.passed, "{}", r.summary());
    assert!(r.coefficients > 0);
    let vir = presets::virasoro(s("c"));
    let w = vir.conformal_vector().unwrap().clone();
    let r = huang_check(&vir, &w, &cc("1, e, e"), h(4), &trunc).unwrap();
    assert!(r.passed, "{}", r.summary());
}

#[test]
fn transformation_law_exact_quadratic() {
    let inst = presets::heisenberg(s("lambda"));
    let b = inst.parse("b(-1) |0>").unwrap();
    let r = huang_check(&inst, &b, &cc("1, 1"), h(2), &Truncation::Exact).unwrap();
    assert!(r.passed, "{}", r.summary());
}

#[test]
fn missing_differential_factor_is_detected() {
    // dropping rho'(t)^Delta from the conjugated field must break the law
    let inst = presets::heisenberg(Scalar::zero());
    let b = inst.parse("b(-1) |0>").unwrap();
    let engine = transform::Engine::new(&inst, &cc("a"), h(2), &Truncation::Exact).unwrap();
    let r = engine
        .run("probe", &b, |part, _, prec| {
            let mut out = vec![State::zero(); prec];
            out[0] = part.clone();
            Ok(out)
        })
        .unwrap();
    assert!(!r.passed);
    assert!(r.witness.unwrap().contains("coefficient of t^"));
}

#[test]
fn primaries_transform_as_differentials() {
    let inst = presets::heisenberg(Scalar::zero());
    let b = inst.parse("b(-1) |0>").unwrap();
    let r = primary_differential_check(&inst, &b, &cc("a"), h(3), &Truncation::Exact).unwrap();
    assert!(r.passed, "{}", r.summary());
    let r = primary_differential_check(&inst, &State::vacuum(), &cc("1, 1"), h(3), &Truncation::Exact).unwrap();
    assert!(r.passed, "{}", r.summary());

    let aff = presets::affine(&LieData::sl2(), s("k"));
    let je = aff.parse("e(-1) v_k").unwrap();
    let trunc = Truncation::FirstOrder("e".into());
    let r = primary_differential_check(&aff, &je, &cc("1, e"), h(2), &trunc).unwrap();
    assert!(r.passed, "{}", r.summary());
}

#[test]
fn non_primary_is_rejected() {
    let inst = presets::heisenberg(s("lambda"));
    let b = inst.parse("b(-1) |0>").unwrap();
    let err = primary_differential_check(&inst, &b, &cc("a"), h(2), &Truncation::Exact).unwrap_err();
    assert_eq!(err, Error::NotPrimary { mode: 1 });
}

#[test]
fn first_order_needs_near_identity() {
    let inst = presets::heisenberg(Scalar::zero());
    let b = inst.parse("b(-1) |0>").unwrap();
    let err = huang_check(&inst, &b, &cc("1, 1"), h(2), &Truncation::FirstOrder("e".into())).unwrap_err();
    assert!(matches!(err, Error::Unsupported(_)));
}

#[test]
fn infinitesimal_law() {
    let vir = presets::virasoro(s("c"));
    let w = vir.conformal_vector().unwrap().clone();
    for n in -1..=3 {
        let r = infinitesimal_action_check(&vir, &w, n, h(4)).unwrap();
        assert!(r.passed, "{}", r.summary());
    }
    let heis = presets::heisenberg(s("lambda"));
    let bb = heis.parse("b(-2) b(-1) |0>").unwrap();
    for n in 0..=2 {
        let r = infinitesimal_action_check(&heis, &bb, n, h(3)).unwrap();
        assert!(r.passed, "{}", r.summary());
    }
}

#[test]
fn requires_conformal_vector() {
    let inst = presets::commutative_va(&[("x", 1)]).unwrap();
    let x = inst.parse("x(-1) |0>").unwrap();
    assert_eq!(
        huang_check(&inst, &x, &cc("2"), h(2), &Truncation::Exact).unwrap_err(),
        Error::NotConformal
    );
}

#[test]
fn half_integral_degrees_need_unit_scaling() {
    let inst = presets::lattice(1).unwrap();
    let v = inst.generating_states().last().unwrap().clone();
    assert!(matches!(
        r_apply(&inst, &cc("2"), &v),
        Err(Error::NonIntegralDegree(_))
    ));
    assert_eq!(r_apply(&inst, &cc("1"), &v).unwrap(), v);
}

use super::*;
use crate::scalars::Rational;

fn q(a: i64, b: i64) -> Scalar {
    Scalar::from_ratio(a, b)
}

/// `L_0` acts as the degree and `L_{-1}` as `T` on every basis state up to `d`.
fn assert_conformal(inst: &AlgebraInstance, d: i64) {
    let fock = inst.fock();
    for m in fock.basis_up_to(Half::from_int(d)) {
        let v = State::from_monomial(m.clone());
        let l0 = inst.virasoro_mode(0, &v).unwrap();
        assert_eq!(l0, v.scale(&fock.degree(&m).to_scalar()), "L0 on {}", inst.render(&v));
        let lm1 = inst.virasoro_mode(-1, &v).unwrap();
        assert_eq!(lm1, inst.va().translation(&v), "L-1 on {}", inst.render(&v));
    }
    let omega = inst.conformal_vector().unwrap();
    let l2 = inst.virasoro_mode(2, omega).unwrap();
    let half_c = inst.central_charge().unwrap() * &q(1, 2);
    assert_eq!(l2, State::vacuum().scale(&half_c));
}

#[test]
fn heisenberg_basics() {
    let h = heisenberg(Scalar::param("lambda"));
    let s = h.parse("b(1) b(-1) |0>").unwrap();
    assert_eq!(s, State::vacuum());
    assert_eq!(h.central_charge().unwrap().to_string(), "-12*lambda^2+1");
    assert_conformal(&h, 4);
}

#[test]
fn virasoro_basics() {
    let v = virasoro(Scalar::param("c"));
    let s = v.parse("L(2) L(-2) v_c").unwrap();
    assert_eq!(s, State::vacuum().scale(&(Scalar::param("c") * q(1, 2))));
    assert_eq!(v.fock().graded_dim(Half::from_int(4)).unwrap(), 2);
    assert_eq!(v.fock().graded_dim(Half::from_int(1)).unwrap(), 0);
    assert_conformal(&v, 4);
}

#[test]
fn affine_sl2_level() {
    let a = affine(&LieData::sl2(), Scalar::param("k"));
    let s = a.parse("e(1) f(-1) v_k").unwrap();
    assert_eq!(s, State::vacuum().scale(&Scalar::param("k")));
    let k = Scalar::param("k");
    let expected = (&k * &Scalar::from_int(3)).checked_div(&(&k + &Scalar::from_int(2))).unwrap();
    assert_eq!(a.central_charge().unwrap(), &expected);
    // the degree-2 component: J J (6) plus J(-2) (3)
    assert_eq!(a.fock().graded_dim(Half::from_int(2)).unwrap(), 9);
    assert_conformal(&a, 3);
}

#[test]
fn affine_at_critical_level_has_no_sugawara() {
    let a = affine(&LieData::sl2(), Scalar::from_int(-2));
    assert!(a.conformal_vector().is_none());
    assert!(matches!(
        sugawara(&a, &LieData::sl2(), &Scalar::from_int(-2)),
        Err(Error::PoleAtPoint { .. })
    ));
}

#[test]
fn sugawara_specializes() {
    let a = affine(&LieData::sl2(), Scalar::param("k"));
    let at = a.specialize(&ParamPoint::new().with("k", Rational::from_integer(1.into()))).unwrap();
    assert_eq!(at.central_charge().unwrap(), &Scalar::one());
    let crit = a.specialize(&ParamPoint::new().with("k", Rational::from_integer((-2).into()))).unwrap();
    assert!(crit.conformal_vector().is_none());
    assert_eq!(crate::ope::center(crit.va(), Half::from_int(2)).len(), 1);
}

#[test]
fn fermion_basics() {
    let f = fermion();
    assert!(f.parse("psi(-1) psi(-1) |0>").unwrap().is_zero());
    assert_eq!(f.parse("psi(1) psi*(-1) |0>").unwrap(), State::vacuum());
    assert_eq!(f.fock().graded_dim(Half::ZERO).unwrap(), 2);
    assert_conformal(&f, 4);
}

#[test]
fn weyl_basics() {
    let w = weyl(1);
    assert_eq!(w.parse("a(1) a*(-1) |0>").unwrap(), State::vacuum());
    assert!(matches!(w.fock().graded_dim(Half::ZERO), Err(Error::InfiniteDimensional(_))));
    assert_conformal(&w, 3);
    let w2 = weyl(2);
    assert_eq!(w2.central_charge().unwrap(), &Scalar::from_int(4));
    assert_conformal(&w2, 2);
}

#[test]
fn lattice_basics() {
    let l = lattice(1).unwrap();
    assert_eq!(l.fock().graded_dim(Half::from_doubled(1)).unwrap(), 2);
    assert_conformal(&l, 3);
    let l2 = lattice(2).unwrap();
    assert_conformal(&l2, 3);
    assert!(lattice(0).is_err());
}

#[test]
fn lattice_vertex_leading_term() {
    let l = lattice(2).unwrap();
    // Y(1_1, z) 1_1 starts at z^{lambda mu N} = z^2 with 1_2
    let target = State::from_monomial(Monomial::sector_vacuum(1));
    let window = (0..4).map(Half::from_int);
    let coeffs = lattice_vertex_op(&l, 1, window, &target).unwrap();
    assert!(coeffs[0].1.is_zero() && coeffs[1].1.is_zero());
    assert_eq!(coeffs[2].1, State::from_monomial(Monomial::sector_vacuum(2)));
    let next = l.parse("h(-1) 1_{2,2}").unwrap();
    assert_eq!(coeffs[3].1, next);
}

#[test]
fn lattice_charge_zero_is_identity() {
    let l = lattice(1).unwrap();
    for m in l.fock().basis_up_to(Half::from_int(2)) {
        let v = State::from_monomial(m);
        let out = lattice_vertex_op(&l, 0, [Half::ZERO, Half::ONE], &v).unwrap();
        assert_eq!(out[0].1, v);
        assert!(out[1].1.is_zero());
    }
}

#[test]
fn commutative_modes_multiply() {
    let c = commutative_va(&[("x", 1)]).unwrap();
    let x = c.parse("x(-1) |0>").unwrap();
    let xx = c.va().mode_apply(&x, Half::from_int(-1), &x);
    assert_eq!(xx, c.parse("x(-1)^2 |0>").unwrap());
}

#[test]
fn preset_names() {
    for name in ["heisenberg", "virasoro", "affine:sl2", "fermion", "weyl:2", "lattice:3", "commutative"] {
        assert!(preset(name).is_ok(), "{name}");
    }
    for bad in ["affine:g2", "weyl:0", "lattice:x", "nope"] {
        assert!(preset(bad).is_err(), "{bad}");
    }
}

#[test]
fn boson_fermion_up_to_two() {
    let report = boson_fermion_check(Half::from_int(2));
    assert!(report.passed(), "{:?}", report.mismatch);
    assert!(report.intertwinings_checked > 0);
    let dims: Vec<usize> = report.dims.iter().map(|d| d.2).collect();
    // 1, 1_{+-1}, h(-1), h(-1) 1_{+-1}, h(-2) h(-1)^2 1_{+-2}
    assert_eq!(dims, vec![1, 2, 1, 2, 4]);
}

use super::*;
use crate::scalars::Scalar;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn h(n: i64) -> Half {
    Half::from_int(n)
}

/// Partitions of `n` into parts at least `min`, by direct recursion.
fn partitions(n: i64, min: i64) -> i64 {
    if n == 0 {
        return 1;
    }
    (min..=n).map(|p| partitions(n - p, p)).sum()
}

fn ints(s: &QSeries) -> Vec<i64> {
    s.integer_coeffs()
        .iter()
        .map(|c| c.to_integer().try_into().unwrap())
        .collect()
}

fn at_lambda_zero() -> ParamPoint {
    ParamPoint::new().with("lambda", Rational::zero())
}

#[test]
fn heisenberg_counts_partitions() {
    let inst = presets::heisenberg(Scalar::param("lambda"));
    let ch = character(&inst, 0, h(6), &at_lambda_zero()).unwrap();
    assert_eq!(ints(&ch), vec![1, 1, 2, 3, 5, 7, 11]);
    assert_eq!(ch.offset, q(-1, 24));
    assert_eq!(ch.to_string(), "q^{-1/24}(1 + q + 2q^2 + 3q^3 + 5q^4 + 7q^5 + 11q^6)");
}

#[test]
fn virasoro_counts_parts_at_least_two() {
    let inst = presets::virasoro(Scalar::param("c"));
    let p = ParamPoint::new().with("c", q(1, 2));
    let ch = character(&inst, 0, h(10), &p).unwrap();
    let oracle: Vec<i64> = (0..=10).map(|n| partitions(n, 2)).collect();
    assert_eq!(&oracle[..7], &[1, 0, 1, 1, 2, 2, 4]);
    assert_eq!(ints(&ch), oracle);
    assert_eq!(ch.offset, q(-1, 48));
}

#[test]
fn symbolic_central_charge_needs_a_value() {
    let inst = presets::virasoro(Scalar::param("c"));
    assert!(matches!(
        character(&inst, 0, h(2), &ParamPoint::new()),
        Err(Error::MissingParameter(_))
    ));
    let aff = presets::affine(&presets::LieData::sl2(), Scalar::param("k"));
    let crit = ParamPoint::new().with("k", q(-2, 1));
    assert!(matches!(character(&aff, 0, h(1), &crit), Err(Error::PoleAtPoint { .. })));
}

#[test]
fn lattice_sector_offset() {
    let inst = presets::lattice(1).unwrap();
    let ch = character(&inst, 1, h(3), &ParamPoint::new()).unwrap();
    // sector energy 1/2, shifted by -c/24 with c = 1
    assert_eq!(ch.offset, q(1, 2) - q(1, 24));
    assert_eq!(ch.coeff(Half::ZERO), q(1, 1));
    assert_eq!(ints(&ch), vec![1, 1, 2, 3]);
}

#[test]
fn theta_and_partition_pieces() {
    let t = theta_series(2, h(4));
    assert_eq!(
        (t.coeff(h(0)), t.coeff(h(1)), t.coeff(h(4))),
        (q(1, 1), q(2, 1), q(2, 1))
    );
    assert_eq!(t.coeffs.len(), 3);
    assert_eq!(ints(&partition_series(5)), vec![1, 1, 2, 3, 5, 7]);
}

#[test]
fn theta_character_is_the_sum_of_sectors() {
    for n in 1..=3 {
        let inst = presets::lattice(n).unwrap();
        let cutoff = h(4);
        let mut total: Option<QSeries> = None;
        for s in inst.fock().sectors_up_to(cutoff) {
            let e = inst.fock().sector_energy(s);
            let ch = character(&inst, s, cutoff - e, &ParamPoint::new()).unwrap();
            total = Some(match total {
                None => ch,
                Some(t) => t.add(&ch).unwrap(),
            });
        }
        let total = total.unwrap();
        let theta = lattice_theta_character(n, cutoff);
        assert_eq!(total.offset, q(-1, 24));
        assert_eq!(total.cutoff, cutoff);
        assert_eq!(total, theta, "N = {n}");
    }
}

#[test]
fn fermion_and_lattice_dimensions_agree() {
    let r = boson_fermion_character_check(8).unwrap();
    assert!(r.passed, "{:?}", r.rows);
    let head: Vec<(usize, usize)> = r.rows.iter().take(5).map(|(_, a, b)| (*a, *b)).collect();
    assert_eq!(head, vec![(1, 1), (2, 2), (1, 1), (2, 2), (4, 4)]);
    assert_eq!(r.rows.len(), 9);
}

#[test]
fn zero_weight_bosons_have_no_character() {
    let inst = presets::weyl(1);
    assert!(matches!(
        character(&inst, 0, h(2), &ParamPoint::new()),
        Err(Error::InfiniteDimensional(_))
    ));
}

#[test]
fn characters_match_graded_dimensions() {
    let point = ParamPoint::new()
        .with("lambda", q(1, 3))
        .with("c", q(1, 2))
        .with("k", q(1, 1));
    for name in ["heisenberg", "virasoro", "affine:sl2", "fermion", "lattice:1", "lattice:2", "commutative"] {
        let inst = presets::preset(name).unwrap();
        let top = if name.starts_with("affine") { 5 } else { 8 };
        let mut sum: Option<QSeries> = None;
        for s in inst.fock().sectors_up_to(h(top)) {
            let e = inst.fock().sector_energy(s);
            let ch = character(&inst, s, h(top) - e, &point).unwrap();
            sum = Some(match sum {
                None => ch,
                Some(t) => t.add(&ch).unwrap(),
            });
        }
        let sum = sum.unwrap();
        let mut d = Half::ZERO;
        while d <= h(top) {
            let dim = inst.fock().graded_dim(d).unwrap();
            let exponent = &sum.offset + d.to_rational();
            let got = sum.exponents().get(&exponent).cloned().unwrap_or_else(Rational::zero);
            assert_eq!(got, Rational::from_integer(dim.into()), "{name} at degree {d}");
            d += Half::from_doubled(1);
        }
    }
}

#[test]
fn rendering_and_json() {
    let mut s = QSeries::new(Rational::zero(), h(3));
    s.add_term(Half::ZERO, q(1, 1));
    s.add_term(Half::from_doubled(1), q(-2, 1));
    s.add_term(h(3), q(1, 2));
    assert_eq!(s.to_string(), "1 - 2q^{1/2} + (1/2)q^3");
    let j = s.to_json();
    assert_eq!(j["coefficients"][1]["exponent"], "1/2");
    assert_eq!(j["coefficients"][1]["coefficient"], "-2");
    s.add_term(h(4), q(1, 1));
    assert_eq!(s.coeffs.len(), 3);
}

#[test]
fn offsets_must_line_up() {
    let a = QSeries::new(q(1, 3), h(2));
    let mut b = QSeries::new(Rational::zero(), h(2));
    b.add_term(Half::ZERO, q(1, 1));
    assert!(a.add(&b).is_err());
    assert_ne!(a, b);
    let mut c = QSeries::new(q(-1, 1), h(3));
    c.add_term(h(1), q(1, 1));
    assert_eq!(b, c);
}

proptest! {
    #[test]
    fn product_formula_matches_recursion(n in 0i64..25) {
        let p = partition_series(n);
        prop_assert_eq!(p.coeff(h(n)), Rational::from_integer(partitions(n, 1).into()));
    }

    #[test]
    fn multiplication_by_one_is_identity(coeffs in proptest::collection::vec(-5i64..5, 1..8)) {
        let mut s = QSeries::new(q(1, 2), h(coeffs.len() as i64));
        for (k, c) in coeffs.iter().enumerate() {
            s.add_term(h(k as i64), q(*c, 1));
        }
        let mut one = QSeries::new(Rational::zero(), h(20));
        one.add_term(Half::ZERO, q(1, 1));
        prop_assert_eq!(s.mul(&one), s);
    }
}

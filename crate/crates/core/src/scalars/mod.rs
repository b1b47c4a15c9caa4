//! Exact scalars: rationals and rational functions in named parameters.

pub(crate) mod parse;
mod poly;
mod scalar;

pub use num_rational::BigRational as Rational;
pub use parse::parse_scalar;
pub use poly::{Monom, Poly};
pub use scalar::{ParamPoint, Scalar};

/// Generalized binomial coefficient `r choose j` for integer `r`.
pub fn binomial(r: i64, j: i64) -> Rational {
    binomial_q(&Rational::from_integer(r.into()), j)
}

/// Generalized binomial coefficient `r choose j` for rational `r`.
pub fn binomial_q(r: &Rational, j: i64) -> Rational {
    use num_traits::{One, Zero};
    if j < 0 {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for i in 0..j {
        let top = r - Rational::from_integer(i.into());
        acc = acc * top / Rational::from_integer((i + 1).into());
    }
    acc
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn small_poly() -> impl Strategy<Value = Poly> {
        prop::collection::vec((-3i64..=3, 0u32..=2, 0u32..=2), 1..4).prop_map(|terms| {
            Poly::from_terms(terms.into_iter().map(|(c, a, b)| {
                let m = Monom::from_pairs([("a".into(), a), ("b".into(), b)]);
                (m, Rational::from_integer(c.into()))
            }))
        })
    }

    fn small_scalar() -> impl Strategy<Value = Scalar> {
        (small_poly(), small_poly())
            .prop_filter("nonzero denominator", |(_, d)| !d.is_zero())
            .prop_map(|(n, d)| Scalar::from_fraction(n, d).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn field_axioms(a in small_scalar(), b in small_scalar(), c in small_scalar()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            if !a.is_zero() {
                prop_assert_eq!(a.checked_div(&a).unwrap(), Scalar::one());
            }
        }

        #[test]
        fn evaluation_is_multiplicative(a in small_scalar(), b in small_scalar(), x in -3i64..=3, y in -3i64..=3) {
            let p = ParamPoint::new()
                .with("a", Rational::from_integer(x.into()))
                .with("b", Rational::from_integer(y.into()));
            if let (Ok(ea), Ok(eb)) = (a.evaluate(&p), b.evaluate(&p)) {
                prop_assert_eq!((&a * &b).evaluate(&p).unwrap(), ea * eb);
            }
        }

        #[test]
        fn render_parse_roundtrip(a in small_scalar()) {
            let back: Scalar = a.to_string().parse().unwrap();
            prop_assert_eq!(back, a);
        }
    }
}

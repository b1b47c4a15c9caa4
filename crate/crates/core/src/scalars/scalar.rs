use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::poly::Poly;
use super::Rational;
use crate::error::{Error, Result};

/// An exact rational function in named parameters over `Q`.
///
/// Canonical form: numerator and denominator are coprime and the
/// denominator is monic. Constants are stored directly as rationals, which
/// keeps the common all-numeric case cheap.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

#[derive(Clone, PartialEq, Eq, Hash)]
enum Repr {
    Num(Rational),
    Frac { num: Poly, den: Poly },
}

impl Scalar {
    pub fn zero() -> Scalar {
        Scalar(Repr::Num(Rational::zero()))
    }

    pub fn one() -> Scalar {
        Scalar(Repr::Num(Rational::one()))
    }

    pub fn from_int(n: i64) -> Scalar {
        Scalar(Repr::Num(Rational::from_integer(n.into())))
    }

    pub fn from_ratio(n: i64, d: i64) -> Scalar {
        Scalar(Repr::Num(Rational::new(n.into(), d.into())))
    }

    pub fn from_rational(r: Rational) -> Scalar {
        Scalar(Repr::Num(r))
    }

    pub fn param(name: &str) -> Scalar {
        Scalar(Repr::Frac {
            num: Poly::var(name),
            den: Poly::one(),
        })
    }

    pub fn from_poly(p: Poly) -> Scalar {
        match p.as_constant() {
            Some(c) => Scalar(Repr::Num(c)),
            None => Scalar(Repr::Frac {
                num: p,
                den: Poly::one(),
            }),
        }
    }

    /// Build `num/den` in canonical form.
    pub fn from_fraction(num: Poly, den: Poly) -> Result<Scalar> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Scalar::zero());
        }
        if let Some(c) = den.as_constant() {
            return Ok(Scalar::from_poly(num.scale(&c.recip())));
        }
        let g = Poly::gcd(&num, &den);
        let (mut num, mut den) = if g.is_one() {
            (num, den)
        } else {
            (
                num.div_exact(&g).expect("gcd divides"),
                den.div_exact(&g).expect("gcd divides"),
            )
        };
        let lc = den.leading().expect("nonzero").1.clone();
        if !lc.is_one() {
            let inv = lc.recip();
            num = num.scale(&inv);
            den = den.scale(&inv);
        }
        if let Some(c) = den.as_constant() {
            return Ok(Scalar::from_poly(num.scale(&c.recip())));
        }
        Ok(Scalar(Repr::Frac { num, den }))
    }

    pub fn numerator(&self) -> Poly {
        match &self.0 {
            Repr::Num(r) => Poly::constant(r.clone()),
            Repr::Frac { num, .. } => num.clone(),
        }
    }

    pub fn denominator(&self) -> Poly {
        match &self.0 {
            Repr::Num(_) => Poly::one(),
            Repr::Frac { den, .. } => den.clone(),
        }
    }

    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.0 {
            Repr::Num(r) => Some(r),
            Repr::Frac { .. } => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Num(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Num(r) if r.is_one())
    }

    /// Names of parameters occurring in the scalar.
    pub fn params(&self) -> Vec<String> {
        match &self.0 {
            Repr::Num(_) => Vec::new(),
            Repr::Frac { num, den } => {
                let mut v = num.vars();
                v.extend(den.vars());
                v.into_iter().map(|s| s.to_string()).collect()
            }
        }
    }

    pub fn checked_div(&self, other: &Scalar) -> Result<Scalar> {
        match (&self.0, &other.0) {
            (_, Repr::Num(b)) if b.is_zero() => Err(Error::DivisionByZero),
            (Repr::Num(a), Repr::Num(b)) => Ok(Scalar(Repr::Num(a / b))),
            _ => Scalar::from_fraction(
                self.numerator().mul(&other.denominator()),
                self.denominator().mul(&other.numerator()),
            ),
        }
    }

    pub fn inv(&self) -> Result<Scalar> {
        Scalar::one().checked_div(self)
    }

    pub fn pow(&self, e: i64) -> Result<Scalar> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let mut acc = Scalar::one();
        for _ in 0..e.unsigned_abs() {
            acc = &acc * &base;
        }
        Ok(acc)
    }

    pub fn evaluate(&self, point: &ParamPoint) -> Result<Rational> {
        match &self.0 {
            Repr::Num(r) => Ok(r.clone()),
            Repr::Frac { num, den } => {
                let lookup = |v: &str| point.get(v).cloned();
                let missing = |v: std::sync::Arc<str>| Error::MissingParameter(v.to_string());
                let d = den.evaluate(lookup).map_err(missing)?;
                if d.is_zero() {
                    return Err(Error::PoleAtPoint {
                        denominator: den.to_string(),
                    });
                }
                let n = num.evaluate(lookup).map_err(missing)?;
                Ok(n / d)
            }
        }
    }

    /// Substitute the parameters assigned in `point`, keeping the rest
    /// symbolic.
    pub fn specialize(&self, point: &ParamPoint) -> Result<Scalar> {
        match &self.0 {
            Repr::Num(_) => Ok(self.clone()),
            Repr::Frac { num, den } => {
                let mut n = num.clone();
                let mut d = den.clone();
                for (name, value) in point.iter() {
                    let v = Poly::constant(value.clone());
                    n = n.substitute(name, &v);
                    d = d.substitute(name, &v);
                }
                if d.is_zero() {
                    return Err(Error::PoleAtPoint {
                        denominator: den.to_string(),
                    });
                }
                Scalar::from_fraction(n, d)
            }
        }
    }

    /// Partial derivative with respect to a parameter.
    pub fn derivative(&self, var: &str) -> Scalar {
        match &self.0 {
            Repr::Num(_) => Scalar::zero(),
            Repr::Frac { num, den } => {
                let n = num.derivative(var).mul(den).sub(&num.mul(&den.derivative(var)));
                Scalar::from_fraction(n, den.mul(den)).expect("nonzero denominator")
            }
        }
    }

    /// Substitute `var := value` where `value` is itself a scalar.
    pub fn substitute(&self, var: &str, value: &Scalar) -> Result<Scalar> {
        match &self.0 {
            Repr::Num(_) => Ok(self.clone()),
            Repr::Frac { num, den } => {
                let eval = |p: &Poly| -> Scalar {
                    let mut acc = Scalar::zero();
                    for c in p.coeffs_in(var).iter().rev() {
                        acc = &(&acc * value) + &Scalar::from_poly(c.clone());
                    }
                    acc
                };
                eval(num).checked_div(&eval(den))
            }
        }
    }
}

impl Scalar {
    /// Taylor expansion in `var` modulo `var^order`. Fails with
    /// `PoleAtPoint` when the denominator vanishes at `var = 0`.
    pub fn truncate_in(&self, var: &str, order: usize) -> Result<Scalar> {
        let Repr::Frac { num, den } = &self.0 else {
            return Ok(if order == 0 { Scalar::zero() } else { self.clone() });
        };
        let n = num.coeffs_in(var);
        let d = den.coeffs_in(var);
        let d0 = Scalar::from_poly(d[0].clone());
        if d0.is_zero() {
            return Err(Error::PoleAtPoint {
                denominator: den.to_string(),
            });
        }
        let mut q: Vec<Scalar> = Vec::with_capacity(order);
        for i in 0..order {
            let mut acc = n.get(i).cloned().map(Scalar::from_poly).unwrap_or_default();
            for j in 1..=i.min(d.len() - 1) {
                acc -= &(&Scalar::from_poly(d[j].clone()) * &q[i - j]);
            }
            q.push(acc.checked_div(&d0)?);
        }
        let x = Scalar::param(var);
        let mut out = Scalar::zero();
        for c in q.iter().rev() {
            out = &(&out * &x) + c;
        }
        Ok(out)
    }
}

impl Default for Scalar {
    fn default() -> Scalar {
        Scalar::zero()
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Scalar {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Scalar {
        Scalar::from_rational(r)
    }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        match (&self.0, &o.0) {
            (Repr::Num(a), Repr::Num(b)) => Scalar(Repr::Num(a + b)),
            (Repr::Num(a), Repr::Frac { num, den }) | (Repr::Frac { num, den }, Repr::Num(a)) => {
                Scalar::from_fraction(num.add(&den.scale(a)), den.clone()).expect("nonzero")
            }
            (Repr::Frac { num: na, den: da }, Repr::Frac { num: nb, den: db }) => {
                if da == db {
                    Scalar::from_fraction(na.add(nb), da.clone()).expect("nonzero")
                } else {
                    Scalar::from_fraction(na.mul(db).add(&nb.mul(da)), da.mul(db))
                        .expect("nonzero")
                }
            }
        }
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        self + &(-o)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match &self.0 {
            Repr::Num(a) => Scalar(Repr::Num(-a)),
            Repr::Frac { num, den } => Scalar(Repr::Frac {
                num: num.neg(),
                den: den.clone(),
            }),
        }
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        match (&self.0, &o.0) {
            (Repr::Num(a), Repr::Num(b)) => Scalar(Repr::Num(a * b)),
            (Repr::Num(a), Repr::Frac { num, den }) | (Repr::Frac { num, den }, Repr::Num(a)) => {
                if a.is_zero() {
                    Scalar::zero()
                } else {
                    Scalar(Repr::Frac {
                        num: num.scale(a),
                        den: den.clone(),
                    })
                }
            }
            (Repr::Frac { num: na, den: da }, Repr::Frac { num: nb, den: db }) => {
                Scalar::from_fraction(na.mul(nb), da.mul(db)).expect("nonzero")
            }
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Scalar {
            type Output = Scalar;
            fn $m(self, o: Scalar) -> Scalar {
                (&self).$m(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, o: &Scalar) -> Scalar {
                (&self).$m(o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        *self = &*self - o;
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

/// `k` or `a^2`: safe to the right of `/` without parentheses.
fn is_power_of_variable(text: &str) -> bool {
    let (base, exp) = text.split_once('^').unwrap_or((text, "1"));
    base.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
        && base.chars().all(|c| c.is_alphanumeric() || c == '_')
        && exp.chars().all(|c| c.is_ascii_digit())
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Num(r) => write!(f, "{r}"),
            Repr::Frac { num, den } if den.is_one() => write!(f, "{num}"),
            Repr::Frac { num, den } => {
                let n = num.to_string();
                let d = den.to_string();
                if num.terms().len() == 1 && !n.contains('/') {
                    write!(f, "{n}/")?;
                } else {
                    write!(f, "({n})/")?;
                }
                if is_power_of_variable(&d) {
                    write!(f, "{d}")
                } else {
                    write!(f, "({d})")
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Scalar {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scalar> {
        super::parse::parse_scalar(s)
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Exact values for a set of named parameters.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ParamPoint(BTreeMap<String, Rational>);

impl ParamPoint {
    pub fn new() -> ParamPoint {
        ParamPoint::default()
    }

    pub fn with(mut self, name: &str, value: Rational) -> ParamPoint {
        self.0.insert(name.to_string(), value);
        self
    }

    pub fn insert(&mut self, name: &str, value: Rational) {
        self.0.insert(name.to_string(), value);
    }

    pub fn get(&self, name: &str) -> Option<&Rational> {
        self.0.get(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rational)> {
        self.0.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Parse an assignment such as `k=-2` or `lambda=1/2` and add it.
    pub fn parse_assignment(&mut self, text: &str) -> Result<()> {
        let (name, value) = text.split_once('=').ok_or_else(|| Error::Parse {
            pos: 0,
            msg: format!("expected name=value in `{text}`"),
        })?;
        let v: Scalar = value.trim().parse()?;
        let r = v.as_rational().cloned().ok_or_else(|| Error::Parse {
            pos: name.len() + 1,
            msg: "parameter value must be a rational number".into(),
        })?;
        self.insert(name.trim(), r);
        Ok(())
    }
}

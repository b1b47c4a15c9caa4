use std::fmt;

use crate::error::{Error, Result};
use crate::fock::{GenId, ModeAlgebra, State};
use crate::half::Half;
use crate::scalars::{Rational, Scalar};

/// A field built from generator fields by derivatives and normally ordered
/// products.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FieldExpr {
    Identity,
    Generator(GenId),
    Derivative(Box<FieldExpr>, u32),
    NormOrd(Box<FieldExpr>, Box<FieldExpr>),
}

impl FieldExpr {
    pub fn weight(&self, alg: &ModeAlgebra) -> Half {
        match self {
            FieldExpr::Identity => Half::ZERO,
            FieldExpr::Generator(g) => alg.weight(*g),
            FieldExpr::Derivative(e, m) => e.weight(alg) + Half::from_int(*m as i64),
            FieldExpr::NormOrd(a, b) => a.weight(alg) + b.weight(alg),
        }
    }

    pub fn display<'a>(&'a self, alg: &'a ModeAlgebra) -> impl fmt::Display + 'a {
        Shown { e: self, alg }
    }
}

struct Shown<'a> {
    e: &'a FieldExpr,
    alg: &'a ModeAlgebra,
}

impl fmt::Display for Shown<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.e {
            FieldExpr::Identity => write!(f, "Id"),
            FieldExpr::Generator(g) => write!(f, "{}(z)", self.alg.generator(*g).name),
            FieldExpr::Derivative(e, m) => {
                let inner = Shown { e, alg: self.alg };
                match m {
                    1 => write!(f, "(∂{inner})"),
                    _ => write!(f, "(∂^{m}{inner})"),
                }
            }
            FieldExpr::NormOrd(..) => {
                write!(f, ":")?;
                let mut cur = self.e;
                let mut first = true;
                while let FieldExpr::NormOrd(a, b) = cur {
                    if !first {
                        write!(f, " ")?;
                    }
                    write!(f, "{}", Shown { e: a, alg: self.alg })?;
                    first = false;
                    cur = b;
                }
                write!(f, " {}:", Shown { e: cur, alg: self.alg })
            }
        }
    }
}

/// A linear combination of field expressions.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FieldSum(pub Vec<(Scalar, FieldExpr)>);

impl FieldSum {
    pub fn render(&self, alg: &ModeAlgebra) -> String {
        if self.0.is_empty() {
            return "0".into();
        }
        self.0
            .iter()
            .map(|(c, e)| {
                if c.is_one() {
                    e.display(alg).to_string()
                } else if c.as_rational().is_some() {
                    format!("{c} {}", e.display(alg))
                } else {
                    format!("({c}) {}", e.display(alg))
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

pub(super) fn field_of_state(alg: &ModeAlgebra, a: &State) -> Result<FieldSum> {
    let mut out = Vec::new();
    for (m, c) in a.iter() {
        if m.sector != 0 {
            return Err(Error::UnsupportedSector);
        }
        let mut expr = FieldExpr::Identity;
        let mut coeff = c.clone();
        for x in m.word.iter().rev() {
            let j = (-x.n - alg.weight(x.gen)).to_int().expect("creation mode");
            let mut factor = FieldExpr::Generator(x.gen);
            if j > 0 {
                factor = FieldExpr::Derivative(Box::new(factor), j as u32);
                coeff = &coeff * &Scalar::from_rational(Rational::from_integer(factorial(j).into()).recip());
            }
            expr = match expr {
                FieldExpr::Identity => factor,
                rest => FieldExpr::NormOrd(Box::new(factor), Box::new(rest)),
            };
        }
        out.push((coeff, expr));
    }
    Ok(FieldSum(out))
}

fn factorial(j: i64) -> i64 {
    (1..=j).product()
}

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// A power product of named variables, kept sorted by name with positive
/// exponents.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Monom(Vec<(Arc<str>, u32)>);

impl Monom {
    pub fn one() -> Monom {
        Monom(Vec::new())
    }

    pub fn var(name: &str) -> Monom {
        Monom(vec![(Arc::from(name), 1)])
    }

    pub fn from_pairs<I: IntoIterator<Item = (Arc<str>, u32)>>(pairs: I) -> Monom {
        let mut map: BTreeMap<Arc<str>, u32> = BTreeMap::new();
        for (v, e) in pairs {
            *map.entry(v).or_default() += e;
        }
        Monom(map.into_iter().filter(|(_, e)| *e > 0).collect())
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0
            .iter()
            .find(|(v, _)| &**v == var)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn pairs(&self) -> &[(Arc<str>, u32)] {
        &self.0
    }

    pub fn mul(&self, other: &Monom) -> Monom {
        let mut out = Vec::with_capacity(self.0.len() + other.0.len());
        let (mut i, mut j) = (0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                Ordering::Less => {
                    out.push(self.0[i].clone());
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(other.0[j].clone());
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((self.0[i].0.clone(), self.0[i].1 + other.0[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.0[i..]);
        out.extend_from_slice(&other.0[j..]);
        Monom(out)
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monom) -> Option<Monom> {
        let mut out = Vec::with_capacity(self.0.len());
        let mut j = 0;
        for (v, e) in &self.0 {
            if j < other.0.len() && other.0[j].0 < *v {
                return None;
            }
            if j < other.0.len() && other.0[j].0 == *v {
                let f = other.0[j].1;
                j += 1;
                match e.cmp(&f) {
                    Ordering::Less => return None,
                    Ordering::Equal => {}
                    Ordering::Greater => out.push((v.clone(), e - f)),
                }
            } else {
                out.push((v.clone(), *e));
            }
        }
        (j == other.0.len()).then_some(Monom(out))
    }

    /// Drop `var` from the monomial.
    fn without(&self, var: &str) -> Monom {
        Monom(self.0.iter().filter(|(v, _)| &**v != var).cloned().collect())
    }

    fn with_exponent(&self, var: &str, e: u32) -> Monom {
        let mut m = self.without(var);
        if e > 0 {
            m = m.mul(&Monom(vec![(Arc::from(var), e)]));
        }
        m
    }
}

/// Graded lexicographic order; variables compare alphabetically, so `a`
/// outranks `b` at equal total degree.
impl Ord for Monom {
    fn cmp(&self, other: &Monom) -> Ordering {
        match self.degree().cmp(&other.degree()) {
            Ordering::Equal => {}
            o => return o,
        }
        let (mut i, mut j) = (0, 0);
        loop {
            match (self.0.get(i), other.0.get(j)) {
                (None, None) => return Ordering::Equal,
                (Some(_), None) => return Ordering::Greater,
                (None, Some(_)) => return Ordering::Less,
                (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                    Ordering::Less => return Ordering::Greater,
                    Ordering::Greater => return Ordering::Less,
                    Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        i += 1;
                        j += 1;
                    }
                },
            }
        }
    }
}

impl PartialOrd for Monom {
    fn partial_cmp(&self, other: &Monom) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Monom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, (v, e)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            if *e == 1 {
                write!(f, "{v}")?;
            } else {
                write!(f, "{v}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Multivariate polynomial with exact rational coefficients. Terms are kept
/// in strictly decreasing monomial order with no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct Poly {
    terms: Vec<(Monom, Rational)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monom::one(), c)],
            }
        }
    }

    pub fn var(name: &str) -> Poly {
        Poly {
            terms: vec![(Monom::var(name), Rational::one())],
        }
    }

    pub fn monomial(m: Monom, c: Rational) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { terms: vec![(m, c)] }
        }
    }

    pub fn from_terms<I: IntoIterator<Item = (Monom, Rational)>>(it: I) -> Poly {
        let mut map: BTreeMap<Monom, Rational> = BTreeMap::new();
        for (m, c) in it {
            let e = map.entry(m).or_insert_with(Rational::zero);
            *e += c;
        }
        Poly {
            terms: map.into_iter().rev().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn terms(&self) -> &[(Monom, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0.is_one() && self.terms[0].1.is_one()
    }

    /// The value of a constant polynomial (zero included).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn leading(&self) -> Option<&(Monom, Rational)> {
        self.terms.first()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    pub fn vars(&self) -> BTreeSet<Arc<str>> {
        self.terms
            .iter()
            .flat_map(|(m, _)| m.pairs().iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Poly {
        if k.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), c * k)).collect(),
        }
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut out = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Greater => {
                    out.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Less => {
                    out.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let s = ca + cb;
                    if !s.is_zero() {
                        out.push((ma.clone(), s));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&self.terms[i..]);
        out.extend_from_slice(&other.terms[j..]);
        Poly { terms: out }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        Poly::from_terms(self.terms.iter().flat_map(|(ma, ca)| {
            other.terms.iter().map(move |(mb, cb)| (ma.mul(mb), ca * cb))
        }))
    }

    pub fn mul_monom(&self, m: &Monom, c: &Rational) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(a, k)| (a.mul(m), k * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &Poly) -> Option<Poly> {
        let (dm, dc) = d.leading()?;
        if let Some(c) = d.as_constant() {
            return Some(self.scale(&c.recip()));
        }
        let mut r = self.clone();
        let mut q = Vec::new();
        while let Some((rm, rc)) = r.leading().cloned() {
            let m = rm.div(dm)?;
            let c = rc / dc;
            r = r.sub(&d.mul_monom(&m, &c));
            q.push((m, c));
        }
        Some(Poly::from_terms(q))
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms.iter().map(|(m, _)| m.exponent(var)).max().unwrap_or(0)
    }

    /// Coefficients of `self` viewed as a polynomial in `var`; entry `i`
    /// multiplies `var^i`.
    pub fn coeffs_in(&self, var: &str) -> Vec<Poly> {
        let d = self.degree_in(var) as usize;
        let mut buckets: Vec<Vec<(Monom, Rational)>> = vec![Vec::new(); d + 1];
        for (m, c) in &self.terms {
            buckets[m.exponent(var) as usize].push((m.without(var), c.clone()));
        }
        buckets.into_iter().map(Poly::from_terms).collect()
    }

    pub fn from_coeffs_in(var: &str, coeffs: &[Poly]) -> Poly {
        Poly::from_terms(coeffs.iter().enumerate().flat_map(|(i, p)| {
            p.terms
                .iter()
                .map(move |(m, c)| (m.with_exponent(var, i as u32), c.clone()))
        }))
    }

    pub fn derivative(&self, var: &str) -> Poly {
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            let e = m.exponent(var);
            (e > 0).then(|| (m.with_exponent(var, e - 1), c * Rational::from_integer(e.into())))
        }))
    }

    /// Substitute `var := value`.
    pub fn substitute(&self, var: &str, value: &Poly) -> Poly {
        let coeffs = self.coeffs_in(var);
        let mut acc = Poly::zero();
        for c in coeffs.iter().rev() {
            acc = acc.mul(value).add(c);
        }
        acc
    }

    /// Evaluate with every variable assigned; `lookup` returns `None` for a
    /// missing variable, whose name is then reported.
    pub fn evaluate<F>(&self, lookup: F) -> Result<Rational, Arc<str>>
    where
        F: Fn(&str) -> Option<Rational>,
    {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in m.pairs() {
                let x = lookup(v).ok_or_else(|| v.clone())?;
                t *= num_traits::pow(x, *e as usize);
            }
            total += t;
        }
        Ok(total)
    }

    /// Divide by the leading coefficient.
    pub fn monic(&self) -> Poly {
        match self.leading() {
            None => Poly::zero(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    /// Greatest common divisor, normalized to be monic.
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        if a.as_constant().is_some() || b.as_constant().is_some() {
            return Poly::one();
        }
        if a == b {
            return a.monic();
        }
        let mut vars = a.vars();
        vars.extend(b.vars());
        let x = vars.iter().next().expect("non-constant").clone();
        let x = &*x;
        let (da, db) = (a.degree_in(x), b.degree_in(x));
        if da == 0 {
            return Poly::gcd(a, &b.content_in(x));
        }
        if db == 0 {
            return Poly::gcd(&a.content_in(x), b);
        }
        let (ca, cb) = (a.content_in(x), b.content_in(x));
        let pa = a.div_exact(&ca).expect("content divides");
        let pb = b.div_exact(&cb).expect("content divides");
        let content = Poly::gcd(&ca, &cb);
        let (pa, pb) = (pa.integer_primitive().1, pb.integer_primitive().1);
        let (mut f, mut g) = if da >= db { (pa, pb) } else { (pb, pa) };
        loop {
            let r = f.prem(&g, x);
            if r.is_zero() {
                break;
            }
            if r.degree_in(x) == 0 {
                g = Poly::one();
                break;
            }
            f = g;
            g = r.primitive_in(x).integer_primitive().1;
        }
        content.mul(&g.primitive_in(x)).monic()
    }

    fn content_in(&self, x: &str) -> Poly {
        self.coeffs_in(x)
            .iter()
            .fold(Poly::zero(), |acc, c| Poly::gcd(&acc, c))
    }

    fn primitive_in(&self, x: &str) -> Poly {
        let c = self.content_in(x);
        self.div_exact(&c).expect("content divides")
    }

    /// Pseudo-remainder of `self` by `g` with respect to `x`.
    fn prem(&self, g: &Poly, x: &str) -> Poly {
        let dg = g.degree_in(x);
        let lg = g.coeffs_in(x).pop().expect("nonzero");
        let mut r = self.clone();
        while !r.is_zero() && r.degree_in(x) >= dg {
            let dr = r.degree_in(x);
            let lr = r.coeffs_in(x).pop().expect("nonzero");
            let shift = Poly::monomial(Monom::var(x), Rational::one()).pow(dr - dg);
            r = r.mul(&lg).sub(&lr.mul(&shift).mul(g));
        }
        r
    }

    /// Clear denominators: the result has integer coefficients with unit
    /// content, returned together with the factor removed.
    pub fn integer_primitive(&self) -> (Rational, Poly) {
        if self.is_zero() {
            return (Rational::one(), Poly::zero());
        }
        let mut lcm = BigInt::one();
        for (_, c) in &self.terms {
            lcm = num_integer::Integer::lcm(&lcm, c.denom());
        }
        let mut g = BigInt::zero();
        for (_, c) in &self.terms {
            let n = c.numer() * (&lcm / c.denom());
            g = num_integer::Integer::gcd(&g, &n);
        }
        if self.terms[0].1.is_negative() {
            g = -g;
        }
        let factor = Rational::new(g, lcm);
        (factor.clone(), self.scale(&factor.recip()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { "-" } else { "+" })?;
            }
            let a = c.abs();
            if m.is_one() {
                write!(f, "{a}")?;
            } else if a.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{a}*{m}")?;
            }
        }
        Ok(())
    }
}

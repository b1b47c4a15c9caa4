//! Graded characters `Tr q^{L_0 - c/24}` as truncated q-series.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fock::Monomial;
use crate::half::Half;
use crate::presets::{self, fermion_lattice_degree, AlgebraInstance};
use crate::scalars::{ParamPoint, Rational};

/// `sum_k coeffs[k] q^{offset + k}` for `0 <= k <= cutoff`, with `k` on the
/// half-integer grid. Zero coefficients are not stored.
#[derive(Clone, Debug)]
pub struct QSeries {
    pub offset: Rational,
    pub coeffs: BTreeMap<Half, Rational>,
    pub cutoff: Half,
}

impl QSeries {
    pub fn new(offset: Rational, cutoff: Half) -> QSeries {
        QSeries {
            offset,
            coeffs: BTreeMap::new(),
            cutoff,
        }
    }

    /// Coefficient of `q^{offset + k}`.
    pub fn coeff(&self, k: Half) -> Rational {
        self.coeffs.get(&k).cloned().unwrap_or_else(Rational::zero)
    }

    /// Coefficients at `k = 0, 1, ..., cutoff` (integer steps).
    pub fn integer_coeffs(&self) -> Vec<Rational> {
        (0..=self.cutoff.floor()).map(|k| self.coeff(Half::from_int(k))).collect()
    }

    pub fn add_term(&mut self, k: Half, c: Rational) {
        if k > self.cutoff || c.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(Rational::zero);
        *e += c;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// Shift in exponent from `self.offset` to `other.offset`, if it lies on
    /// the half-integer grid.
    fn shift_to(&self, other: &QSeries) -> Option<Half> {
        let d = (&other.offset - &self.offset) * Rational::from_integer(2.into());
        d.is_integer().then(|| Half::from_doubled(d.to_integer().try_into().unwrap_or(i64::MAX)))
    }

    /// Sum on the common grid; the result keeps the lower offset and the
    /// smaller absolute cutoff.
    pub fn add(&self, other: &QSeries) -> Result<QSeries> {
        let (lo, hi) = if self.offset <= other.offset { (self, other) } else { (other, self) };
        let shift = lo
            .shift_to(hi)
            .ok_or_else(|| Error::Unsupported(format!("offsets {} and {} are incommensurate", lo.offset, hi.offset)))?;
        let mut out = QSeries::new(lo.offset.clone(), lo.cutoff.min(hi.cutoff + shift));
        for (k, c) in lo.coeffs.iter() {
            out.add_term(*k, c.clone());
        }
        for (k, c) in hi.coeffs.iter() {
            out.add_term(*k + shift, c.clone());
        }
        Ok(out)
    }

    /// Product; offsets add and the cutoff is the smaller one.
    pub fn mul(&self, other: &QSeries) -> QSeries {
        let mut out = QSeries::new(&self.offset + &other.offset, self.cutoff.min(other.cutoff));
        for (a, x) in &self.coeffs {
            for (b, y) in &other.coeffs {
                out.add_term(*a + *b, x * y);
            }
        }
        out
    }

    /// `(absolute exponent, coefficient)` pairs.
    pub fn exponents(&self) -> BTreeMap<Rational, Rational> {
        self.coeffs
            .iter()
            .map(|(k, c)| (&self.offset + k.to_rational(), c.clone()))
            .collect()
    }

    pub fn to_json(&self) -> Value {
        let table: Vec<Value> = self
            .coeffs
            .iter()
            .map(|(k, c)| json!({"exponent": k.to_string(), "coefficient": c.to_string()}))
            .collect();
        json!({"offset": self.offset.to_string(), "cutoff": self.cutoff.to_string(), "coefficients": table})
    }
}

/// Equal when the absolute exponents agree up to the smaller cutoff.
impl PartialEq for QSeries {
    fn eq(&self, other: &QSeries) -> bool {
        let (lo, hi) = if self.offset <= other.offset { (self, other) } else { (other, self) };
        let Some(shift) = lo.shift_to(hi) else {
            return lo.coeffs.is_empty() && hi.coeffs.is_empty();
        };
        let top = lo.cutoff.min(hi.cutoff + shift);
        let a = lo.coeffs.iter().filter(|(k, _)| **k <= top).map(|(k, c)| (*k, c));
        let b = hi
            .coeffs
            .iter()
            .map(|(k, c)| (*k + shift, c))
            .filter(|(k, _)| *k <= top);
        a.eq(b)
    }
}

fn power(k: Half) -> String {
    match k.to_int() {
        Some(1) => "q".into(),
        _ => format!("q^{}", braced(&k.to_string())),
    }
}

fn braced(s: &str) -> String {
    if s.len() == 1 {
        s.to_string()
    } else {
        format!("{{{s}}}")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut body = String::new();
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            let neg = c.is_negative();
            let a = c.abs();
            if i == 0 {
                body.push_str(if neg { "-" } else { "" });
            } else {
                body.push_str(if neg { " - " } else { " + " });
            }
            let term = if *k == Half::ZERO {
                a.to_string()
            } else if a.is_one() {
                power(*k)
            } else if a.is_integer() {
                format!("{a}{}", power(*k))
            } else {
                format!("({a}){}", power(*k))
            };
            body.push_str(&term);
        }
        if body.is_empty() {
            body.push('0');
        }
        if self.offset.is_zero() {
            write!(f, "{body}")
        } else {
            write!(f, "q^{}({body})", braced(&self.offset.to_string()))
        }
    }
}

fn zero_weight_boson(inst: &AlgebraInstance) -> Option<String> {
    inst.algebra()
        .generators()
        .iter()
        .find(|g| g.weight == Half::ZERO && !g.parity.is_odd())
        .map(|g| g.name.clone())
}

/// `-c/24` at `point`; zero without a conformal vector.
fn vacuum_shift(inst: &AlgebraInstance, point: &ParamPoint) -> Result<Rational> {
    match inst.central_charge() {
        Some(c) => Ok(-c.evaluate(point)? / Rational::from_integer(24.into())),
        None => Ok(Rational::zero()),
    }
}

/// Character of the given sector (0 outside lattice algebras) with
/// coefficients up to `sector energy + cutoff`. The offset is the sector
/// energy minus `c/24`.
pub fn character(inst: &AlgebraInstance, sector: i64, cutoff: Half, point: &ParamPoint) -> Result<QSeries> {
    if let Some(name) = zero_weight_boson(inst) {
        return Err(Error::InfiniteDimensional(name));
    }
    let fock = inst.fock();
    let energy = fock.sector_energy(sector);
    let offset = energy.to_rational() + vacuum_shift(inst, point)?;
    let mut out = QSeries::new(offset, cutoff);
    let mut k = Half::ZERO;
    while k <= cutoff {
        let n = fock.basis(sector, energy + k).len();
        out.add_term(k, Rational::from_integer(n.into()));
        k += Half::from_doubled(1);
    }
    Ok(out)
}

/// `prod_{n=1}^{cutoff} (1 - q^n)^{-1}` by repeated division.
pub fn partition_series(cutoff: i64) -> QSeries {
    let len = cutoff.max(0) as usize + 1;
    let mut p = vec![Rational::zero(); len];
    p[0] = Rational::one();
    for n in 1..len {
        for k in n..len {
            let prev = p[k - n].clone();
            p[k] += prev;
        }
    }
    let mut out = QSeries::new(Rational::zero(), Half::from_int(cutoff));
    for (k, c) in p.into_iter().enumerate() {
        out.add_term(Half::from_int(k as i64), c);
    }
    out
}

/// `sum_{m in Z} q^{m^2 N / 2}` up to `cutoff`.
pub fn theta_series(n: i64, cutoff: Half) -> QSeries {
    let mut out = QSeries::new(Rational::zero(), cutoff);
    out.add_term(Half::ZERO, Rational::one());
    let mut m = 1;
    while Half::from_doubled(m * m * n) <= cutoff {
        out.add_term(Half::from_doubled(m * m * n), Rational::from_integer(2.into()));
        m += 1;
    }
    out
}

/// Character of `V_{sqrt(N) Z}` as theta series over the partition series,
/// with offset `-1/24`.
pub fn lattice_theta_character(n: i64, cutoff: Half) -> QSeries {
    let mut eta = partition_series(cutoff.floor());
    eta.offset = Rational::new((-1).into(), 24.into());
    eta.cutoff = cutoff;
    theta_series(n, cutoff).mul(&eta)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterComparison {
    pub cutoff: Half,
    /// `(degree, fermion dim, lattice dim)`
    pub rows: Vec<(Half, usize, usize)>,
    pub passed: bool,
}

/// Compare graded dimensions of the fermion system, graded by transport to
/// `V_Z`, with those of `V_Z`, both by direct enumeration. `doubled_cutoff`
/// is twice the top degree.
pub fn boson_fermion_character_check(doubled_cutoff: i64) -> Result<CharacterComparison> {
    let cutoff = Half::from_doubled(doubled_cutoff);
    let fer = presets::fermion();
    let lat = presets::lattice(1)?;
    // each fermion mode adds at least 1/2 to the transported degree and at
    // most twice that to its own
    let fermion_side: Vec<Monomial> = fer.fock().basis_up_to(Half::from_int(cutoff.ceil() * 2));
    let mut fdims: BTreeMap<Half, usize> = BTreeMap::new();
    for m in &fermion_side {
        let d = fermion_lattice_degree(&fer, m);
        if d <= cutoff {
            *fdims.entry(d).or_default() += 1;
        }
    }
    let mut rows = Vec::new();
    let mut d = Half::ZERO;
    while d <= cutoff {
        let ldim = lat.fock().basis_all(d).len();
        rows.push((d, fdims.get(&d).copied().unwrap_or(0), ldim));
        d += Half::from_doubled(1);
    }
    let passed = rows.iter().all(|(_, a, b)| a == b);
    Ok(CharacterComparison { cutoff, rows, passed })
}

#[cfg(test)]
mod tests;

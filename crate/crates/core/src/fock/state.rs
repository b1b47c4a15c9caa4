use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use super::algebra::GenId;
use crate::error::Result;
use crate::half::Half;
use crate::scalars::Scalar;

/// A single mode `x_n`. Ordered by mode index first, then generator id,
/// which is the canonical order of creation words.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mode {
    pub n: Half,
    pub gen: GenId,
}

impl Mode {
    pub fn new(gen: GenId, n: Half) -> Mode {
        Mode { n, gen }
    }

    pub fn int(gen: GenId, n: i64) -> Mode {
        Mode::new(gen, Half::from_int(n))
    }
}

/// A normally ordered creation word applied to the vacuum of a sector.
/// Sector `m` is the lattice vector `m sqrt(N)`; plain Fock modules only
/// use sector 0.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial {
    pub sector: i64,
    pub word: Vec<Mode>,
}

impl Monomial {
    pub fn vacuum() -> Monomial {
        Monomial::default()
    }

    pub fn sector_vacuum(sector: i64) -> Monomial {
        Monomial {
            sector,
            word: Vec::new(),
        }
    }

    pub fn is_vacuum(&self) -> bool {
        self.sector == 0 && self.word.is_empty()
    }
}

/// A finite linear combination of monomials with nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct State {
    terms: BTreeMap<Monomial, Scalar>,
}

impl State {
    pub fn zero() -> State {
        State::default()
    }

    pub fn vacuum() -> State {
        State::from_monomial(Monomial::vacuum())
    }

    pub fn from_monomial(m: Monomial) -> State {
        let mut s = State::zero();
        s.terms.insert(m, Scalar::one());
        s
    }

    pub fn term(m: Monomial, c: Scalar) -> State {
        let mut s = State::zero();
        s.add_term(m, c);
        s
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, other: &State, k: &Scalar) {
        if k.is_zero() {
            return;
        }
        for (m, c) in &other.terms {
            let t = if k.is_one() { c.clone() } else { c * k };
            self.add_term(m.clone(), t);
        }
    }

    pub fn add(&self, other: &State) -> State {
        let mut s = self.clone();
        s.add_scaled(other, &Scalar::one());
        s
    }

    pub fn sub(&self, other: &State) -> State {
        let mut s = self.clone();
        s.add_scaled(other, &Scalar::from_int(-1));
        s
    }

    pub fn scale(&self, k: &Scalar) -> State {
        let mut s = State::zero();
        s.add_scaled(self, k);
        s
    }

    pub fn map_scalars(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<State> {
        let mut s = State::zero();
        for (m, c) in &self.terms {
            s.add_term(m.clone(), f(c)?);
        }
        Ok(s)
    }

    /// Keep only the monomials accepted by `keep`.
    pub fn filter(&self, keep: impl Fn(&Monomial) -> bool) -> State {
        State {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| keep(m))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

impl FromIterator<(Monomial, Scalar)> for State {
    fn from_iter<I: IntoIterator<Item = (Monomial, Scalar)>>(it: I) -> State {
        let mut s = State::zero();
        for (m, c) in it {
            s.add_term(m, c);
        }
        s
    }
}

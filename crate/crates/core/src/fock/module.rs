use dashmap::DashMap;

use super::algebra::{GenId, ModeAlgebra, Parity};
use super::state::{Mode, Monomial, State};
use crate::error::{Error, Result};
use crate::half::Half;
use crate::scalars::Scalar;

/// One letter of an operator word: a mode or a lattice shift `S_m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WordItem {
    Mode(Mode),
    Shift(i64),
}

/// Default bound on how many times an even weight-0 creation mode may repeat
/// when enumerating a basis (such components are infinite-dimensional).
pub const DEFAULT_ZERO_WEIGHT_CAP: usize = 2;

/// The vacuum Fock module of a mode algebra, with a memo table for the
/// normal-ordering rewrite.
#[derive(Debug)]
pub struct Fock {
    alg: ModeAlgebra,
    cache: DashMap<(Mode, Monomial), State>,
    zero_weight_cap: usize,
}

impl Fock {
    pub fn new(alg: ModeAlgebra) -> Fock {
        Fock {
            alg,
            cache: DashMap::new(),
            zero_weight_cap: DEFAULT_ZERO_WEIGHT_CAP,
        }
    }

    pub fn with_zero_weight_cap(mut self, cap: usize) -> Fock {
        self.zero_weight_cap = cap;
        self
    }

    pub fn algebra(&self) -> &ModeAlgebra {
        &self.alg
    }

    pub fn zero_weight_cap(&self) -> usize {
        self.zero_weight_cap
    }

    /// Energy of the sector vacuum `1_m`, namely `m^2 N / 2`.
    pub fn sector_energy(&self, sector: i64) -> Half {
        match self.alg.lattice() {
            Some(l) => Half::from_doubled(sector * sector * l.n),
            None => Half::ZERO,
        }
    }

    pub fn sector_parity(&self, sector: i64) -> Parity {
        match self.alg.lattice() {
            Some(l) => Parity::from_odd((sector * l.n).rem_euclid(2) == 1),
            None => Parity::Even,
        }
    }

    pub fn degree(&self, m: &Monomial) -> Half {
        m.word
            .iter()
            .fold(self.sector_energy(m.sector), |acc, x| acc - x.n)
    }

    pub fn parity(&self, m: &Monomial) -> Parity {
        m.word
            .iter()
            .fold(self.sector_parity(m.sector), |acc, x| acc.plus(self.alg.parity(x.gen)))
    }

    /// Degree of a homogeneous state; `None` for zero or mixed states.
    pub fn state_degree(&self, s: &State) -> Option<Half> {
        let mut it = s.monomials().map(|m| self.degree(m));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    /// Parity of a state all of whose terms share one parity.
    pub fn state_parity(&self, s: &State) -> Option<Parity> {
        let mut it = s.monomials().map(|m| self.parity(m));
        let p = it.next()?;
        it.all(|e| e == p).then_some(p)
    }

    /// Terms of `s` of the given degree.
    pub fn component(&self, s: &State, degree: Half) -> State {
        s.filter(|m| self.degree(m) == degree)
    }

    /// Apply the mode `gen_n` (by name) to a state.
    pub fn apply_mode(&self, gen: &str, n: Half, a: &State) -> Result<State> {
        let id = self.alg.gen_id(gen)?;
        Ok(self.apply(Mode::new(id, n), a))
    }

    /// Apply a mode to a state and normal order the result.
    pub fn apply(&self, mode: Mode, a: &State) -> State {
        let mut out = State::zero();
        for (m, c) in a.iter() {
            out.add_scaled(&self.apply_monomial(mode, m), c);
        }
        out
    }

    pub fn apply_monomial(&self, mode: Mode, m: &Monomial) -> State {
        if !self.alg.is_valid_mode(mode) {
            return State::zero();
        }
        let key = (mode, m.clone());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let out = self.compute(mode, m);
        self.cache.insert(key, out.clone());
        out
    }

    fn compute(&self, x: Mode, m: &Monomial) -> State {
        let first = m.word.first().copied();
        if first.is_none_or(|c| x <= c) && self.alg.is_creation(x) {
            if first == Some(x) && self.alg.parity(x.gen).is_odd() {
                // x x = [x, x]_+ / 2 for an odd mode
                let rest = Monomial {
                    sector: m.sector,
                    word: m.word[1..].to_vec(),
                };
                return self.bracket_on(x, x, &rest).scale(&Scalar::from_ratio(1, 2));
            }
            let mut word = Vec::with_capacity(m.word.len() + 1);
            word.push(x);
            word.extend_from_slice(&m.word);
            return State::from_monomial(Monomial {
                sector: m.sector,
                word,
            });
        }
        let Some(c1) = first else {
            return self.on_vacuum(x, m.sector);
        };
        let rest = Monomial {
            sector: m.sector,
            word: m.word[1..].to_vec(),
        };
        // x c1 rest = ± c1 (x rest) + [x, c1] rest
        let inner = self.apply_monomial(x, &rest);
        let mut out = self.apply(c1, &inner);
        if self.alg.parity(x.gen).is_odd() && self.alg.parity(c1.gen).is_odd() {
            out = out.scale(&Scalar::from_int(-1));
        }
        out.add_scaled(&self.bracket_on(x, c1, &rest), &Scalar::one());
        out
    }

    /// A non-creation mode on a sector vacuum.
    fn on_vacuum(&self, x: Mode, sector: i64) -> State {
        match self.alg.lattice() {
            Some(l) if x.gen == l.charge && x.n == Half::ZERO && sector != 0 => State::term(
                Monomial::sector_vacuum(sector),
                Scalar::from_int(sector * l.n),
            ),
            _ => State::zero(),
        }
    }

    /// `[x, y]` applied to a monomial.
    fn bracket_on(&self, x: Mode, y: Mode, m: &Monomial) -> State {
        let b = self.alg.bracket(x, y);
        let mut out = State::zero();
        for (z, c) in &b.modes {
            out.add_scaled(&self.apply_monomial(*z, m), c);
        }
        if !b.central.is_zero() {
            out.add_term(m.clone(), b.central);
        }
        out
    }

    /// Normal order a word applied to the vacuum of `sector`; the rightmost
    /// letter acts first.
    pub fn normal_order(&self, word: &[WordItem], sector: i64) -> Result<State> {
        let mut s = State::from_monomial(Monomial::sector_vacuum(sector));
        if sector != 0 && self.alg.lattice().is_none() {
            return Err(Error::SectorMismatch);
        }
        for item in word.iter().rev() {
            s = match *item {
                WordItem::Mode(x) => {
                    if x.gen >= self.alg.generators().len() {
                        return Err(Error::UnknownGenerator(format!("#{}", x.gen)));
                    }
                    self.apply(x, &s)
                }
                WordItem::Shift(l) => self.shift(l, &s)?,
            };
        }
        Ok(s)
    }

    /// The lattice shift `S_l`, moving sector `m` to `m + l`.
    pub fn shift(&self, l: i64, s: &State) -> Result<State> {
        if self.alg.lattice().is_none() {
            return Err(Error::SectorMismatch);
        }
        Ok(s.iter()
            .map(|(m, c)| {
                (
                    Monomial {
                        sector: m.sector + l,
                        word: m.word.clone(),
                    },
                    c.clone(),
                )
            })
            .collect())
    }

    /// Sectors whose vacuum energy does not exceed `degree`.
    pub fn sectors_up_to(&self, degree: Half) -> Vec<i64> {
        let Some(l) = self.alg.lattice() else {
            return vec![0];
        };
        let mut out = vec![0];
        let mut m = 1;
        while Half::from_doubled(m * m * l.n) <= degree {
            out.push(-m);
            out.push(m);
            m += 1;
        }
        out.sort();
        out
    }

    /// PBW basis of the component of `sector` at `degree`, sorted.
    /// Even weight-0 creation modes repeat at most `zero_weight_cap` times.
    pub fn basis(&self, sector: i64, degree: Half) -> Vec<Monomial> {
        let excess = degree - self.sector_energy(sector);
        if excess < Half::ZERO {
            return Vec::new();
        }
        let modes = self.creation_modes(excess);
        let mut out = Vec::new();
        let mut word = Vec::new();
        self.enumerate(&modes, 0, excess, &mut word, sector, &mut out);
        out.sort();
        out
    }

    /// Basis at `degree` across all sectors.
    pub fn basis_all(&self, degree: Half) -> Vec<Monomial> {
        self.sectors_up_to(degree)
            .into_iter()
            .flat_map(|s| self.basis(s, degree))
            .collect()
    }

    /// Basis of every component with degree in `0..=max` (all sectors), in
    /// increasing degree.
    pub fn basis_up_to(&self, max: Half) -> Vec<Monomial> {
        let mut out = Vec::new();
        let mut d = Half::ZERO;
        while d <= max {
            out.extend(self.basis_all(d));
            d += Half::from_doubled(1);
        }
        out
    }

    /// Dimension of the degree-`degree` component of the whole module.
    pub fn graded_dim(&self, degree: Half) -> Result<usize> {
        if let Some(g) = self
            .alg
            .generators()
            .iter()
            .find(|g| g.weight == Half::ZERO && !g.parity.is_odd())
        {
            return Err(Error::InfiniteDimensional(g.name.clone()));
        }
        Ok(self.basis_all(degree).len())
    }

    /// Creation modes of degree at most `max`, in canonical order.
    fn creation_modes(&self, max: Half) -> Vec<Mode> {
        let mut modes = Vec::new();
        for (id, g) in self.alg.generators().iter().enumerate() {
            let mut n = -g.weight;
            while -n <= max {
                modes.push(Mode::new(id as GenId, n));
                n -= Half::ONE;
            }
        }
        modes.sort();
        modes
    }

    fn enumerate(
        &self,
        modes: &[Mode],
        i: usize,
        left: Half,
        word: &mut Vec<Mode>,
        sector: i64,
        out: &mut Vec<Monomial>,
    ) {
        if i == modes.len() {
            if left == Half::ZERO {
                out.push(Monomial {
                    sector,
                    word: word.clone(),
                });
            }
            return;
        }
        let x = modes[i];
        let deg = -x.n;
        let odd = self.alg.parity(x.gen).is_odd();
        let max_rep = if odd {
            1
        } else if deg == Half::ZERO {
            self.zero_weight_cap
        } else {
            usize::MAX
        };
        let mut k = 0usize;
        let mut left_k = left;
        loop {
            self.enumerate(modes, i + 1, left_k, word, sector, out);
            if k == max_rep || left_k - deg < Half::ZERO {
                break;
            }
            word.push(x);
            k += 1;
            left_k -= deg;
        }
        word.truncate(word.len() - k);
    }
}

#[cfg(test)]
mod tests {
    use super::super::algebra::{BracketRule, Central, GeneratorSpec, ModePoly};
    use super::*;

    fn heis() -> Fock {
        let g = vec![GeneratorSpec::new("b", Half::ONE, Parity::Even)];
        let rule = BracketRule {
            terms: vec![],
            central: Some(Central {
                param: "1".into(),
                coeff: ModePoly::parse("m").unwrap(),
            }),
        };
        Fock::new(ModeAlgebra::new("heisenberg", g, vec![((0, 0), rule)], None).unwrap())
    }

    fn partitions(n: usize) -> usize {
        let mut p = vec![0usize; n + 1];
        p[0] = 1;
        for part in 1..=n {
            for t in part..=n {
                p[t] += p[t - part];
            }
        }
        p[n]
    }

    #[test]
    fn annihilation_against_creation() {
        let f = heis();
        let s = f.normal_order(&[WordItem::Mode(Mode::int(0, 1)), WordItem::Mode(Mode::int(0, -1))], 0).unwrap();
        assert_eq!(s, State::vacuum());
        let s = f.apply(Mode::int(0, 2), &f.apply(Mode::int(0, -2), &State::vacuum()));
        assert_eq!(s, State::vacuum().scale(&Scalar::from_int(2)));
    }

    #[test]
    fn creation_words_are_sorted() {
        let f = heis();
        let s = f.normal_order(&[WordItem::Mode(Mode::int(0, -1)), WordItem::Mode(Mode::int(0, -2))], 0).unwrap();
        let m = s.monomials().next().unwrap();
        assert_eq!(m.word, vec![Mode::int(0, -2), Mode::int(0, -1)]);
    }

    #[test]
    fn dims_are_partition_numbers() {
        let f = heis();
        for d in 0..=12 {
            assert_eq!(f.graded_dim(Half::from_int(d)).unwrap(), partitions(d as usize), "degree {d}");
        }
    }

    #[test]
    fn shift_needs_lattice() {
        let f = heis();
        assert_eq!(f.normal_order(&[WordItem::Shift(1)], 0), Err(Error::SectorMismatch));
    }
}

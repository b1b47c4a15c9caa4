use std::collections::{BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::state::Mode;
use crate::error::{Error, Result};
use crate::half::Half;
use crate::scalars::{ParamPoint, Scalar};

pub type GenId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    pub fn from_odd(odd: bool) -> Parity {
        if odd {
            Parity::Odd
        } else {
            Parity::Even
        }
    }

    pub fn plus(self, other: Parity) -> Parity {
        Parity::from_odd(self.is_odd() != other.is_odd())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub name: String,
    pub weight: Half,
    pub parity: Parity,
}

impl GeneratorSpec {
    pub fn new(name: &str, weight: Half, parity: Parity) -> GeneratorSpec {
        GeneratorSpec {
            name: name.to_string(),
            weight,
            parity,
        }
    }
}

/// A polynomial `sum c * m^i * n^j` in the two mode indices of a bracket.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ModePoly {
    terms: Vec<(u32, u32, Scalar)>,
}

impl ModePoly {
    pub fn zero() -> ModePoly {
        ModePoly::default()
    }

    pub fn constant(c: Scalar) -> ModePoly {
        ModePoly::from_terms([(0, 0, c)])
    }

    pub fn from_terms<I: IntoIterator<Item = (u32, u32, Scalar)>>(it: I) -> ModePoly {
        let mut acc: Vec<(u32, u32, Scalar)> = Vec::new();
        for (i, j, c) in it {
            match acc.iter_mut().find(|(a, b, _)| (*a, *b) == (i, j)) {
                Some(slot) => slot.2 += &c,
                None => acc.push((i, j, c)),
            }
        }
        acc.retain(|t| !t.2.is_zero());
        acc.sort_by_key(|t| std::cmp::Reverse((t.0, t.1)));
        ModePoly { terms: acc }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(u32, u32, Scalar)] {
        &self.terms
    }

    pub fn eval(&self, m: Half, n: Half) -> Scalar {
        let (m, n) = (m.to_rational(), n.to_rational());
        let mut acc = Scalar::zero();
        for (i, j, c) in &self.terms {
            let f = num_traits::pow(m.clone(), *i as usize) * num_traits::pow(n.clone(), *j as usize);
            acc += &(c * &Scalar::from_rational(f));
        }
        acc
    }

    /// The polynomial with `m` and `n` exchanged.
    pub fn swapped(&self) -> ModePoly {
        ModePoly::from_terms(self.terms.iter().map(|(i, j, c)| (*j, *i, c.clone())))
    }

    pub fn scale(&self, s: &Scalar) -> ModePoly {
        ModePoly::from_terms(self.terms.iter().map(|(i, j, c)| (*i, *j, c * s)))
    }

    pub fn map_scalars(&self, f: &impl Fn(&Scalar) -> Result<Scalar>) -> Result<ModePoly> {
        let mut out = Vec::with_capacity(self.terms.len());
        for (i, j, c) in &self.terms {
            out.push((*i, *j, f(c)?));
        }
        Ok(ModePoly::from_terms(out))
    }

    /// Parse a polynomial in `m`, `n` whose coefficients may involve other
    /// parameters, e.g. `k*m` or `(m^3-m)/12`.
    pub fn parse(src: &str) -> Result<ModePoly> {
        let s: Scalar = src.parse()?;
        let den = s.denominator();
        if den.vars().iter().any(|v| &**v == "m" || &**v == "n") {
            return Err(Error::InvalidAlgebra(format!(
                "`{src}` is not polynomial in the mode indices"
            )));
        }
        let mut terms = Vec::new();
        for (i, cm) in s.numerator().coeffs_in("m").iter().enumerate() {
            for (j, cn) in cm.coeffs_in("n").iter().enumerate() {
                if !cn.is_zero() {
                    terms.push((i as u32, j as u32, Scalar::from_fraction(cn.clone(), den.clone())?));
                }
            }
        }
        Ok(ModePoly::from_terms(terms))
    }

    fn to_scalar(&self) -> Scalar {
        let (m, n) = (Scalar::param("m"), Scalar::param("n"));
        let mut acc = Scalar::zero();
        for (i, j, c) in &self.terms {
            let t = c * &m.pow(*i as i64).expect("nonnegative") * n.pow(*j as i64).expect("nonnegative");
            acc += &t;
        }
        acc
    }
}

impl fmt::Display for ModePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_scalar())
    }
}

/// One summand `coeff(m,n) * gen_{m+n}` of a bracket, optionally present
/// only when `m + n` takes a fixed value.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BracketTerm {
    pub gen: GenId,
    pub coeff: ModePoly,
    pub only_at: Option<Half>,
}

/// Central term `param * coeff(m,n)`, supported on `m + n = 0`. The
/// parameter `"1"` stands for the constant one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Central {
    pub param: String,
    pub coeff: ModePoly,
}

impl Central {
    pub fn value(&self, m: Half, n: Half) -> Scalar {
        let c = self.coeff.eval(m, n);
        if self.param == "1" {
            c
        } else {
            c * Scalar::param(&self.param)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BracketRule {
    pub terms: Vec<BracketTerm>,
    pub central: Option<Central>,
}

impl BracketRule {
    /// The rule for the opposite order, `[y_n, x_m] = -(-1)^{|x||y|} [x_m, y_n]`.
    fn reversed(&self, sign: &Scalar) -> BracketRule {
        BracketRule {
            terms: self
                .terms
                .iter()
                .map(|t| BracketTerm {
                    gen: t.gen,
                    coeff: t.coeff.swapped().scale(sign),
                    only_at: t.only_at,
                })
                .collect(),
            central: self.central.as_ref().map(|c| Central {
                param: c.param.clone(),
                coeff: c.coeff.swapped().scale(sign),
            }),
        }
    }
}

/// Lattice data for `V_{sqrt(N) Z}`: the charge generator `h` is normalized
/// so that `[h_m, h_n] = N m delta_{m+n,0}` and `h_0` acts on sector `m`
/// by `m N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeData {
    pub n: i64,
    pub charge: GenId,
}

/// Mode algebra: generators with weights and parities, plus a bracket table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeAlgebra {
    name: String,
    vacuum_label: String,
    generators: Vec<GeneratorSpec>,
    declared: Vec<((GenId, GenId), BracketRule)>,
    rules: HashMap<(GenId, GenId), BracketRule>,
    lattice: Option<LatticeData>,
}

/// Result of evaluating a bracket at fixed modes.
#[derive(Clone, Debug, Default)]
pub struct BracketValue {
    pub modes: Vec<(Mode, Scalar)>,
    pub central: Scalar,
}

impl ModeAlgebra {
    /// Build and validate an algebra. `brackets` lists each unordered pair
    /// at most once in either order; the opposite order is derived.
    pub fn new(
        name: &str,
        generators: Vec<GeneratorSpec>,
        brackets: Vec<((GenId, GenId), BracketRule)>,
        lattice: Option<LatticeData>,
    ) -> Result<ModeAlgebra> {
        let alg = ModeAlgebra::assemble(name, generators, brackets, lattice)?;
        alg.check_self_skew()?;
        Ok(alg)
    }

    /// Like [`ModeAlgebra::new`] but accepts same-generator brackets that are
    /// not (super)skew. Such tables do not define a Lie superalgebra; they
    /// exist to exercise the axiom checks on a broken input.
    pub fn new_unchecked(
        name: &str,
        generators: Vec<GeneratorSpec>,
        brackets: Vec<((GenId, GenId), BracketRule)>,
        lattice: Option<LatticeData>,
    ) -> Result<ModeAlgebra> {
        ModeAlgebra::assemble(name, generators, brackets, lattice)
    }

    fn assemble(
        name: &str,
        generators: Vec<GeneratorSpec>,
        brackets: Vec<((GenId, GenId), BracketRule)>,
        lattice: Option<LatticeData>,
    ) -> Result<ModeAlgebra> {
        let mut seen = BTreeSet::new();
        for g in &generators {
            if !seen.insert(g.name.as_str()) {
                return Err(Error::InvalidAlgebra(format!("duplicate generator `{}`", g.name)));
            }
            if g.weight < Half::ZERO {
                return Err(Error::InvalidAlgebra(format!("generator `{}` has negative weight", g.name)));
            }
            if g.name.is_empty() || !g.name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '*') {
                return Err(Error::InvalidAlgebra(format!("bad generator name `{}`", g.name)));
            }
        }
        let ng = generators.len();
        let mut rules = HashMap::new();
        for ((x, y), rule) in &brackets {
            if *x >= ng || *y >= ng || rule.terms.iter().any(|t| t.gen >= ng) {
                return Err(Error::InvalidAlgebra("bracket refers to an unknown generator".into()));
            }
            let px = generators[*x].parity;
            let py = generators[*y].parity;
            for t in &rule.terms {
                if generators[t.gen].parity != px.plus(py) {
                    return Err(Error::InvalidAlgebra(format!(
                        "bracket of `{}` and `{}` has a term of the wrong parity",
                        generators[*x].name, generators[*y].name
                    )));
                }
                let shift = generators[*x].weight + generators[*y].weight - generators[t.gen].weight;
                if !shift.is_integer() {
                    return Err(Error::InvalidAlgebra("bracket term breaks the mode grading".into()));
                }
            }
            if rule.central.is_some() && px.plus(py).is_odd() {
                return Err(Error::InvalidAlgebra("odd bracket with a central term".into()));
            }
            if rules.contains_key(&(*x, *y)) {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket of `{}` and `{}` given twice",
                    generators[*x].name, generators[*y].name
                )));
            }
            rules.insert((*x, *y), rule.clone());
        }
        for ((x, y), rule) in &brackets {
            if x == y {
                continue;
            }
            let both_odd = generators[*x].parity.is_odd() && generators[*y].parity.is_odd();
            let sign = if both_odd { Scalar::from_int(-1) } else { Scalar::one() };
            if rules.contains_key(&(*y, *x)) {
                return Err(Error::InvalidAlgebra(format!(
                    "bracket of `{}` and `{}` given in both orders",
                    generators[*x].name, generators[*y].name
                )));
            }
            rules.insert((*y, *x), rule.reversed(&-sign));
        }
        if let Some(l) = lattice {
            if l.n < 1 || l.charge >= ng {
                return Err(Error::InvalidAlgebra("bad lattice data".into()));
            }
            let h = &generators[l.charge];
            if h.parity.is_odd() || h.weight != Half::ONE {
                return Err(Error::InvalidAlgebra("charge generator must be even of weight 1".into()));
            }
        }
        Ok(ModeAlgebra {
            name: name.to_string(),
            vacuum_label: "|0>".to_string(),
            generators,
            declared: brackets,
            rules,
            lattice,
        })
    }

    /// Same-generator brackets must be (super)skew on their own.
    fn check_self_skew(&self) -> Result<()> {
        for (x, g) in self.generators.iter().enumerate() {
            if !self.rules.contains_key(&(x, x)) {
                continue;
            }
            let sign = if g.parity.is_odd() { 1 } else { -1 };
            let base = -g.weight;
            for a in -3..=3 {
                for b in -3..=3 {
                    let (m, n) = (base + Half::from_int(a), base + Half::from_int(b));
                    let lhs = self.bracket(Mode::new(x, m), Mode::new(x, n));
                    let rhs = self.bracket(Mode::new(x, n), Mode::new(x, m));
                    let ok = lhs.central == &rhs.central * &Scalar::from_int(sign)
                        && combine(&lhs.modes) == combine(&scaled(&rhs.modes, sign));
                    if !ok {
                        return Err(Error::InvalidAlgebra(format!(
                            "bracket of `{}` with itself is not (super)skew",
                            g.name
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn with_vacuum_label(mut self, label: &str) -> ModeAlgebra {
        self.vacuum_label = label.to_string();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn vacuum_label(&self) -> &str {
        &self.vacuum_label
    }

    pub fn generators(&self) -> &[GeneratorSpec] {
        &self.generators
    }

    pub fn generator(&self, id: GenId) -> &GeneratorSpec {
        &self.generators[id]
    }

    pub fn gen_id(&self, name: &str) -> Result<GenId> {
        self.generators
            .iter()
            .position(|g| g.name == name)
            .ok_or_else(|| Error::UnknownGenerator(name.to_string()))
    }

    pub fn weight(&self, id: GenId) -> Half {
        self.generators[id].weight
    }

    pub fn parity(&self, id: GenId) -> Parity {
        self.generators[id].parity
    }

    pub fn lattice(&self) -> Option<LatticeData> {
        self.lattice
    }

    /// Brackets as declared, before the opposite orders were derived.
    pub fn declared_brackets(&self) -> &[((GenId, GenId), BracketRule)] {
        &self.declared
    }

    pub fn rule(&self, x: GenId, y: GenId) -> Option<&BracketRule> {
        self.rules.get(&(x, y))
    }

    /// 2 when some weight or sector energy is a proper half-integer.
    pub fn grading_denominator(&self) -> i64 {
        let half_weights = self.generators.iter().any(|g| g.weight.is_half_odd());
        let odd_lattice = self.lattice.is_some_and(|l| l.n % 2 == 1);
        if half_weights || odd_lattice {
            2
        } else {
            1
        }
    }

    /// Names of parameters carried by central terms.
    pub fn central_params(&self) -> Vec<String> {
        let mut out = BTreeSet::new();
        for (_, r) in &self.declared {
            if let Some(c) = &r.central {
                if c.param != "1" {
                    out.insert(c.param.clone());
                }
                for (_, _, s) in c.coeff.terms() {
                    out.extend(s.params());
                }
            }
            for t in &r.terms {
                for (_, _, s) in t.coeff.terms() {
                    out.extend(s.params());
                }
            }
        }
        out.into_iter().collect()
    }

    /// Whether `x_n` is a creation operator on the vacuum: `n <= -weight(x)`.
    pub fn is_creation(&self, mode: Mode) -> bool {
        mode.n <= -self.weight(mode.gen)
    }

    /// Whether `x_n` is a mode the field of `x` actually has.
    pub fn is_valid_mode(&self, mode: Mode) -> bool {
        mode.gen < self.generators.len() && (mode.n + self.weight(mode.gen)).is_integer()
    }

    /// `[x_m, y_n]` (anticommutator when both are odd).
    pub fn bracket(&self, x: Mode, y: Mode) -> BracketValue {
        let mut out = BracketValue {
            modes: Vec::new(),
            central: Scalar::zero(),
        };
        let Some(rule) = self.rules.get(&(x.gen, y.gen)) else {
            return out;
        };
        let total = x.n + y.n;
        for t in &rule.terms {
            if t.only_at.is_some_and(|v| v != total) {
                continue;
            }
            let c = t.coeff.eval(x.n, y.n);
            if !c.is_zero() {
                out.modes.push((Mode::new(t.gen, total), c));
            }
        }
        if total == Half::ZERO {
            if let Some(c) = &rule.central {
                out.central = c.value(x.n, y.n);
            }
        }
        out
    }

    /// Substitute parameter values into every bracket coefficient.
    pub fn specialize(&self, point: &ParamPoint) -> Result<ModeAlgebra> {
        let f = |s: &Scalar| s.specialize(point);
        let mut brackets = Vec::new();
        for (pair, rule) in &self.declared {
            let mut terms = Vec::new();
            for t in &rule.terms {
                terms.push(BracketTerm {
                    gen: t.gen,
                    coeff: t.coeff.map_scalars(&f)?,
                    only_at: t.only_at,
                });
            }
            let central = match &rule.central {
                None => None,
                Some(c) => {
                    let coeff = c.coeff.map_scalars(&f)?;
                    Some(match point.get(&c.param) {
                        Some(v) => Central {
                            param: "1".into(),
                            coeff: coeff.scale(&Scalar::from_rational(v.clone())),
                        },
                        None => Central {
                            param: c.param.clone(),
                            coeff,
                        },
                    })
                }
            };
            brackets.push((*pair, BracketRule { terms, central }));
        }
        Ok(ModeAlgebra::new(&self.name, self.generators.clone(), brackets, self.lattice)?
            .with_vacuum_label(&self.vacuum_label))
    }
}

fn scaled(v: &[(Mode, Scalar)], k: i64) -> Vec<(Mode, Scalar)> {
    let k = Scalar::from_int(k);
    v.iter().map(|(m, c)| (*m, c * &k)).collect()
}

fn combine(v: &[(Mode, Scalar)]) -> Vec<(Mode, Scalar)> {
    let mut acc: Vec<(Mode, Scalar)> = Vec::new();
    for (m, c) in v {
        match acc.iter_mut().find(|(a, _)| a == m) {
            Some(slot) => slot.1 += c,
            None => acc.push((*m, c.clone())),
        }
    }
    acc.retain(|(_, c)| !c.is_zero());
    acc.sort_by_key(|t| t.0);
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mode_poly_parse_and_eval() {
        let p = ModePoly::parse("(m^3-m)/12").unwrap();
        assert_eq!(p.eval(Half::from_int(2), Half::from_int(-2)), Scalar::from_ratio(1, 2));
        let p = ModePoly::parse("k*m").unwrap();
        assert_eq!(p.eval(Half::from_int(3), Half::ZERO), "3*k".parse().unwrap());
        assert!(ModePoly::parse("1/m").is_err());
    }

    #[test]
    fn mode_poly_display_roundtrips() {
        let p = ModePoly::parse("m-n+2*k*m^2").unwrap();
        assert_eq!(ModePoly::parse(&p.to_string()).unwrap(), p);
    }
}

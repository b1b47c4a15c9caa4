//! Operator product expansions, the commutator formula, locality orders,
//! full axiom checks and commutant (coset) computations.

mod axioms;
mod coset;

use std::collections::{BTreeMap, HashMap};

pub use axioms::{corrupted_heisenberg, reverify, verify_axioms, AxiomReport, CheckResult, Witness};
pub use coset::{center, coset_composite_check, coset_graded};

use crate::error::{Error, Result};
use crate::fields::VertexAlgebra;
use crate::fock::State;
use crate::half::Half;
use crate::scalars::{binomial_q, Scalar};

/// Degree of a homogeneous state, zero for the zero state.
pub(crate) fn degree_of(va: &VertexAlgebra, s: &State) -> Half {
    if s.is_zero() {
        return Half::ZERO;
    }
    va.fock().state_degree(s).expect("homogeneous state")
}

pub(crate) fn odd(va: &VertexAlgebra, s: &State) -> bool {
    va.fock().state_parity(s).is_some_and(|p| p.is_odd())
}

/// `(-1)^{|A||B|}`.
pub(crate) fn exchange_sign(va: &VertexAlgebra, a: &State, b: &State) -> Scalar {
    if odd(va, a) && odd(va, b) {
        Scalar::from_int(-1)
    } else {
        Scalar::one()
    }
}

/// Pole coefficients of `Y(A, z) B`: `poles[j]` multiplies `(z-w)^{-j}`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct OpeSingularPart {
    pub poles: BTreeMap<i64, State>,
}

impl OpeSingularPart {
    pub fn max_order(&self) -> i64 {
        self.poles.keys().next_back().copied().unwrap_or(0)
    }

    pub fn render(&self, va: &VertexAlgebra) -> String {
        if self.poles.is_empty() {
            return "regular".into();
        }
        self.poles
            .iter()
            .rev()
            .map(|(j, s)| format!("{j}: {}", va.render(s)))
            .collect::<Vec<_>>()
            .join("\n")
    }
}

/// All nonzero `A_{j - deg A} B` with `j >= 1`.
pub fn singular_part(va: &VertexAlgebra, a: &State, b: &State) -> OpeSingularPart {
    let da = degree_of(va, a);
    let db = degree_of(va, b);
    let mut poles = BTreeMap::new();
    for j in 1..=(da + db).floor() {
        let s = va.mode_apply(a, Half::from_int(j) - da, b);
        if !s.is_zero() {
            poles.insert(j, s);
        }
    }
    OpeSingularPart { poles }
}

/// One term `coeff * (A_n B)_{m+k}` of the commutator formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorTerm {
    pub coeff: Scalar,
    pub n: Half,
    pub state: State,
}

/// `[A_m, B_k] = sum_n binom(m + deg A - 1, n + deg A - 1) (A_n B)_{m+k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommutatorFormula {
    pub mode: Half,
    pub terms: Vec<CommutatorTerm>,
}

impl CommutatorFormula {
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Apply the combination to a state.
    pub fn apply(&self, va: &VertexAlgebra, v: &State) -> State {
        let mut out = State::zero();
        for t in &self.terms {
            out.add_scaled(&va.mode_apply(&t.state, self.mode, v), &t.coeff);
        }
        out
    }
}

pub fn commutator_via_formula(va: &VertexAlgebra, a: &State, m: Half, b: &State, k: Half) -> CommutatorFormula {
    let da = degree_of(va, a);
    let db = degree_of(va, b);
    let top = (m + da - Half::ONE).to_rational();
    let mut terms = Vec::new();
    let mut n = -da + Half::ONE;
    while n <= db {
        let state = va.mode_apply(a, n, b);
        if !state.is_zero() {
            let j = (n + da - Half::ONE).to_int().expect("integral pole index");
            let coeff = Scalar::from_rational(binomial_q(&top, j));
            if !coeff.is_zero() {
                terms.push(CommutatorTerm { coeff, n, state });
            }
        }
        n += Half::ONE;
    }
    CommutatorFormula { mode: m + k, terms }
}

/// The supercommutator `A_m B_k v - (-1)^{|A||B|} B_k A_m v`.
pub fn commutator_direct(va: &VertexAlgebra, a: &State, m: Half, b: &State, k: Half, v: &State) -> State {
    let ab = va.mode_apply(a, m, &va.mode_apply(b, k, v));
    let ba = va.mode_apply(b, k, &va.mode_apply(a, m, v));
    ab.sub(&ba.scale(&exchange_sign(va, a, b)))
}

/// Compare the formula with direct commutators on every basis state up to
/// degree `d`; returns the number of states checked or the first offender.
pub fn check_commutator(va: &VertexAlgebra, a: &State, m: Half, b: &State, k: Half, d: Half) -> Result<usize, State> {
    let formula = commutator_via_formula(va, a, m, b, k);
    let basis = va.fock().basis_up_to(d);
    for mono in &basis {
        let v = State::from_monomial(mono.clone());
        if commutator_direct(va, a, m, b, k, &v) != formula.apply(va, &v) {
            return Err(v);
        }
    }
    Ok(basis.len())
}

/// Least `N` with `(z-w)^N [Y(A,z), Y(B,w)] C = 0` on the mode window fixed
/// by `max_degree`, or `None` if no `N <= cap` works.
pub(crate) fn triple_locality(
    va: &VertexAlgebra,
    a: &State,
    b: &State,
    c: &State,
    max_degree: Half,
    cap: i64,
) -> Option<i64> {
    let da = degree_of(va, a);
    let db = degree_of(va, b);
    let dc = degree_of(va, c);
    let sign = exchange_sign(va, a, b);
    // F(p, q) = [A_m, B_k] C with m = p - da, k = q - db
    let inside = |p: i64, q: i64| {
        let m = Half::from_int(p) - da;
        let k = Half::from_int(q) - db;
        dc - m - k >= Half::ZERO && dc - m <= max_degree && dc - k <= max_degree && dc - m - k <= max_degree
    };
    let mut memo: HashMap<(i64, i64), State> = HashMap::new();
    let mut f = |p: i64, q: i64| -> State {
        memo.entry((p, q))
            .or_insert_with(|| {
                let m = Half::from_int(p) - da;
                let k = Half::from_int(q) - db;
                let ab = va.mode_apply(a, m, &va.mode_apply(b, k, c));
                let ba = va.mode_apply(b, k, &va.mode_apply(a, m, c));
                ab.sub(&ba.scale(&sign))
            })
            .clone()
    };
    // p, q range over a box containing every inside point
    let lo = (dc - max_degree + da.min(db)).floor() - 1;
    let hi = (max_degree + da.max(db)).ceil() + 1;
    'next: for n in 0..=cap {
        for p in lo..=hi {
            for q in lo..=hi {
                if !(0..=n).all(|i| inside(p + n - i, q + i)) {
                    continue;
                }
                let mut g = State::zero();
                for i in 0..=n {
                    let c = crate::scalars::binomial(n, i);
                    let c = if i % 2 == 0 { c } else { -c };
                    g.add_scaled(&f(p + n - i, q + i), &Scalar::from_rational(c));
                }
                if !g.is_zero() {
                    continue 'next;
                }
            }
        }
        return Some(n);
    }
    None
}

/// Locality order of `Y(A, z)` and `Y(B, w)` tested against every basis
/// state up to degree `d`.
pub fn locality_order(va: &VertexAlgebra, a: &State, b: &State, d: Half) -> Result<i64> {
    let da = degree_of(va, a);
    let db = degree_of(va, b);
    let cap = (d + da + db).floor();
    let window = d + da + db;
    let mut order = 0;
    for mono in va.fock().basis_up_to(d) {
        let c = State::from_monomial(mono);
        match triple_locality(va, a, b, &c, window, cap) {
            Some(n) => order = order.max(n),
            None => return Err(Error::NotLocalUpTo(d.ceil())),
        }
    }
    Ok(order)
}

//! The state-field correspondence: modes `A_n B` of `Y(A, z)` for any state.
//!
//! Modes use the weight convention `Y(A, z) = sum_n A_n z^{-n-deg A}`, so
//! `A_n` lowers degree by `n`.

mod expr;

use std::collections::BTreeMap;

use dashmap::DashMap;

pub use expr::{FieldExpr, FieldSum};

use crate::error::Result;
use crate::fock::{Fock, ModeAlgebra, Mode, Monomial, State};
use crate::half::Half;
use crate::scalars::{binomial, Scalar};

type ModeKey = (Monomial, Half, Monomial);

/// A Fock module together with the vertex operators of its states.
#[derive(Debug)]
pub struct VertexAlgebra {
    fock: Fock,
    cache: DashMap<ModeKey, State>,
}

impl VertexAlgebra {
    pub fn new(fock: Fock) -> VertexAlgebra {
        VertexAlgebra {
            fock,
            cache: DashMap::new(),
        }
    }

    pub fn from_algebra(alg: ModeAlgebra) -> VertexAlgebra {
        VertexAlgebra::new(Fock::new(alg))
    }

    pub fn fock(&self) -> &Fock {
        &self.fock
    }

    pub fn algebra(&self) -> &ModeAlgebra {
        self.fock.algebra()
    }

    pub fn parse(&self, src: &str) -> Result<State> {
        self.fock.parse_state(src)
    }

    pub fn render(&self, s: &State) -> String {
        self.fock.render(s)
    }

    /// `A_n B`, bilinear in `A` and `B`.
    pub fn mode_apply(&self, a: &State, n: Half, b: &State) -> State {
        let mut out = State::zero();
        for (ma, ca) in a.iter() {
            for (mb, cb) in b.iter() {
                let t = self.mode_apply_monomial(ma, n, mb);
                if !t.is_zero() {
                    out.add_scaled(&t, &(ca * cb));
                }
            }
        }
        out
    }

    /// `A_n B` for monomials.
    pub fn mode_apply_monomial(&self, a: &Monomial, n: Half, b: &Monomial) -> State {
        let fock = &self.fock;
        if fock.degree(b) - n < Half::ZERO {
            return State::zero();
        }
        let key = (a.clone(), n, b.clone());
        if let Some(hit) = self.cache.get(&key) {
            return hit.clone();
        }
        let out = self.compute(a, n, b);
        self.cache.insert(key, out.clone());
        out
    }

    fn compute(&self, a: &Monomial, n: Half, b: &Monomial) -> State {
        let fock = &self.fock;
        let Some(&x) = a.word.first() else {
            if a.sector == 0 {
                return if n == Half::ZERO {
                    State::from_monomial(b.clone())
                } else {
                    State::zero()
                };
            }
            return self.lattice_vertex_mode(a.sector, n, b);
        };
        // A = x_{-dx-j} A' has field :(d^j x / j!)(z) Y(A', z):
        let rest = Monomial {
            sector: a.sector,
            word: a.word[1..].to_vec(),
        };
        let dx = fock.algebra().weight(x.gen);
        let j = (-x.n - dx).to_int().expect("creation mode");
        let deg_b = fock.degree(b);
        let sign = if fock.algebra().parity(x.gen).is_odd() && fock.parity(&rest).is_odd() {
            Scalar::from_int(-1)
        } else {
            Scalar::one()
        };
        let mut out = State::zero();
        // creation half: phi_m Y(A')_{n-m} B for n - deg B <= m <= x.n
        let mut m = x.n;
        while m >= n - deg_b {
            let c = binomial((-m - dx).to_int().expect("integral"), j);
            let inner = self.mode_apply_monomial(&rest, n - m, b);
            if !inner.is_zero() {
                out.add_scaled(&fock.apply(Mode::new(x.gen, m), &inner), &Scalar::from_rational(c));
            }
            m -= Half::ONE;
        }
        // annihilation half: ± Y(A')_{n-m} phi_m B for -dx < m <= deg B
        let mut m = -dx + Half::ONE;
        while m <= deg_b {
            let c = binomial((-m - dx).to_int().expect("integral"), j);
            let xb = fock.apply_monomial(Mode::new(x.gen, m), b);
            if !xb.is_zero() {
                let t = self.mode_apply(&State::from_monomial(rest.clone()), n - m, &xb);
                out.add_scaled(&t, &(&sign * &Scalar::from_rational(c)));
            }
            m += Half::ONE;
        }
        out
    }

    /// Mode `n` of `Y(1_l, z)` on a monomial of sector `mu`:
    /// `S_l z^{l h_0 / N} exp(sum_j l h_{-j} z^j / j) exp(-sum_j l h_j z^{-j} / j)`.
    fn lattice_vertex_mode(&self, l: i64, n: Half, b: &Monomial) -> State {
        let fock = &self.fock;
        let lat = fock.algebra().lattice().expect("sector states need a lattice");
        let h = lat.charge;
        let energy = Half::from_doubled(l * l * lat.n);
        // z-exponent is -n - energy; minus l mu N it must equal q - p
        let s = -n - energy - Half::from_int(l * b.sector * lat.n);
        let Some(s) = s.to_int() else {
            return State::zero();
        };
        let level = (fock.degree(b) - fock.sector_energy(b.sector))
            .to_int()
            .expect("integral excitation");
        let lq = Scalar::from_int(l);
        let b = State::from_monomial(b.clone());
        // p[k] = P_k B with k P_k = sum_j (-l h_j) P_{k-j}
        let mut p: Vec<State> = vec![b];
        for k in 1..=level {
            let mut acc = State::zero();
            for j in 1..=k {
                let t = fock.apply(Mode::int(h, j), &p[(k - j) as usize]);
                acc.add_scaled(&t, &-&lq);
            }
            p.push(acc.scale(&Scalar::from_ratio(1, k)));
        }
        let mut out = State::zero();
        for (k, pk) in p.iter().enumerate() {
            let q = k as i64 + s;
            if q < 0 || pk.is_zero() {
                continue;
            }
            // q[i] = Q_i P_k B with i Q_i = sum_j (l h_{-j}) Q_{i-j}
            let mut qs: Vec<State> = vec![pk.clone()];
            for i in 1..=q {
                let mut acc = State::zero();
                for j in 1..=i {
                    let t = fock.apply(Mode::int(h, -j), &qs[(i - j) as usize]);
                    acc.add_scaled(&t, &lq);
                }
                qs.push(acc.scale(&Scalar::from_ratio(1, i)));
            }
            out.add_scaled(&qs[q as usize], &Scalar::one());
        }
        fock.shift(l, &out).expect("lattice algebra")
    }

    /// The translation operator: `[T, x_p] = (-p - w + 1) x_{p-1}` on
    /// generators of weight `w`, `T|0> = 0` and `T 1_l = l h_{-1} 1_l`.
    pub fn translation(&self, a: &State) -> State {
        let mut out = State::zero();
        for (m, c) in a.iter() {
            out.add_scaled(&self.translation_monomial(m), c);
        }
        out
    }

    fn translation_monomial(&self, a: &Monomial) -> State {
        let fock = &self.fock;
        let alg = fock.algebra();
        let mut out = State::zero();
        // T acting on the sector vacuum, then every factor of the word
        let vac = Monomial::sector_vacuum(a.sector);
        let mut tail = State::zero();
        if let (Some(l), true) = (alg.lattice(), a.sector != 0) {
            let t = fock.apply(Mode::int(l.charge, -1), &State::from_monomial(vac.clone()));
            tail.add_scaled(&t, &Scalar::from_int(a.sector));
        }
        out.add_scaled(&self.apply_word(&a.word, &tail), &Scalar::one());
        for (i, x) in a.word.iter().enumerate() {
            let c = -x.n - alg.weight(x.gen) + Half::ONE;
            if c == Half::ZERO {
                continue;
            }
            let mut word = a.word.clone();
            word[i] = Mode::new(x.gen, x.n - Half::ONE);
            let t = self.apply_word(&word, &State::from_monomial(vac.clone()));
            out.add_scaled(&t, &c.to_scalar());
        }
        out
    }

    fn apply_word(&self, word: &[Mode], s: &State) -> State {
        let mut s = s.clone();
        for x in word.iter().rev() {
            if s.is_zero() {
                break;
            }
            s = self.fock.apply(*x, &s);
        }
        s
    }

    /// `<phi, A_n B>` for each `n` in `window`; the functional pairs
    /// monomial coefficients.
    pub fn matrix_elements(
        &self,
        a: &State,
        b: &State,
        phi: &State,
        window: impl IntoIterator<Item = Half>,
    ) -> BTreeMap<Half, Scalar> {
        window
            .into_iter()
            .map(|n| (n, pair(phi, &self.mode_apply(a, n, b))))
            .collect()
    }

    /// The field of a state as a sum of right-nested normally ordered
    /// products of derivatives of generator fields.
    pub fn field_of_state(&self, a: &State) -> Result<FieldSum> {
        expr::field_of_state(self.algebra(), a)
    }
}

/// The pairing `sum_m phi_m v_m` of a functional with a state.
pub fn pair(phi: &State, v: &State) -> Scalar {
    let mut acc = Scalar::zero();
    for (m, c) in phi.iter() {
        let d = v.coefficient(m);
        if !d.is_zero() {
            acc += &(c * &d);
        }
    }
    acc
}

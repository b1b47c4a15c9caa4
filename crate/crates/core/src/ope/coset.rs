use std::collections::BTreeMap;

use super::degree_of;
use crate::fields::VertexAlgebra;
use crate::fock::{Monomial, State};
use crate::half::Half;
use crate::linalg;
use crate::scalars::Scalar;

/// Nonnegative-pole modes `A_n`, `n > -deg A`, that can act nonzero on degree `d`.
fn regular_modes(va: &VertexAlgebra, a: &State, d: Half) -> Vec<Half> {
    let da = degree_of(va, a);
    let mut out = Vec::new();
    let mut n = -da + Half::ONE;
    while n <= d {
        out.push(n);
        n += Half::ONE;
    }
    out
}

fn kernel(va: &VertexAlgebra, wgens: &[State], basis: &[Monomial], d: Half) -> Vec<State> {
    // one row per (A, n, output monomial)
    let mut rows: BTreeMap<(usize, Half, Monomial), Vec<Scalar>> = BTreeMap::new();
    for (col, m) in basis.iter().enumerate() {
        let v = State::from_monomial(m.clone());
        for (ai, a) in wgens.iter().enumerate() {
            for n in regular_modes(va, a, d) {
                for (out, c) in va.mode_apply(a, n, &v).iter() {
                    rows.entry((ai, n, out.clone()))
                        .or_insert_with(|| vec![Scalar::zero(); basis.len()])[col] = c.clone();
                }
            }
        }
    }
    let matrix: linalg::Matrix = rows.into_values().collect();
    linalg::nullspace(&matrix, basis.len())
        .into_iter()
        .map(|vec| {
            let mut s = State::zero();
            for (m, c) in basis.iter().zip(vec) {
                s.add_term(m.clone(), c);
            }
            s
        })
        .collect()
}

/// Basis of the degree-`d` part of the commutant of the fields of `wgens`:
/// states `v` with `A_n v = 0` for all `A` in `wgens` and `n > -deg A`.
pub fn coset_graded(va: &VertexAlgebra, wgens: &[State], d: Half) -> Vec<State> {
    let basis = va.fock().basis_all(d);
    kernel(va, wgens, &basis, d)
}

/// Degree-`d` part of the center: the commutant of the generating fields.
pub fn center(va: &VertexAlgebra, d: Half) -> Vec<State> {
    let fock = va.fock();
    let alg = va.algebra();
    let gens: Vec<State> = (0..alg.generators().len())
        .map(|g| {
            fock.apply(
                crate::fock::Mode::new(g, -alg.weight(g)),
                &State::vacuum(),
            )
        })
        .collect();
    coset_graded(va, &gens, d)
}

/// Check that normally ordered products `A_{-deg A} B` of pairs of `wgens`
/// also act regularly on every state of `basis`.
pub fn coset_composite_check(va: &VertexAlgebra, wgens: &[State], basis: &[State]) -> bool {
    for a in wgens {
        for b in wgens {
            let ab = va.mode_apply(a, -degree_of(va, a), b);
            if ab.is_zero() {
                continue;
            }
            for v in basis {
                let d = degree_of(va, v);
                for n in regular_modes(va, &ab, d) {
                    if !va.mode_apply(&ab, n, v).is_zero() {
                        return false;
                    }
                }
            }
        }
    }
    true
}

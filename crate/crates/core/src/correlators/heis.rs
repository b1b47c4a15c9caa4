use std::collections::BTreeMap;

use serde::Serialize;

use super::{Poles, RationalCorrelator};
use crate::error::{Error, Result};
use crate::fields::pair;
use crate::fock::{Fock, Mode, State};
use crate::half::Half;
use crate::linalg;
use crate::presets;
use crate::scalars::{Poly, Rational, Scalar};

fn heisenberg_instance() -> presets::AlgebraInstance {
    presets::heisenberg(Scalar::zero())
}

fn rational_of(s: &Scalar) -> Result<Rational> {
    s.as_rational()
        .cloned()
        .ok_or_else(|| Error::Unsupported(format!("functional coefficient {s} is not a number")))
}

fn max_degree(fock: &Fock, phi: &State) -> i64 {
    phi.monomials().map(|m| fock.degree(m).floor()).max().unwrap_or(-1)
}

/// `phi(prod_k b_-(z_k) |0>)` where `b_-(z) = sum_{m>=0} b_{-m-1} z^m`.
fn creation_polynomial(fock: &Fock, phi: &State, labels: &[usize], budget: i64) -> Result<Poly> {
    fn go(
        fock: &Fock,
        phi: &State,
        labels: &[usize],
        budget: i64,
        state: &State,
        mono: &Poly,
        acc: &mut Poly,
    ) -> Result<()> {
        let Some((&k, rest)) = labels.split_first() else {
            let c = rational_of(&pair(phi, state))?;
            *acc = acc.add(&mono.scale(&c));
            return Ok(());
        };
        let reserve = rest.len() as i64;
        for m in 0..=(budget - 1 - reserve) {
            let next = fock.apply(Mode::int(0, -m - 1), state);
            let z = Poly::var(&super::zvar(k)).pow(m as u32);
            go(fock, phi, rest, budget - m - 1, &next, &mono.mul(&z), acc)?;
        }
        Ok(())
    }
    let mut acc = Poly::zero();
    if labels.len() as i64 > budget {
        return Ok(acc);
    }
    go(fock, phi, labels, budget, &State::vacuum(), &Poly::one(), &mut acc)?;
    Ok(acc)
}

/// Partial matchings of `labels`, each as (pairs, unmatched), in a fixed order.
type Matching = (Vec<(usize, usize)>, Vec<usize>);

fn matchings(labels: &[usize]) -> Vec<Matching> {
    let Some((&first, rest)) = labels.split_first() else {
        return vec![(Vec::new(), Vec::new())];
    };
    let mut out = Vec::new();
    for (mut pairs, mut free) in matchings(rest) {
        free.insert(0, first);
        pairs.sort_unstable();
        out.push((pairs, free));
    }
    for (idx, &partner) in rest.iter().enumerate() {
        let mut others = rest.to_vec();
        others.remove(idx);
        for (mut pairs, free) in matchings(&others) {
            pairs.insert(0, (first, partner));
            out.push((pairs, free));
        }
    }
    out
}

/// `phi(b(z_{l_1}) ... b(z_{l_n}) |0>)` on the Heisenberg algebra, as a sum
/// over partial Wick contractions `1/(z_i - z_j)^2` times the creation
/// polynomial of the uncontracted variables.
pub fn heisenberg_npoint_on(phi: &State, labels: &[usize]) -> Result<RationalCorrelator> {
    let inst = heisenberg_instance();
    let fock = inst.fock();
    let dmax = max_degree(fock, phi);
    let mut vars = labels.to_vec();
    vars.sort_unstable();
    let mut out = RationalCorrelator::zero(vars.clone());
    for (pairs, free) in matchings(labels) {
        let num = creation_polynomial(fock, phi, &free, dmax)?;
        if num.is_zero() {
            continue;
        }
        let poles: Poles = pairs.iter().map(|&(i, j)| ((i.min(j), i.max(j)), 2)).collect();
        out.terms.push(super::CorrelatorTerm { numerator: num, poles });
    }
    Ok(out)
}

/// `heisenberg_npoint_on` for the variables `z_1 .. z_n`.
pub fn heisenberg_npoint(phi: &State, n: usize) -> Result<RationalCorrelator> {
    heisenberg_npoint_on(phi, &(1..=n).collect::<Vec<_>>())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BootstrapReport {
    pub passed: bool,
    pub cases: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// For every `n <= nmax` and ordered pair `i != j`: as `z_i -> z_j` the
/// `n`-point function has at most a double pole, no simple pole, and the
/// double-pole coefficient is the `(n-2)`-point function of the other
/// variables.
pub fn bootstrap_verify(phi: &State, nmax: usize) -> Result<BootstrapReport> {
    let mut cases = 0;
    for n in 2..=nmax {
        let labels: Vec<usize> = (1..=n).collect();
        let f = heisenberg_npoint(phi, n)?;
        for &i in &labels {
            for &j in &labels {
                if i == j {
                    continue;
                }
                cases += 1;
                let rest: Vec<usize> = labels.iter().copied().filter(|&k| k != i && k != j).collect();
                let expected = heisenberg_npoint_on(phi, &rest)?;
                let c2 = f.laurent_coefficient(i, j, 2);
                let fail = |what: &str, got: &RationalCorrelator| {
                    Ok(BootstrapReport {
                        passed: false,
                        cases,
                        witness: Some(format!("n = {n}, z{i} -> z{j}: {what} is {}", got.render())),
                    })
                };
                if c2 != expected {
                    return fail("the double-pole coefficient", &c2);
                }
                let c1 = f.laurent_coefficient(i, j, 1);
                if !c1.is_zero() {
                    return fail("the simple-pole coefficient", &c1);
                }
                let c3 = f.laurent_coefficient(i, j, 3);
                if !c3.is_zero() {
                    return fail("the cubic-pole coefficient", &c3);
                }
            }
        }
    }
    Ok(BootstrapReport {
        passed: true,
        cases,
        witness: None,
    })
}

/// Rank of the map sending each basis functional of degree `<= d` to its
/// family of `n`-point functions, `n <= nmax`, next to the number of such
/// functionals.
pub fn functional_realization_rank(d: i64, nmax: usize) -> Result<(usize, usize)> {
    let inst = heisenberg_instance();
    let basis = inst.fock().basis_up_to(Half::from_int(d));
    let mut columns: BTreeMap<(usize, String), usize> = BTreeMap::new();
    let mut rows: Vec<BTreeMap<usize, Scalar>> = Vec::new();
    for mono in &basis {
        let phi = State::from_monomial(mono.clone());
        let mut row = BTreeMap::new();
        for n in 0..=nmax {
            let f = heisenberg_npoint(&phi, n)?;
            for (m, c) in f.numerator_over(2).terms() {
                let next = columns.len();
                let col = *columns.entry((n, m.to_string())).or_insert(next);
                row.insert(col, Scalar::from_rational(c.clone()));
            }
        }
        rows.push(row);
    }
    let ncols = columns.len();
    let matrix: linalg::Matrix = rows
        .into_iter()
        .map(|r| (0..ncols).map(|c| r.get(&c).cloned().unwrap_or_default()).collect())
        .collect();
    Ok((linalg::rank(&matrix, ncols), basis.len()))
}

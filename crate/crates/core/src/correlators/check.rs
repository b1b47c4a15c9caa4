use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::{diff, zvar, ExpansionRegion, Poles, RationalCorrelator, Window};
use crate::error::{Error, Result};
use crate::fields::{pair, VertexAlgebra};
use crate::fock::State;
use crate::half::Half;
use crate::ope::{degree_of, odd, singular_part};
use crate::scalars::{Monom, Poly, Rational};

fn homogeneous_degree(va: &VertexAlgebra, s: &State) -> Result<Half> {
    if s.is_zero() {
        return Ok(Half::ZERO);
    }
    va.fock()
        .state_degree(s)
        .ok_or_else(|| Error::Unsupported("correlator insertions must be homogeneous".into()))
}

/// Sign of reordering the insertions `1..n` into `order`.
fn koszul_sign(va: &VertexAlgebra, states: &[State], order: &[usize]) -> Rational {
    let mut sign = 1i64;
    for a in 0..order.len() {
        for b in a + 1..order.len() {
            let (x, y) = (order[a], order[b]);
            if x > y && odd(va, &states[x - 1]) && odd(va, &states[y - 1]) {
                sign = -sign;
            }
        }
    }
    Rational::from_integer(sign.into())
}

/// Coefficients of `phi(Y(A_{o_1}, z_{o_1}) ... Y(A_{o_n}, z_{o_n}) |0>)`,
/// `o` the region order and `A_k = states[k-1]`, for exponent vectors in
/// `window`; entry `k-1` of a key is the exponent of `z_k`.
pub fn matrix_series(
    va: &VertexAlgebra,
    states: &[State],
    phi: &State,
    region: &ExpansionRegion,
    window: &Window,
) -> Result<BTreeMap<Vec<i64>, Rational>> {
    let n = states.len();
    let vars: Vec<usize> = (1..=n).collect();
    region.validate(&vars)?;
    let dmax = phi
        .monomials()
        .map(|m| va.fock().degree(m))
        .max()
        .unwrap_or(Half::ZERO);
    let deltas: Vec<Half> = states.iter().map(|s| homogeneous_degree(va, s)).collect::<Result<_>>()?;
    let o = &region.order;
    // largest degree the outer k insertions can still remove
    let mut lowering = vec![Half::ZERO; n + 1];
    for k in 0..n {
        let v = o[k];
        let m_max = -Half::from_int(window.get(v).0) - deltas[v - 1];
        lowering[k + 1] = lowering[k] + m_max.max(Half::ZERO);
    }
    let mut out = BTreeMap::new();
    let mut exps = vec![0i64; n];
    #[allow(clippy::too_many_arguments)]
    fn go(
        va: &VertexAlgebra,
        states: &[State],
        deltas: &[Half],
        phi: &State,
        o: &[usize],
        window: &Window,
        lowering: &[Half],
        dmax: Half,
        k: usize,
        s: &State,
        exps: &mut Vec<i64>,
        out: &mut BTreeMap<Vec<i64>, Rational>,
    ) -> Result<()> {
        if k == 0 {
            let c = pair(phi, s);
            if !c.is_zero() {
                let c = c
                    .as_rational()
                    .cloned()
                    .ok_or_else(|| Error::Unsupported(format!("matrix element {c} is not a number")))?;
                out.insert(exps.clone(), c);
            }
            return Ok(());
        }
        let v = o[k - 1];
        let (lo, hi) = window.get(v);
        let a = &states[v - 1];
        for p in lo..=hi {
            let m = -Half::from_int(p) - deltas[v - 1];
            let t = va.mode_apply(a, m, s);
            if t.is_zero() {
                continue;
            }
            if degree_of(va, &t) - lowering[k - 1] > dmax {
                break;
            }
            exps[v - 1] = p;
            go(va, states, deltas, phi, o, window, lowering, dmax, k - 1, &t, exps, out)?;
        }
        exps[v - 1] = 0;
        Ok(())
    }
    go(
        va,
        states,
        &deltas,
        phi,
        o,
        window,
        &lowering,
        dmax,
        n,
        &State::vacuum(),
        &mut exps,
        &mut out,
    )?;
    Ok(out)
}

fn exponent_vector(m: &Monom, n: usize) -> Vec<i64> {
    (1..=n).map(|k| m.exponent(&zvar(k)) as i64).collect()
}

/// The rational function whose expansion in `|z_1| > ... > |z_n|` gives the
/// matrix elements: multiply the series by `prod (z_i - z_j)^{N_ij}`, with
/// `N_ij` the pole order of the two insertions, and read off a polynomial.
/// The second value describes any nonzero coefficient at a negative
/// exponent, which would contradict locality.
pub fn reconstruct(va: &VertexAlgebra, states: &[State], phi: &State) -> Result<(RationalCorrelator, Option<String>)> {
    let n = states.len();
    let vars: Vec<usize> = (1..=n).collect();
    let mut poles: Poles = BTreeMap::new();
    let mut den = Poly::one();
    let mut reach = vec![0i64; n + 1];
    for i in 1..=n {
        for j in i + 1..=n {
            let order = singular_part(va, &states[i - 1], &states[j - 1]).max_order();
            if order > 0 {
                poles.insert((i, j), order as u32);
                den = den.mul(&diff(i, j).pow(order as u32));
                reach[i] += order;
                reach[j] += order;
            }
        }
    }
    let mut sum_delta = Half::ZERO;
    for s in states {
        sum_delta += homogeneous_degree(va, s)?;
    }
    let dmax = phi
        .monomials()
        .map(|m| va.fock().degree(m))
        .max()
        .unwrap_or(Half::ZERO);
    let top = (dmax - sum_delta).floor() + poles.values().map(|m| *m as i64).sum::<i64>();
    if top < 0 || phi.is_zero() {
        return Ok((RationalCorrelator::zero(vars), None));
    }
    let window = Window {
        bounds: (1..=n).map(|v| (v, (-1 - reach[v], top))).collect(),
    };
    let series = matrix_series(va, states, phi, &ExpansionRegion::new(vars.clone()), &window)?;
    let mut product: BTreeMap<Vec<i64>, Rational> = BTreeMap::new();
    for (p, c) in &series {
        for (m, d) in den.terms() {
            let dv = exponent_vector(m, n);
            let e: Vec<i64> = p.iter().zip(&dv).map(|(a, b)| a + b).collect();
            if e.iter().all(|&x| (-1..=top).contains(&x)) {
                *product.entry(e).or_insert_with(Rational::zero) += c * d;
            }
        }
    }
    product.retain(|_, c| !c.is_zero());
    if let Some((e, c)) = product.iter().find(|(e, _)| e.iter().any(|&x| x < 0)) {
        let witness = format!("coefficient {c} at exponents {e:?} after clearing diagonal poles");
        return Ok((RationalCorrelator::zero(vars), Some(witness)));
    }
    let numerator = Poly::from_terms(product.into_iter().map(|(e, c)| {
        let m = Monom::from_pairs(
            e.iter()
                .enumerate()
                .filter(|(_, x)| **x > 0)
                .map(|(k, x)| (zvar(k + 1).into(), *x as u32)),
        );
        (m, c)
    }));
    let f = RationalCorrelator::from_term(vars, numerator, poles).simplified();
    Ok((f, None))
}

/// Compare, in each region, the matrix elements (with the sign of
/// reordering odd insertions) against the expansion of `f`. Returns the
/// number of coefficients compared and the first disagreement.
pub fn region_check(
    va: &VertexAlgebra,
    states: &[State],
    phi: &State,
    f: &RationalCorrelator,
    regions: &[ExpansionRegion],
    window: &Window,
) -> Result<(usize, Option<String>)> {
    let mut count = 0;
    for region in regions {
        let sign = koszul_sign(va, states, &region.order);
        let series = matrix_series(va, states, phi, region, window)?;
        let expected = f.expand(region, window)?;
        let mut keys: Vec<&Vec<i64>> = series.keys().chain(expected.keys()).collect();
        keys.sort();
        keys.dedup();
        count += keys.len();
        for k in keys {
            let got = series.get(k).map(|c| c * &sign).unwrap_or_else(Rational::zero);
            let want = expected.get(k).cloned().unwrap_or_else(Rational::zero);
            if got != want {
                return Ok((
                    count,
                    Some(format!(
                        "region {:?}, exponents {k:?}: matrix element {got}, expansion {want}",
                        region.order
                    )),
                ));
            }
        }
    }
    Ok((count, None))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorrelatorReport {
    pub passed: bool,
    pub correlator: String,
    pub regions: usize,
    pub coefficients: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

/// Reconstruct the correlator of `states` under `phi`, check that its
/// expansion reproduces the matrix elements in every listed region (all
/// orderings when `regions` is empty), and check
/// `d/dz_i f(A_1, ..., A_n) = f(A_1, ..., T A_i, ..., A_n)`.
pub fn consistency_check(
    va: &VertexAlgebra,
    states: &[State],
    phi: &State,
    regions: &[ExpansionRegion],
    radius: i64,
) -> Result<CorrelatorReport> {
    let n = states.len();
    let vars: Vec<usize> = (1..=n).collect();
    let all;
    let regions = if regions.is_empty() {
        all = ExpansionRegion::all(&vars);
        &all[..]
    } else {
        regions
    };
    let (f, bad) = reconstruct(va, states, phi)?;
    let report = |coefficients, witness: Option<String>| CorrelatorReport {
        passed: witness.is_none(),
        correlator: f.render(),
        regions: regions.len(),
        coefficients,
        witness,
    };
    if bad.is_some() {
        return Ok(report(0, bad));
    }
    let window = Window::uniform(&vars, -radius, radius);
    let (count, witness) = region_check(va, states, phi, &f, regions, &window)?;
    if witness.is_some() {
        return Ok(report(count, witness));
    }
    for i in 1..=n {
        let mut moved = states.to_vec();
        moved[i - 1] = va.translation(&states[i - 1]);
        let (g, bad) = reconstruct(va, &moved, phi)?;
        if bad.is_some() {
            return Ok(report(count, bad));
        }
        let df = f.derivative(i);
        if g != df {
            return Ok(report(
                count,
                Some(format!(
                    "d/dz{i} gives {} but inserting T A_{i} gives {}",
                    df.simplified().render(),
                    g.render()
                )),
            ));
        }
    }
    Ok(report(count, None))
}

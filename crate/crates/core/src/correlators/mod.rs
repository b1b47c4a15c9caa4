//! Chiral correlation functions on the formal disc: rational functions with
//! poles only on the diagonals `z_i = z_j`, their expansions in the regions
//! `|z_a| > |z_b| > ...`, and checks against mode-by-mode matrix elements.

mod check;
mod heis;

use std::collections::BTreeMap;

use num_traits::{One, Zero};
use serde_json::json;

pub use check::{consistency_check, matrix_series, reconstruct, region_check, CorrelatorReport};
pub use heis::{bootstrap_verify, functional_realization_rank, heisenberg_npoint, heisenberg_npoint_on, BootstrapReport};

use crate::error::{Error, Result};
use crate::scalars::{binomial, Poly, Rational};

pub(crate) fn zvar(i: usize) -> String {
    format!("z{i}")
}

fn zpoly(i: usize) -> Poly {
    Poly::var(&zvar(i))
}

/// `z_a - z_b`.
fn diff(a: usize, b: usize) -> Poly {
    zpoly(a).sub(&zpoly(b))
}

fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

/// Pole multiplicities `m_ij` of `prod_{i<j} (z_i - z_j)^{-m_ij}`.
pub type Poles = BTreeMap<(usize, usize), u32>;

/// Add `(z_a - z_b)^{-m}` to `poles`, returning the sign picked up when
/// `a > b` is reoriented.
fn add_pole(poles: &mut Poles, a: usize, b: usize, m: u32) -> Rational {
    if m == 0 {
        return Rational::one();
    }
    let (key, sign) = if a < b { ((a, b), 1) } else { ((b, a), if m.is_multiple_of(2) { 1 } else { -1 }) };
    *poles.entry(key).or_insert(0) += m;
    rat(sign)
}

/// `numerator / prod (z_i - z_j)^{m_ij}`.
#[derive(Clone, Debug)]
pub struct CorrelatorTerm {
    pub numerator: Poly,
    pub poles: Poles,
}

impl CorrelatorTerm {
    fn render(&self) -> String {
        let den: Vec<String> = self
            .poles
            .iter()
            .filter(|(_, m)| **m > 0)
            .map(|((i, j), m)| {
                if *m == 1 {
                    format!("(z{i}-z{j})")
                } else {
                    format!("(z{i}-z{j})^{m}")
                }
            })
            .collect();
        let num = self.numerator.to_string();
        let num = if self.numerator.terms().len() > 1 { format!("({num})") } else { num };
        match den.len() {
            0 => num,
            1 => format!("{num}/{}", den[0]),
            _ => format!("{num}/({})", den.join("*")),
        }
    }
}

/// A sum of terms in the variables `z_i`, `i` in `vars`.
#[derive(Clone, Debug)]
pub struct RationalCorrelator {
    pub vars: Vec<usize>,
    pub terms: Vec<CorrelatorTerm>,
}

impl PartialEq for RationalCorrelator {
    fn eq(&self, other: &RationalCorrelator) -> bool {
        if self.grouped() == other.grouped() {
            return true;
        }
        let (a, b) = (self.combined(), other.combined());
        a.numerator == b.numerator && a.poles == b.poles
    }
}

impl RationalCorrelator {
    pub fn zero(vars: Vec<usize>) -> RationalCorrelator {
        RationalCorrelator { vars, terms: Vec::new() }
    }

    pub fn from_term(vars: Vec<usize>, numerator: Poly, poles: Poles) -> RationalCorrelator {
        RationalCorrelator {
            vars,
            terms: vec![CorrelatorTerm { numerator, poles }],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.combined().numerator.is_zero()
    }

    /// Numerators summed per denominator; equal groupings mean equal
    /// functions, though not conversely.
    fn grouped(&self) -> BTreeMap<Poles, Poly> {
        let mut out: BTreeMap<Poles, Poly> = BTreeMap::new();
        for t in &self.terms {
            let mut poles = t.poles.clone();
            poles.retain(|_, m| *m > 0);
            let e = out.entry(poles).or_default();
            *e = e.add(&t.numerator);
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// Numerator over `prod_{i<j} (z_i - z_j)^{m}` for a fixed `m` at least
    /// every pole order.
    pub fn numerator_over(&self, m: u32) -> Poly {
        let mut acc = Poly::zero();
        for t in &self.terms {
            let mut n = t.numerator.clone();
            for (a, &i) in self.vars.iter().enumerate() {
                for &j in &self.vars[a + 1..] {
                    let have = t.poles.get(&(i, j)).copied().unwrap_or(0);
                    n = n.mul(&diff(i, j).pow(m - have));
                }
            }
            acc = acc.add(&n);
        }
        acc
    }

    /// One fraction over the least common diagonal denominator, with every
    /// diagonal factor dividing the numerator cancelled.
    pub fn combined(&self) -> CorrelatorTerm {
        let mut poles: Poles = BTreeMap::new();
        for t in &self.terms {
            for (k, m) in &t.poles {
                let e = poles.entry(*k).or_insert(0);
                *e = (*e).max(*m);
            }
        }
        let mut numerator = Poly::zero();
        for t in &self.terms {
            let mut n = t.numerator.clone();
            for (&(i, j), &m) in &poles {
                let have = t.poles.get(&(i, j)).copied().unwrap_or(0);
                n = n.mul(&diff(i, j).pow(m - have));
            }
            numerator = numerator.add(&n);
        }
        if numerator.is_zero() {
            return CorrelatorTerm {
                numerator,
                poles: BTreeMap::new(),
            };
        }
        for (&(i, j), m) in poles.iter_mut() {
            let d = diff(i, j);
            while *m > 0 {
                match numerator.div_exact(&d) {
                    Some(q) => {
                        numerator = q;
                        *m -= 1;
                    }
                    None => break,
                }
            }
        }
        poles.retain(|_, m| *m > 0);
        CorrelatorTerm { numerator, poles }
    }

    /// The same function as a single reduced term.
    pub fn simplified(&self) -> RationalCorrelator {
        let t = self.combined();
        if t.numerator.is_zero() {
            return RationalCorrelator::zero(self.vars.clone());
        }
        RationalCorrelator {
            vars: self.vars.clone(),
            terms: vec![t],
        }
    }

    pub fn add(&self, other: &RationalCorrelator) -> RationalCorrelator {
        let mut vars = self.vars.clone();
        for v in &other.vars {
            if !vars.contains(v) {
                vars.push(*v);
            }
        }
        vars.sort_unstable();
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        RationalCorrelator { vars, terms }
    }

    pub fn scale(&self, k: &Rational) -> RationalCorrelator {
        RationalCorrelator {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|t| CorrelatorTerm {
                    numerator: t.numerator.scale(k),
                    poles: t.poles.clone(),
                })
                .collect(),
        }
    }

    /// Relabel `z_i` as `z_{perm[i]}`.
    pub fn relabel(&self, perm: &BTreeMap<usize, usize>) -> RationalCorrelator {
        let get = |i: usize| perm.get(&i).copied().unwrap_or(i);
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let mut num = t.numerator.clone();
                for &i in &self.vars {
                    num = num.substitute(&zvar(i), &Poly::var(&format!("#{}", get(i))));
                }
                for &i in &self.vars {
                    num = num.substitute(&format!("#{}", get(i)), &zpoly(get(i)));
                }
                let mut poles = BTreeMap::new();
                let mut sign = Rational::one();
                for (&(i, j), &m) in &t.poles {
                    sign *= add_pole(&mut poles, get(i), get(j), m);
                }
                CorrelatorTerm {
                    numerator: num.scale(&sign),
                    poles,
                }
            })
            .collect();
        let mut vars: Vec<usize> = self.vars.iter().map(|&i| get(i)).collect();
        vars.sort_unstable();
        RationalCorrelator { vars, terms }
    }

    /// `d/dz_i`.
    pub fn derivative(&self, i: usize) -> RationalCorrelator {
        let mut terms = Vec::new();
        for t in &self.terms {
            terms.push(CorrelatorTerm {
                numerator: t.numerator.derivative(&zvar(i)),
                poles: t.poles.clone(),
            });
            for (&(a, b), &m) in &t.poles {
                if a != i && b != i {
                    continue;
                }
                // d/dz_a (z_a - z_b)^{-m} = -m (z_a - z_b)^{-m-1}
                let k = if a == i { rat(-(m as i64)) } else { rat(m as i64) };
                let mut poles = t.poles.clone();
                *poles.get_mut(&(a, b)).expect("present") += 1;
                terms.push(CorrelatorTerm {
                    numerator: t.numerator.scale(&k),
                    poles,
                });
            }
        }
        RationalCorrelator {
            vars: self.vars.clone(),
            terms,
        }
    }

    /// Largest pole order along `z_i = z_j`.
    pub fn pole_order(&self, i: usize, j: usize) -> u32 {
        let key = (i.min(j), i.max(j));
        self.combined().poles.get(&key).copied().unwrap_or(0)
    }

    /// Coefficient of `(z_i - z_j)^{-r}` in the Laurent expansion as `z_i`
    /// approaches `z_j`, a function of the remaining variables.
    pub fn laurent_coefficient(&self, i: usize, j: usize, r: i64) -> RationalCorrelator {
        let vars: Vec<usize> = self.vars.iter().copied().filter(|&v| v != i).collect();
        let mut out = RationalCorrelator::zero(vars.clone());
        let shifted = zpoly(j).add(&Poly::var("#x"));
        for t in &self.terms {
            // factors touching z_i become powers of (z_j - z_k + x)
            let mut m_ij: i64 = 0;
            let mut base: Poles = BTreeMap::new();
            let mut sign = Rational::one();
            let mut near: Vec<(usize, u32)> = Vec::new();
            for (&(a, b), &m) in &t.poles {
                if (a, b) == (i.min(j), i.max(j)) {
                    m_ij = m as i64;
                    if i > j && m % 2 == 1 {
                        sign = -sign;
                    }
                } else if a == i || b == i {
                    let k = if a == i { b } else { a };
                    if a != i && m % 2 == 1 {
                        sign = -sign;
                    }
                    near.push((k, m));
                } else {
                    base.insert((a, b), m);
                }
            }
            let need = m_ij - r;
            if need < 0 {
                continue;
            }
            let num = t.numerator.substitute(&zvar(i), &shifted).scale(&sign);
            let num_x = num.coeffs_in("#x");
            // distribute the x-power `need` over the numerator and the near factors
            let mut acc: Vec<(usize, Poly, Poles, Rational)> = Vec::new();
            for (e, c) in num_x.iter().enumerate() {
                if (e as i64) <= need && !c.is_zero() {
                    acc.push((e, c.clone(), base.clone(), Rational::one()));
                }
            }
            for &(k, m) in &near {
                let mut next = Vec::new();
                for (used, c, poles, coeff) in &acc {
                    for l in 0..=(need as usize - used) {
                        // (z_j - z_k + x)^{-m} = sum_l binom(-m, l) x^l (z_j - z_k)^{-m-l}
                        let b = binomial(-(m as i64), l as i64);
                        let mut p = poles.clone();
                        let s = add_pole(&mut p, j, k, m + l as u32);
                        next.push((used + l, c.clone(), p, coeff * &b * s));
                    }
                }
                acc = next;
            }
            for (used, c, poles, coeff) in acc {
                if used as i64 == need {
                    out.terms.push(CorrelatorTerm {
                        numerator: c.scale(&coeff),
                        poles,
                    });
                }
            }
        }
        out
    }

    /// Expansion in `region`, keeping exponents inside `window`.
    pub fn expand(&self, region: &ExpansionRegion, window: &Window) -> Result<BTreeMap<Vec<i64>, Rational>> {
        region.validate(&self.vars)?;
        let mut out = BTreeMap::new();
        let terms: Vec<(Poly, Poles)> = self.terms.iter().map(|t| (t.numerator.clone(), t.poles.clone())).collect();
        expand_rec(&terms, &region.order, 0, window, &mut vec![0; self.vars.len()], &self.vars, &mut out);
        out.retain(|_, c: &mut Rational| !c.is_zero());
        Ok(out)
    }

    pub fn render(&self) -> String {
        let parts: Vec<String> = self
            .terms
            .iter()
            .filter(|t| !t.numerator.is_zero())
            .map(CorrelatorTerm::render)
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: Vec<serde_json::Value> = self
            .terms
            .iter()
            .map(|t| {
                let poles: Vec<serde_json::Value> = t
                    .poles
                    .iter()
                    .map(|((i, j), m)| json!({"i": i, "j": j, "order": m}))
                    .collect();
                json!({"numerator": t.numerator.to_string(), "poles": poles})
            })
            .collect();
        json!({"variables": self.vars.iter().map(|i| zvar(*i)).collect::<Vec<_>>(), "terms": terms})
    }
}

/// Variables from outermost to innermost: `|z_{order[0]}| > |z_{order[1]}| > ...`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExpansionRegion {
    pub order: Vec<usize>,
}

impl ExpansionRegion {
    pub fn new(order: Vec<usize>) -> ExpansionRegion {
        ExpansionRegion { order }
    }

    fn validate(&self, vars: &[usize]) -> Result<()> {
        let mut a = self.order.clone();
        a.sort_unstable();
        let mut b = vars.to_vec();
        b.sort_unstable();
        if a != b {
            return Err(Error::Unsupported(format!(
                "region {:?} is not an ordering of the variables {:?}",
                self.order, vars
            )));
        }
        Ok(())
    }

    /// Every ordering of `vars`, in lexicographic order.
    pub fn all(vars: &[usize]) -> Vec<ExpansionRegion> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        let mut used = vec![false; vars.len()];
        fn go(vars: &[usize], used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<ExpansionRegion>) {
            if cur.len() == vars.len() {
                out.push(ExpansionRegion::new(cur.clone()));
                return;
            }
            for k in 0..vars.len() {
                if !used[k] {
                    used[k] = true;
                    cur.push(vars[k]);
                    go(vars, used, cur, out);
                    cur.pop();
                    used[k] = false;
                }
            }
        }
        go(vars, &mut used, &mut cur, &mut out);
        out
    }
}

/// Inclusive exponent bounds per variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub bounds: BTreeMap<usize, (i64, i64)>,
}

impl Window {
    pub fn uniform(vars: &[usize], lo: i64, hi: i64) -> Window {
        Window {
            bounds: vars.iter().map(|&v| (v, (lo, hi))).collect(),
        }
    }

    pub fn get(&self, v: usize) -> (i64, i64) {
        self.bounds[&v]
    }
}

fn expand_rec(
    terms: &[(Poly, Poles)],
    order: &[usize],
    depth: usize,
    window: &Window,
    exps: &mut Vec<i64>,
    vars: &[usize],
    out: &mut BTreeMap<Vec<i64>, Rational>,
) {
    if depth == order.len() {
        let mut total = Rational::zero();
        for (p, _) in terms {
            total += p.as_constant().expect("all variables consumed");
        }
        *out.entry(exps.clone()).or_insert_with(Rational::zero) += total;
        return;
    }
    let v = order[depth];
    let (lo, hi) = window.get(v);
    let slot = vars.iter().position(|&x| x == v).expect("variable in region");
    // coefficient of z_v^e, grouped by the remaining poles
    let mut by_e: BTreeMap<i64, BTreeMap<Poles, Poly>> = BTreeMap::new();
    for (num, poles) in terms {
        let mut rest: Poles = BTreeMap::new();
        let mut inner: Vec<(usize, u32)> = Vec::new();
        let mut sign = Rational::one();
        for (&(a, b), &m) in poles {
            if a == v || b == v {
                let w = if a == v { b } else { a };
                // orient as (z_v - z_w)
                if b == v && m % 2 == 1 {
                    sign = -sign;
                }
                inner.push((w, m));
            } else {
                rest.insert((a, b), m);
            }
        }
        let big_m: i64 = inner.iter().map(|(_, m)| *m as i64).sum();
        let coeffs = num.coeffs_in(&zvar(v));
        for (a, na) in coeffs.iter().enumerate() {
            if na.is_zero() {
                continue;
            }
            let a = a as i64;
            let top = a - big_m;
            for e in lo..=hi.min(top) {
                let k = (top - e) as usize;
                let h = complete_sum(&inner, k);
                if h.is_zero() {
                    continue;
                }
                let entry = by_e.entry(e).or_default().entry(rest.clone()).or_insert_with(Poly::zero);
                *entry = entry.add(&na.mul(&h).scale(&sign));
            }
        }
    }
    for (e, groups) in by_e {
        let next: Vec<(Poly, Poles)> = groups
            .into_iter()
            .filter(|(_, p)| !p.is_zero())
            .map(|(poles, p)| (p, poles))
            .collect();
        if next.is_empty() {
            continue;
        }
        exps[slot] = e;
        expand_rec(&next, order, depth + 1, window, exps, vars, out);
    }
    exps[slot] = 0;
}

/// `sum_{|k| = total} prod_w binom(m_w + k_w - 1, k_w) z_w^{k_w}`, the
/// degree-`total` part of `prod_w (1 - z_w / z_v)^{-m_w}`.
fn complete_sum(inner: &[(usize, u32)], total: usize) -> Poly {
    fn go(inner: &[(usize, u32)], total: usize) -> Poly {
        match inner.split_first() {
            None => {
                if total == 0 {
                    Poly::one()
                } else {
                    Poly::zero()
                }
            }
            Some((&(w, m), rest)) => {
                let mut acc = Poly::zero();
                for k in 0..=total {
                    let c = binomial(m as i64 + k as i64 - 1, k as i64);
                    if c.is_zero() {
                        continue;
                    }
                    let tail = go(rest, total - k);
                    if tail.is_zero() {
                        continue;
                    }
                    acc = acc.add(&zpoly(w).pow(k as u32).mul(&tail).scale(&c));
                }
                acc
            }
        }
    }
    go(inner, total)
}

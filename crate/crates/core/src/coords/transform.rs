use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;

use super::series::{solve_charges, tstate_scale, Ring, TSeries, TState};
use super::{apply_charge, lowering, CoordChange, VirasoroCharge};
use crate::error::{Error, Result};
use crate::fock::State;
use crate::half::Half;
use crate::presets::AlgebraInstance;
use crate::scalars::{binomial, Scalar};

/// How exactly both sides of a transformation identity are compared.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Truncation {
    Exact,
    /// Work modulo `var^2`; every charge `v_j`, `j >= 1`, must vanish at
    /// `var = 0`.
    FirstOrder(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransformReport {
    pub check: String,
    pub degree: Half,
    pub passed: bool,
    pub states: usize,
    pub coefficients: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl TransformReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn summary(&self) -> String {
        let mut out = format!(
            "{}  degree {}  {} states  {} coefficients  {}",
            self.check,
            self.degree,
            self.states,
            self.coefficients,
            if self.passed { "pass" } else { "FAIL" }
        );
        if let Some(w) = &self.witness {
            out.push_str(&format!("\n  {w}"));
        }
        out
    }
}

fn binom_scalar(n: i64, k: i64) -> Scalar {
    Scalar::from_rational(binomial(n, k))
}

/// Coefficients `c_i(t)` of `rho_t(z) = rho(t+z) - rho(t) = sum_i c_i(t) z^i`
/// for `i <= m`, each modulo `t^prec`.
fn shifted_coeffs(rho: &CoordChange, m: usize, prec: usize) -> Vec<TSeries> {
    (0..=m)
        .map(|i| {
            if i == 0 {
                return TSeries::zero(prec);
            }
            let coeffs = (0..prec)
                .map(|k| &rho.coeff(i + k) * &binom_scalar((i + k) as i64, i as i64))
                .collect();
            TSeries::from_coeffs(coeffs, prec)
        })
        .collect()
}

fn is_unit(s: &TSeries) -> bool {
    s.coeffs.iter().enumerate().all(|(k, c)| if k == 0 { c.is_one() } else { c.is_zero() })
}

fn degree_parts(inst: &AlgebraInstance, s: &State) -> BTreeMap<Half, State> {
    let mut out: BTreeMap<Half, State> = BTreeMap::new();
    for (m, c) in s.iter() {
        out.entry(inst.fock().degree(m)).or_default().add_term(m.clone(), c.clone());
    }
    out
}

/// `v0^{L_0}` applied to a state-valued series, `v0` itself a series.
fn scale_series_l0(inst: &AlgebraInstance, v0: &TSeries, b: &TState) -> Result<TState> {
    if is_unit(v0) {
        return Ok(b.clone());
    }
    let mut degrees = BTreeSet::new();
    for s in b {
        degrees.extend(s.monomials().map(|m| inst.fock().degree(m)));
    }
    let mut out = vec![State::zero(); b.len()];
    for deg in degrees {
        let d = deg.to_int().ok_or_else(|| Error::NonIntegralDegree(deg.to_string()))?;
        let part: TState = b.iter().map(|s| s.filter(|m| inst.fock().degree(m) == deg)).collect();
        for (o, x) in out.iter_mut().zip(tstate_scale(&part, &v0.pow(d)?)) {
            *o = o.add(&x);
        }
    }
    Ok(out)
}

/// `R(rho_t)^{-1} a` as a series in `t` modulo `t^prec`, for homogeneous `a`.
fn conjugated_state(inst: &AlgebraInstance, rho: &CoordChange, a: &State, delta: Half, prec: usize) -> Result<TState> {
    let m = (delta.ceil().max(1) + 1) as usize;
    let c = shifted_coeffs(rho, m, prec);
    let inv1 = c[1].inv()?;
    let plus: Vec<TSeries> = c.iter().map(|x| x.mul(&inv1)).collect();
    let v = solve_charges(&plus, m, &c[1]);
    let mut term: TState = vec![State::zero(); prec];
    term[0] = a.clone();
    let mut out = term.clone();
    for k in 1.. {
        let mut next: TState = vec![State::zero(); prec];
        for (j, vj) in v.iter().enumerate().skip(1) {
            if vj.is_zero() {
                continue;
            }
            let applied: TState = term
                .iter()
                .map(|s| inst.virasoro_mode(j as i64, s))
                .collect::<Result<_>>()?;
            for (o, x) in next.iter_mut().zip(tstate_scale(&applied, vj)) {
                *o = o.add(&x);
            }
        }
        if next.iter().all(State::is_zero) {
            break;
        }
        let inv_k = Scalar::from_ratio(1, k);
        term = next.iter().map(|s| s.scale(&inv_k)).collect();
        for (o, x) in out.iter_mut().zip(&term) {
            *o = o.add(x);
        }
    }
    scale_series_l0(inst, &c[1], &out)
}

pub(super) struct Engine<'a> {
    inst: &'a AlgebraInstance,
    rho: CoordChange,
    d: Half,
    trunc: Truncation,
    charges: VirasoroCharge,
    /// Largest `j` with a nonzero charge, `None` when unbounded.
    reach: Option<usize>,
}

impl<'a> Engine<'a> {
    pub(super) fn new(inst: &'a AlgebraInstance, rho: &CoordChange, d: Half, trunc: &Truncation) -> Result<Engine<'a>> {
        inst.conformal_vector().ok_or(Error::NotConformal)?;
        let order = (3 * d.ceil().max(0) + 4) as usize;
        let rho = rho.with_order(order.max(rho.order()));
        let mut charges = rho.decompose();
        let reach = match trunc {
            Truncation::Exact => {
                if charges.v.iter().skip(1).all(Scalar::is_zero) {
                    Some(0)
                } else {
                    None
                }
            }
            Truncation::FirstOrder(var) => {
                let mut reach = 0;
                for j in 1..charges.v.len() {
                    let vj = charges.v[j].truncate_in(var, 2)?;
                    if !vj.truncate_in(var, 1)?.is_zero() {
                        return Err(Error::Unsupported(format!(
                            "charge v_{j} does not vanish at {var} = 0; first-order mode needs a near-identity change"
                        )));
                    }
                    if !vj.is_zero() {
                        reach = j;
                    }
                    charges.v[j] = vj;
                }
                Some(reach)
            }
        };
        Ok(Engine {
            inst,
            rho,
            d,
            trunc: trunc.clone(),
            charges,
            reach,
        })
    }

    fn reduce(&self, s: &State) -> Result<State> {
        match &self.trunc {
            Truncation::Exact => Ok(s.clone()),
            Truncation::FirstOrder(var) => s.map_scalars(|c| c.truncate_in(var, 2)),
        }
    }

    fn low(&self, s: &State) -> State {
        s.filter(|m| self.inst.fock().degree(m) <= self.d)
    }

    /// `R(rho) u` projected to degrees `<= d`.
    fn r_project(&self, u: &State) -> Result<State> {
        let out = match &self.trunc {
            Truncation::Exact => apply_charge(self.inst, &self.charges, u)?,
            Truncation::FirstOrder(_) => {
                let b = super::scale_l0(self.inst, self.charges.v0(), -1, u)?;
                let reach = self.reach.unwrap_or(0);
                b.sub(&lowering(self.inst, &self.charges.v, reach, &b)?)
            }
        };
        Ok(self.low(&out))
    }

    /// Compare `Y(A, t) R(rho) v` with `R(rho) Y(B(t), rho(t)) v` on every
    /// basis state `v`, where `B(t)` is the supplied series for the
    /// homogeneous `A` of degree `delta`.
    fn compare(&self, a: &State, delta: Half, b: &TState, p_hi: i64) -> Result<(usize, usize, Option<String>)> {
        let inst = self.inst;
        let va = inst.va();
        let prec = b.len();
        let q = TSeries::from_coeffs((0..prec).map(|k| self.rho.coeff(k + 1)).collect(), prec);
        let s_min = (-self.d - delta).floor();
        let qpow: BTreeMap<i64, TSeries> = (s_min..=p_hi).map(|s| Ok((s, q.pow(s)?))).collect::<Result<_>>()?;
        let b_parts: Vec<BTreeMap<Half, State>> = b.iter().map(|s| degree_parts(inst, s)).collect();
        let basis = inst.fock().basis_up_to(self.d);
        let outcomes: Vec<Result<(usize, Option<String>)>> = basis
            .par_iter()
            .map(|mono| {
                let v = State::from_monomial(mono.clone());
                let dv = inst.fock().degree(mono);
                let mut lhs: BTreeMap<i64, State> = BTreeMap::new();
                let rv = self.r_project(&v)?;
                let p_lo = (-dv - delta).ceil();
                for p in p_lo..=p_hi {
                    let n = Half::from_int(-p) - delta;
                    let out = self.low(&va.mode_apply(a, n, &rv));
                    lhs.insert(p, out);
                }
                let mut rhs: BTreeMap<i64, State> = BTreeMap::new();
                for (k, parts) in b_parts.iter().enumerate() {
                    let k = k as i64;
                    for (deg, bk) in parts {
                        let s_lo = (-dv - *deg).ceil();
                        for s in s_lo..=(p_hi - k) {
                            let n = Half::from_int(-s) - *deg;
                            let deg_u = dv - n;
                            if let Some(r) = self.reach {
                                if deg_u - Half::from_int(r as i64) > self.d {
                                    continue;
                                }
                            }
                            let u = va.mode_apply(bk, n, &v);
                            if u.is_zero() {
                                continue;
                            }
                            let ru = self.r_project(&u)?;
                            if ru.is_zero() {
                                continue;
                            }
                            let qs = &qpow[&s];
                            for i in 0..=(p_hi - k - s) {
                                let c = &qs.coeffs[i as usize];
                                if !c.is_zero() {
                                    rhs.entry(k + s + i).or_default().add_scaled(&ru, c);
                                }
                            }
                        }
                    }
                }
                let powers: BTreeSet<i64> = lhs.keys().chain(rhs.keys()).copied().collect();
                for p in &powers {
                    let l = self.reduce(&lhs.get(p).cloned().unwrap_or_default())?;
                    let r = self.reduce(&rhs.get(p).cloned().unwrap_or_default())?;
                    if l != r {
                        return Ok((
                            powers.len(),
                            Some(format!(
                                "v = {}, A = {}, coefficient of t^{p}: {} on the left, {} on the right",
                                inst.render(&v),
                                inst.render(a),
                                inst.render(&l),
                                inst.render(&r)
                            )),
                        ));
                    }
                }
                Ok((powers.len(), None))
            })
            .collect();
        let mut coefficients = 0;
        let mut witness = None;
        for o in outcomes {
            let (n, w) = o?;
            coefficients += n;
            if witness.is_none() {
                witness = w;
            }
        }
        Ok((basis.len(), coefficients, witness))
    }

    pub(super) fn run(&self, check: &str, a: &State, make_b: impl Fn(&State, Half, usize) -> Result<TState>) -> Result<TransformReport> {
        let mut states = 0;
        let mut coefficients = 0;
        let mut witness = None;
        for (delta, part) in degree_parts(self.inst, a) {
            let p_hi = (self.d - delta).floor();
            let prec = (p_hi - (-self.d - delta).floor() + 1).max(1) as usize;
            let b = make_b(&part, delta, prec)?;
            let b: TState = b.iter().map(|s| self.reduce(s)).collect::<Result<_>>()?;
            let (n, c, w) = self.compare(&part, delta, &b, p_hi)?;
            states = states.max(n);
            coefficients += c;
            if witness.is_none() {
                witness = w;
            }
        }
        Ok(TransformReport {
            check: check.into(),
            degree: self.d,
            passed: witness.is_none(),
            states,
            coefficients,
            witness,
        })
    }
}

/// Check `Y(A, t) = R(rho) Y(R(rho_t)^{-1} A, rho(t)) R(rho)^{-1}` on all
/// basis states up to degree `d`, as series in `t`, keeping output
/// components of degree at most `d`.
pub fn huang_check(
    inst: &AlgebraInstance,
    a: &State,
    rho: &CoordChange,
    d: Half,
    trunc: &Truncation,
) -> Result<TransformReport> {
    let engine = Engine::new(inst, rho, d, trunc)?;
    engine.run("transformation", a, |part, delta, prec| {
        conjugated_state(inst, &engine.rho, part, delta, prec)
    })
}

/// For primary `A` of degree `Delta`:
/// `Y(A, t) = rho'(t)^Delta R(rho) Y(A, rho(t)) R(rho)^{-1}`.
pub fn primary_differential_check(
    inst: &AlgebraInstance,
    a: &State,
    rho: &CoordChange,
    d: Half,
    trunc: &Truncation,
) -> Result<TransformReport> {
    let engine = Engine::new(inst, rho, d, trunc)?;
    for (delta, part) in degree_parts(inst, a) {
        for n in 1..=delta.ceil() {
            if !inst.virasoro_mode(n, &part)?.is_zero() {
                return Err(Error::NotPrimary { mode: n });
            }
        }
    }
    engine.run("primary", a, |part, delta, prec| {
        let c = shifted_coeffs(&engine.rho, 1, prec);
        let w = match delta.to_int() {
            Some(dl) => c[1].pow(dl)?,
            None if is_unit(&c[1]) => c[1].clone(),
            None => return Err(Error::NonIntegralDegree(delta.to_string())),
        };
        let mut b = vec![State::zero(); prec];
        for (slot, x) in b.iter_mut().zip(&w.coeffs) {
            *slot = part.scale(x);
        }
        Ok(b)
    })
}

/// The infinitesimal form of the transformation law for the vector field
/// `z^{n+1} d/dz`:
/// `[L_n, A_p] = sum_{m=-1}^{n} binom(n+1, m+1) (L_m A)_{p+n}`,
/// checked on all basis states up to degree `d` and every mode `p` whose
/// outputs reach degrees at most `d + n`.
pub fn infinitesimal_action_check(inst: &AlgebraInstance, a: &State, n: i64, d: Half) -> Result<TransformReport> {
    inst.conformal_vector().ok_or(Error::NotConformal)?;
    let va = inst.va();
    let mut states = 0;
    let mut coefficients = 0;
    let mut witness = None;
    for (delta, part) in degree_parts(inst, a) {
        let lm: Vec<(Scalar, State)> = (-1..=n)
            .map(|m| Ok((binom_scalar(n + 1, m + 1), inst.virasoro_mode(m, &part)?)))
            .collect::<Result<_>>()?;
        let basis = inst.fock().basis_up_to(d);
        states = states.max(basis.len());
        for mono in &basis {
            let v = State::from_monomial(mono.clone());
            let dv = inst.fock().degree(mono);
            for q in (dv + delta - d).floor() - 1..=(dv + delta + Half::from_int(n.max(0))).ceil() + 1 {
                let p = Half::from_int(q) - delta;
                let lhs = inst
                    .virasoro_mode(n, &va.mode_apply(&part, p, &v))?
                    .sub(&va.mode_apply(&part, p, &inst.virasoro_mode(n, &v)?));
                let mut rhs = State::zero();
                for (c, s) in &lm {
                    if !s.is_zero() {
                        rhs.add_scaled(&va.mode_apply(s, p + Half::from_int(n), &v), c);
                    }
                }
                coefficients += 1;
                if lhs != rhs && witness.is_none() {
                    witness = Some(format!(
                        "v = {}, mode {p}: {} from the commutator, {} from the expansion",
                        inst.render(&v),
                        inst.render(&lhs),
                        inst.render(&rhs)
                    ));
                }
            }
        }
    }
    Ok(TransformReport {
        check: "infinitesimal".into(),
        degree: d,
        passed: witness.is_none(),
        states,
        coefficients,
        witness,
    })
}

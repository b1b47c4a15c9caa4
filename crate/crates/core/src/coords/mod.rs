//! Changes of formal coordinate and their action on a conformal vertex
//! algebra through the nonnegative Virasoro modes.
//!
//! A change `rho(z) = rho_1 z + rho_2 z^2 + ...` acts by
//! `R(rho) = exp(-sum_{j>=1} v_j L_j) v_0^{-L_0}`, where
//! `rho(z) = v_0 exp(sum_{j>=1} v_j z^{j+1} d/dz) z`. With the product
//! `(rho * mu)(z) = mu(rho(z))` this is a homomorphism:
//! `R(rho * mu) = R(rho) R(mu)`.

mod series;
mod transform;

use serde::Serialize;

pub use series::TSeries;
pub use transform::{huang_check, infinitesimal_action_check, primary_differential_check, TransformReport, Truncation};

use crate::error::{Error, Result};
use crate::fock::State;
use crate::presets::AlgebraInstance;
use crate::scalars::{parse_scalar, Scalar};
use series::{exp_field_on_z, solve_charges};

/// `rho(z) = sum_{i=1}^{M} rho_i z^i` modulo `z^{M+1}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoordChange {
    coeffs: Vec<Scalar>,
}

impl CoordChange {
    /// `coeffs[i]` is `rho_{i+1}`.
    pub fn new(coeffs: Vec<Scalar>) -> Result<CoordChange> {
        match coeffs.first() {
            Some(c) if !c.is_zero() => Ok(CoordChange { coeffs }),
            _ => Err(Error::NonInvertibleLinearTerm),
        }
    }

    pub fn identity(order: usize) -> CoordChange {
        CoordChange::scaling(Scalar::one(), order).expect("1 is invertible")
    }

    pub fn scaling(a: Scalar, order: usize) -> Result<CoordChange> {
        let mut coeffs = vec![Scalar::zero(); order.max(1)];
        coeffs[0] = a;
        CoordChange::new(coeffs)
    }

    /// Parse a comma-separated coefficient list `"rho_1, rho_2, ..."`.
    pub fn parse(src: &str) -> Result<CoordChange> {
        let coeffs = src
            .split(',')
            .map(|s| parse_scalar(s.trim()))
            .collect::<Result<Vec<_>>>()?;
        CoordChange::new(coeffs)
    }

    /// Truncation order `M`.
    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    /// `rho_i`; zero past the truncation order.
    pub fn coeff(&self, i: usize) -> Scalar {
        if i == 0 {
            return Scalar::zero();
        }
        self.coeffs.get(i - 1).cloned().unwrap_or_default()
    }

    pub fn coefficients(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// The same series read modulo `z^{order+1}`, padding with zeros.
    pub fn with_order(&self, order: usize) -> CoordChange {
        let mut coeffs = self.coeffs.clone();
        coeffs.resize(order.max(1), Scalar::zero());
        CoordChange { coeffs }
    }

    fn series(&self) -> Vec<Scalar> {
        (0..=self.order()).map(|i| self.coeff(i)).collect()
    }

    /// `(self * mu)(z) = mu(self(z))`.
    pub fn compose(&self, mu: &CoordChange) -> Result<CoordChange> {
        if self.order() != mu.order() {
            return Err(Error::TruncationMismatch(self.order(), mu.order()));
        }
        let m = self.order();
        let inner = self.series();
        let mut power = inner.clone();
        let mut out = vec![Scalar::zero(); m + 1];
        for i in 1..=m {
            let c = mu.coeff(i);
            if !c.is_zero() {
                for (o, p) in out.iter_mut().zip(&power) {
                    *o += &(&c * p);
                }
            }
            power = poly_mul(&power, &inner, m);
        }
        CoordChange::new(out[1..].to_vec())
    }

    /// The compositional inverse modulo `z^{M+1}`.
    pub fn inverse(&self) -> Result<CoordChange> {
        let m = self.order();
        let inv1 = self.coeffs[0].inv()?;
        let mut sigma = vec![Scalar::zero(); m];
        sigma[0] = inv1.clone();
        for n in 2..=m {
            let trial = CoordChange::new(sigma.clone())?;
            let got = trial.compose(self)?;
            sigma[n - 1] = -(&got.coeff(n) * &inv1);
        }
        CoordChange::new(sigma)
    }

    pub fn decompose(&self) -> VirasoroCharge {
        let m = self.order();
        let inv1 = self.coeffs[0].inv().expect("invertible linear term");
        let plus: Vec<Scalar> = self.series().iter().map(|c| c * &inv1).collect();
        let mut v = solve_charges(&plus, m, &Scalar::one());
        v[0] = self.coeffs[0].clone();
        VirasoroCharge { v }
    }

    pub fn render(&self) -> String {
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| {
                let z = if i == 0 { "z".to_string() } else { format!("z^{}", i + 1) };
                if c.is_one() {
                    z
                } else {
                    format!("({c})*{z}")
                }
            })
            .collect();
        format!("{} + O(z^{})", terms.join(" + "), self.order() + 1)
    }
}

fn poly_mul(a: &[Scalar], b: &[Scalar], m: usize) -> Vec<Scalar> {
    let mut out = vec![Scalar::zero(); m + 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(m + 1 - i) {
            if !y.is_zero() {
                out[i + j] += &(x * y);
            }
        }
    }
    out
}

/// `v[0] = v_0` is the linear coefficient; `v[j]`, `j >= 1`, multiplies
/// `z^{j+1} d/dz` in the exponent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VirasoroCharge {
    pub v: Vec<Scalar>,
}

impl VirasoroCharge {
    pub fn v0(&self) -> &Scalar {
        &self.v[0]
    }

    /// `v_j`; zero past the stored order.
    pub fn get(&self, j: usize) -> Scalar {
        self.v.get(j).cloned().unwrap_or_default()
    }

    pub fn reconstruct(&self) -> Result<CoordChange> {
        let m = self.v.len();
        let e = exp_field_on_z(&self.v, m, &Scalar::one());
        CoordChange::new(e[1..].iter().map(|c| c * &self.v[0]).collect())
    }
}

fn max_degree(inst: &AlgebraInstance, a: &State) -> i64 {
    a.monomials().map(|m| inst.fock().degree(m).ceil()).max().unwrap_or(0)
}

/// `c^{sign * L_0} a`.
pub(crate) fn scale_l0(inst: &AlgebraInstance, c: &Scalar, sign: i64, a: &State) -> Result<State> {
    if c.is_one() {
        return Ok(a.clone());
    }
    let mut out = State::zero();
    for (m, x) in a.iter() {
        let deg = inst.fock().degree(m);
        let d = deg.to_int().ok_or_else(|| Error::NonIntegralDegree(deg.to_string()))?;
        out.add_term(m.clone(), x * &c.pow(sign * d)?);
    }
    Ok(out)
}

/// `sum_{j>=1} v_j L_j a`, skipping `j` past `jmax`.
pub(crate) fn lowering(inst: &AlgebraInstance, v: &[Scalar], jmax: usize, a: &State) -> Result<State> {
    let top = max_degree(inst, a).max(0) as usize;
    let mut out = State::zero();
    for (j, c) in v.iter().enumerate().skip(1).take(top.min(jmax)) {
        if !c.is_zero() {
            out.add_scaled(&inst.virasoro_mode(j as i64, a)?, c);
        }
    }
    Ok(out)
}

/// `exp(sign * sum_{j>=1} v_j L_j) a`.
pub(crate) fn exp_lowering(inst: &AlgebraInstance, v: &[Scalar], sign: i64, a: &State) -> Result<State> {
    let mut out = a.clone();
    let mut term = a.clone();
    let mut k = 1;
    loop {
        let next = lowering(inst, v, usize::MAX, &term)?;
        if next.is_zero() {
            return Ok(out);
        }
        term = next.scale(&Scalar::from_ratio(sign, k));
        out = out.add(&term);
        k += 1;
    }
}

/// Charges good enough to act on states up to degree `d`.
fn charges_for(rho: &CoordChange, d: i64) -> VirasoroCharge {
    let need = (d.max(0) + 1) as usize;
    rho.with_order(need.max(rho.order())).decompose()
}

/// `R(rho) a = exp(-sum v_j L_j) v_0^{-L_0} a`. Coefficients of `rho` past
/// its order count as zero; on states of degree `d` only `rho_1..rho_{d+1}`
/// matter.
pub fn r_apply(inst: &AlgebraInstance, rho: &CoordChange, a: &State) -> Result<State> {
    let vc = charges_for(rho, max_degree(inst, a));
    apply_charge(inst, &vc, a)
}

/// `R(rho)^{-1} a = v_0^{L_0} exp(sum v_j L_j) a`.
pub fn r_inverse_apply(inst: &AlgebraInstance, rho: &CoordChange, a: &State) -> Result<State> {
    let vc = charges_for(rho, max_degree(inst, a));
    let b = exp_lowering(inst, &vc.v, 1, a)?;
    scale_l0(inst, vc.v0(), 1, &b)
}

pub(crate) fn apply_charge(inst: &AlgebraInstance, vc: &VirasoroCharge, a: &State) -> Result<State> {
    let b = scale_l0(inst, vc.v0(), -1, a)?;
    exp_lowering(inst, &vc.v, -1, &b)
}

#[cfg(test)]
mod tests;

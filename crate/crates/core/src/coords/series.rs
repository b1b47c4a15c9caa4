use crate::error::Result;
use crate::fock::State;
use crate::scalars::Scalar;

/// Coefficients that support the ring operations needed to split a
/// coordinate change into Virasoro charges.
pub(crate) trait Ring: Clone {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, k: &Scalar) -> Self;
    fn inv(&self) -> Result<Self>;
    fn is_zero(&self) -> bool;
}

impl Ring for Scalar {
    fn zero_like(&self) -> Scalar {
        Scalar::zero()
    }
    fn one_like(&self) -> Scalar {
        Scalar::one()
    }
    fn add(&self, o: &Scalar) -> Scalar {
        self + o
    }
    fn sub(&self, o: &Scalar) -> Scalar {
        self - o
    }
    fn mul(&self, o: &Scalar) -> Scalar {
        self * o
    }
    fn scale(&self, k: &Scalar) -> Scalar {
        self * k
    }
    fn inv(&self) -> Result<Scalar> {
        Scalar::inv(self)
    }
    fn is_zero(&self) -> bool {
        Scalar::is_zero(self)
    }
}

/// A power series in `t` known modulo `t^prec`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    pub coeffs: Vec<Scalar>,
}

impl TSeries {
    pub fn zero(prec: usize) -> TSeries {
        TSeries {
            coeffs: vec![Scalar::zero(); prec],
        }
    }

    pub fn constant(c: Scalar, prec: usize) -> TSeries {
        let mut s = TSeries::zero(prec);
        if prec > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn from_coeffs(mut coeffs: Vec<Scalar>, prec: usize) -> TSeries {
        coeffs.resize(prec, Scalar::zero());
        TSeries { coeffs }
    }

    pub fn prec(&self) -> usize {
        self.coeffs.len()
    }

    /// `self^e` for any integer `e`; the constant term must be invertible
    /// when `e < 0`.
    pub fn pow(&self, e: i64) -> Result<TSeries> {
        let base = if e < 0 { Ring::inv(self)? } else { self.clone() };
        let mut out = self.one_like();
        for _ in 0..e.unsigned_abs() {
            out = Ring::mul(&out, &base);
        }
        Ok(out)
    }

    pub fn map(&self, f: impl Fn(&Scalar) -> Result<Scalar>) -> Result<TSeries> {
        Ok(TSeries {
            coeffs: self.coeffs.iter().map(f).collect::<Result<_>>()?,
        })
    }
}

impl Ring for TSeries {
    fn zero_like(&self) -> TSeries {
        TSeries::zero(self.prec())
    }
    fn one_like(&self) -> TSeries {
        TSeries::constant(Scalar::one(), self.prec())
    }
    fn add(&self, o: &TSeries) -> TSeries {
        TSeries {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
    fn sub(&self, o: &TSeries) -> TSeries {
        TSeries {
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
    fn mul(&self, o: &TSeries) -> TSeries {
        let p = self.prec().min(o.prec());
        let mut out = TSeries::zero(p);
        for (i, a) in self.coeffs.iter().enumerate().take(p) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate().take(p - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += &(a * b);
                }
            }
        }
        out
    }
    fn scale(&self, k: &Scalar) -> TSeries {
        TSeries {
            coeffs: self.coeffs.iter().map(|a| a * k).collect(),
        }
    }
    fn inv(&self) -> Result<TSeries> {
        let p = self.prec();
        let c0 = self.coeffs[0].inv()?;
        let mut out = TSeries::zero(p);
        for n in 0..p {
            let mut acc = if n == 0 { Scalar::one() } else { Scalar::zero() };
            for j in 1..=n {
                acc -= &(&self.coeffs[j] * &out.coeffs[n - j]);
            }
            out.coeffs[n] = &acc * &c0;
        }
        Ok(out)
    }
    fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }
}

/// A state-valued power series in `t`: entry `k` multiplies `t^k`.
pub(crate) type TState = Vec<State>;

pub(crate) fn tstate_scale(s: &TState, c: &TSeries) -> TState {
    let p = s.len().min(c.prec());
    let mut out = vec![State::zero(); p];
    for (i, a) in s.iter().enumerate().take(p) {
        if a.is_zero() {
            continue;
        }
        for (j, b) in c.coeffs.iter().enumerate().take(p - i) {
            if !b.is_zero() {
                out[i + j].add_scaled(a, b);
            }
        }
    }
    out
}

/// `exp(sum_j v_j z^{j+1} d/dz) z` modulo `z^{m+1}`; `v[j]` for `j >= 1`.
pub(crate) fn exp_field_on_z<R: Ring>(v: &[R], m: usize, proto: &R) -> Vec<R> {
    let mut term = vec![proto.zero_like(); m + 1];
    if m >= 1 {
        term[1] = proto.one_like();
    }
    let mut out = term.clone();
    for k in 1..=m {
        // term <- D(term) / k
        let mut next = vec![proto.zero_like(); m + 1];
        for (i, slot) in next.iter_mut().enumerate() {
            for (j, vj) in v.iter().enumerate().skip(1) {
                if j >= i || vj.is_zero() || term[i - j].is_zero() {
                    continue;
                }
                let c = Scalar::from_int((i - j) as i64);
                *slot = slot.add(&vj.mul(&term[i - j]).scale(&c));
            }
        }
        let inv_k = Scalar::from_ratio(1, k as i64);
        term = next.iter().map(|x| x.scale(&inv_k)).collect();
        if term.iter().all(Ring::is_zero) {
            break;
        }
        for (o, t) in out.iter_mut().zip(&term) {
            *o = o.add(t);
        }
    }
    out
}

/// Charges `v_1 .. v_{m-1}` (index 0 unused) with
/// `exp(sum v_j z^{j+1} d/dz) z = plus(z)` modulo `z^{m+1}`; `plus[1] = 1`.
pub(crate) fn solve_charges<R: Ring>(plus: &[R], m: usize, proto: &R) -> Vec<R> {
    let mut v = vec![proto.zero_like(); m.max(1)];
    for j in 1..m {
        let e = exp_field_on_z(&v, m, proto);
        v[j] = plus[j + 1].sub(&e[j + 1]);
    }
    v
}
